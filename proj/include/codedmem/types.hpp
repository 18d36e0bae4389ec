#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace codedmem {

using Word = std::uint64_t;
using RowIndex = std::uint32_t;
using Cycle = std::uint64_t;
using TimeNs = std::uint64_t;
using RequestId = std::uint64_t;

/// Rejected configuration or command-line input. Mapped to exit code 2 by the CLI.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed trace or config text. Carries the offending line number.
struct TraceParseError : std::runtime_error {
  TraceParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_no(line) {}
  std::size_t line_no;
};

/// Mismatched row widths or image dimensions.
struct ShapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A broken simulator invariant (e.g. a double-booked bank). Indicates a
/// scheduler bug, not bad input. Mapped to exit code 3 by the CLI.
struct SimulationFault : std::logic_error {
  using std::logic_error::logic_error;
};

/// Location of one word in the logical (data-bank) address space.
struct Address {
  int bank = 0;       // data bank index
  RowIndex row = 0;   // row within the bank, < L
  RowIndex col = 0;   // word within the row, < W
  bool operator==(const Address&) const = default;
};

using RowValue = std::vector<Word>;

}  // namespace codedmem
