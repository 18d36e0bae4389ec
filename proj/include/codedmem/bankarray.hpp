#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "codedmem/codes.hpp"
#include "codedmem/types.hpp"

namespace codedmem {

/// One operation on one physical bank within a memory cycle.
struct BankOp {
  enum class Kind : std::uint8_t { Read, Write };
  enum class Purpose : std::uint8_t { Demand, Recode, Encode, Refresh };
  int phys_bank = -1;
  Kind kind = Kind::Read;
  Purpose purpose = Purpose::Demand;
  RowIndex phys_row = 0;
  RowValue value;                   // writes only
  std::vector<RequestId> serving;   // demand requests this op helps serve
};

/// The per-memory-cycle schedule: at most one op per physical bank, plus the
/// decode recipe for every read request served this cycle.
struct AccessPattern {
  Cycle cycle = 0;
  char mode = 'R';  // R / W / C (recode-only)
  std::vector<BankOp> ops;

  struct Recipe {
    RequestId request = 0;
    ReadPlan plan;  // plan.reads lists the physical rows to XOR
  };
  std::vector<Recipe> recipes;

  bool bank_busy(int phys_bank) const {
    for (const auto& op : ops) {
      if (op.phys_bank == phys_bank) return true;
    }
    return false;
  }
  const BankOp* op_on(int phys_bank) const {
    for (const auto& op : ops) {
      if (op.phys_bank == phys_bank) return &op;
    }
    return nullptr;
  }
};

struct ReadResult {
  int phys_bank = -1;
  RowIndex phys_row = 0;
  RowValue value;
};

/// Physical bank contents. Reads observe the state at cycle start; writes
/// commit after all reads of the same pattern.
class BankState {
 public:
  explicit BankState(const CodeLayout& layout);

  const CodeLayout& layout() const { return *layout_; }

  std::span<const Word> row(int phys_bank, RowIndex row) const;
  void poke_row(int phys_bank, RowIndex row, std::span<const Word> value);

  /// Executes one pattern. Throws SimulationFault if any bank is booked twice
  /// (single-port violation). Returns the read results in op order.
  std::vector<ReadResult> apply_pattern(const AccessPattern& pattern);

  /// Loads data banks from a flat logical image (bank-major, then row, then
  /// word) and encodes every parity segment through the given coverage.
  void initialize_from_oracle(std::span<const Word> flat, const RowCoverage& coverage);

  /// `<bank> <row> <hex words>` per row, for golden-file tests.
  std::string snapshot_dump() const;

  RowIndex depth(int phys_bank) const;

 private:
  const CodeLayout* layout_;
  std::vector<std::vector<Word>> banks_;  // [phys bank] -> rows * W words
  std::vector<char> busy_;
};

/// Maps logical data rows into slot-granular parity segment space for the
/// dynamic coder. Slots hold one region each; exactly one slot is spare so a
/// new region can be encoded while the active ones keep serving.
class RowMap final : public RowCoverage {
 public:
  enum class SlotState : std::uint8_t { Free, Scratch, Active, Draining };

  RowMap(RowIndex region_rows, int active_slots);

  std::optional<RowIndex> segment_row(RowIndex data_row) const override;
  std::optional<RowIndex> segment_row_for_writeback(RowIndex data_row) const override;

  int slot_count() const { return static_cast<int>(slots_.size()); }
  RowIndex region_rows() const { return region_rows_; }
  RowIndex capacity_rows() const { return region_rows_ * slots_.size(); }

  bool has_free_slot() const;
  bool region_mapped(RowIndex region_base) const;

  /// Claims a free slot for an encode in progress. Rows of the region stay
  /// invisible to segment_row until activate().
  int begin_encode(RowIndex region_base, RowIndex rows);
  void activate(int slot);
  void abort_encode(int slot);
  /// Active -> Draining: holder writebacks still resolve, plans do not.
  void drain(int slot);
  void release(int slot);  // Draining -> Free

  SlotState slot_state(int slot) const { return slots_[slot].state; }
  RowIndex slot_region_base(int slot) const { return slots_[slot].region_base; }
  std::optional<int> slot_of_region(RowIndex region_base) const;
  /// Physical segment-space row range of a slot: [slot*region_rows, ...+rows).
  std::pair<RowIndex, RowIndex> slot_row_range(int slot) const;

 private:
  struct Slot {
    SlotState state = SlotState::Free;
    RowIndex region_base = 0;
    RowIndex rows = 0;
  };
  std::vector<Slot> slots_;
  RowIndex region_rows_;

  std::optional<RowIndex> lookup(RowIndex data_row, bool include_draining) const;
};

}  // namespace codedmem
