#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "codedmem/types.hpp"

namespace codedmem {

enum class Scheme {
  Uncoded,
  SchemeI,
  SchemeII,
  SchemeIII,
  ReadReplication,
  RWReplication,
};

std::string scheme_name(Scheme s);
std::optional<Scheme> scheme_from_name(const std::string& name);

/// One run of rows inside a parity bank: either an XOR of aligned rows from
/// two or more data banks, or a verbatim copy of a single bank.
struct ParitySegment {
  std::vector<int> source_banks;  // sorted data bank indices; size 1 = replica
  RowIndex coded_rows = 0;        // rows physically reserved for this segment
  RowIndex row_offset = 0;        // first physical row inside the parity bank
  bool is_replica() const { return source_banks.size() == 1; }
};

struct ParityBankSpec {
  int id = 0;  // index among parity banks; physical id = num_data_banks + id
  RowIndex depth_rows = 0;
  std::vector<ParitySegment> segments;
};

/// Identifies one segment: (parity bank index, segment index within it).
struct SegmentRef {
  int parity_bank = -1;
  int seg_index = -1;
  bool operator==(const SegmentRef&) const = default;
  auto operator<=>(const SegmentRef&) const = default;
};

/// Immutable description of a bank array: data banks plus the parity banks
/// that encode them. Safe to share across threads once built.
struct CodeLayout {
  Scheme scheme = Scheme::Uncoded;
  int num_data_banks = 0;
  RowIndex rows_per_bank = 0;   // L
  RowIndex words_per_row = 0;   // W
  double alpha = 1.0;           // overhead fraction in (0,1]
  int replication_r = 0;
  int replication_w = 0;
  std::vector<ParityBankSpec> parity_banks;
  std::vector<std::vector<int>> groups;  // partition of the data banks

  // Rows a parity segment can hold. Static layouts cover data rows
  // [0, segment_capacity_rows) directly; dynamic runs remap regions into the
  // same space.
  RowIndex segment_capacity_rows = 0;

  int total_banks() const { return num_data_banks + static_cast<int>(parity_banks.size()); }
  int parity_phys(int parity_id) const { return num_data_banks + parity_id; }
  std::uint64_t data_rows() const {
    return static_cast<std::uint64_t>(num_data_banks) * rows_per_bank;
  }
  std::uint64_t parity_rows() const;
  std::uint64_t address_space_bytes() const {
    return data_rows() * words_per_row * sizeof(Word);
  }

  const ParitySegment& segment(SegmentRef ref) const {
    return parity_banks[ref.parity_bank].segments[ref.seg_index];
  }
  /// Segments whose source set contains the given data bank, in global
  /// (parity bank, segment) order.
  const std::vector<SegmentRef>& covering(int data_bank) const { return covering_[data_bank]; }
  /// Ordinal of a segment in global enumeration order; used for deterministic
  /// tie-breaking by the scheduler.
  int segment_ordinal(SegmentRef ref) const;

  void rebuild_index();  // populates covering_; called by the builders

 private:
  std::vector<std::vector<SegmentRef>> covering_;
};

// --- freshness -------------------------------------------------------------

enum class RowStatus : std::uint8_t {
  AllFresh,    // data and every covering parity row agree with the logical value
  DataFresh,   // the data bank holds the latest value; parity rows are stale
  ParityFresh, // one parity bank row buffers the latest value verbatim
};

/// Read-only view of per-row freshness used by plan enumeration. The
/// controller's status table implements it; tests use AllFreshView.
class FreshnessView {
 public:
  virtual ~FreshnessView() = default;
  virtual RowStatus row_status(int bank, RowIndex row) const = 0;
  virtual SegmentRef fresh_holder(int bank, RowIndex row) const = 0;
  /// False while a physical parity row does not hold its code value
  /// (e.g. it is buffering a redirected write).
  virtual bool parity_row_is_code(int parity_phys_bank, RowIndex phys_row) const {
    (void)parity_phys_bank;
    (void)phys_row;
    return true;
  }
};

class AllFreshView final : public FreshnessView {
 public:
  RowStatus row_status(int, RowIndex) const override { return RowStatus::AllFresh; }
  SegmentRef fresh_holder(int, RowIndex) const override { return {}; }
};

// --- coverage --------------------------------------------------------------

/// Maps a logical data row to its row offset inside a parity segment, or
/// nothing if the row is not currently encoded. Static layouts use the
/// identity map over the coded range; the dynamic coder remaps regions.
class RowCoverage {
 public:
  virtual ~RowCoverage() = default;
  virtual std::optional<RowIndex> segment_row(RowIndex data_row) const = 0;
  /// Like segment_row but also resolves rows of draining (evicted but not yet
  /// cleaned) regions, so buffered values stay reachable until written back.
  virtual std::optional<RowIndex> segment_row_for_writeback(RowIndex data_row) const {
    return segment_row(data_row);
  }
};

class IdentityCoverage final : public RowCoverage {
 public:
  explicit IdentityCoverage(RowIndex limit) : limit_(limit) {}
  std::optional<RowIndex> segment_row(RowIndex data_row) const override {
    if (data_row < limit_) return data_row;
    return std::nullopt;
  }

 private:
  RowIndex limit_;
};

// --- plans -----------------------------------------------------------------

/// A recipe for serving one read: XOR the listed physical rows together.
/// Replica and data rows contribute as identity terms.
struct ReadPlan {
  Address target;
  std::vector<std::pair<int, RowIndex>> reads;  // (physical bank, physical row)
  int locality() const { return static_cast<int>(reads.size()); }
};

// --- operations ------------------------------------------------------------

CodeLayout build_uncoded(int num_banks, RowIndex L, RowIndex W);
CodeLayout build_scheme_i(RowIndex L, RowIndex W, double alpha);
CodeLayout build_scheme_ii(RowIndex L, RowIndex W, double alpha);
CodeLayout build_scheme_iii(RowIndex L, RowIndex W, double alpha, int num_banks = 8);
CodeLayout build_replication(int r, int w, RowIndex L, RowIndex W, int num_logical_banks);

/// Rebuilds a layout's parity banks with a different per-segment capacity.
/// Used when the dynamic coder needs slot space beyond floor(alpha*L).
CodeLayout with_segment_capacity(const CodeLayout& layout, RowIndex capacity_rows);

/// Word-wise XOR of equal-width rows; the empty list yields the zero row.
RowValue xor_rows(const std::vector<RowValue>& rows, RowIndex width);
void xor_into(RowValue& acc, std::span<const Word> row);

/// floor(alpha * L) with an epsilon nudge so binary fractions like 0.15*1000
/// do not land one row short.
RowIndex coded_row_count(double alpha, RowIndex L);

/// Enumerates the ways to serve one read under the given freshness state:
/// the direct plan first, then every single-segment degraded plan, ordered by
/// locality then parity bank id. PARITY_FRESH targets yield only the holder
/// read; stale companions or clobbered parity rows exclude a plan.
std::vector<ReadPlan> degraded_read_plans(const CodeLayout& layout, const Address& target,
                                          const FreshnessView& fresh,
                                          const RowCoverage& coverage);

inline std::vector<ReadPlan> degraded_read_plans(const CodeLayout& layout,
                                                 const Address& target) {
  AllFreshView fresh;
  IdentityCoverage cov(layout.segment_capacity_rows);
  return degraded_read_plans(layout, target, fresh, cov);
}

/// data rows / (data rows + parity rows), from the actual integer row counts.
double rate(const CodeLayout& layout);

/// Human-readable dump: header, groups, then one line per segment in the form
/// `P<k> rows[off..off+n) = XOR(banks...)`.
std::string describe(const CodeLayout& layout);

std::string bank_name(const CodeLayout& layout, int phys_bank);

}  // namespace codedmem
