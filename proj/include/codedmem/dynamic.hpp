#pragma once

#include <map>
#include <set>
#include <vector>

#include "codedmem/bankarray.hpp"
#include "codedmem/codes.hpp"
#include "codedmem/types.hpp"

namespace codedmem {

class CodeStatusTable;

struct RegionConfig {
  double r = 0.05;       // region size as a fraction of a bank
  Cycle T = 10000;       // selection period, memory cycles
  double alpha = 0.15;   // parity overhead fraction
};

/// Per-region counters exposed for tests and reporting.
struct RegionView {
  std::uint64_t period_count = 0;
  std::uint64_t lifetime_count = 0;
  bool encoded = false;
  RowIndex encode_progress = 0;  // rows completed if mid-encode
};

/// Tracks region access frequencies, re-selects the hottest regions every T
/// cycles, encodes them into parity slot space through idle bank slots, and
/// evicts the least frequently used region when capacity is reached.
class DynamicCoder {
 public:
  DynamicCoder(const CodeLayout& layout, RegionConfig cfg);

  const RowMap& coverage() const { return rowmap_; }
  int capacity() const { return capacity_; }
  int region_count() const { return region_count_; }
  RowIndex region_rows() const { return region_rows_; }
  int region_of(RowIndex row) const { return static_cast<int>(row / region_rows_); }

  void record_access(const Address& addr);

  /// Top-capacity regions by current-period count; ties favor already-encoded
  /// regions, then lower index.
  std::vector<int> select_regions() const;

  // Hooks driven by the controller, in cycle order.
  void on_cycle_start(Cycle cycle);
  void on_write(int bank, RowIndex row);
  void fill_idle(AccessPattern& pattern);
  void absorb_read(int phys_bank, RowIndex phys_row, const RowValue& value);
  void finish_cycle(Cycle cycle, CodeStatusTable& status);
  void maybe_release_drains(CodeStatusTable& status);
  void request_drain_check() { drain_check_ = true; }

  bool encoding() const { return enc_.active; }
  bool idle() const;
  std::uint64_t switch_count() const { return switch_count_; }
  const std::set<int>& active_regions() const { return active_; }
  RegionView region_stats(int region) const;

 private:
  RowIndex region_base(int region) const { return region_rows_ * region; }
  RowIndex region_size(int region) const;
  void begin_encode(int region, Cycle cycle);

  const CodeLayout* layout_;
  RegionConfig cfg_;
  int region_count_ = 0;
  RowIndex region_rows_ = 0;
  int capacity_ = 0;
  RowMap rowmap_;

  std::vector<std::uint64_t> period_counts_;
  std::vector<std::uint64_t> lifetime_counts_;
  std::set<int> active_;

  struct Encode {
    bool active = false;
    int region = -1;
    int slot = -1;
    RowIndex next_off = 0;       // next unprocessed row offset
    RowIndex rows = 0;           // rows in this region (clipped at L)
    std::set<RowIndex> dirty;    // offsets written while mid-encode
    bool reading = true;
    RowIndex cur_off = 0;
    std::map<int, RowValue> sources;        // data bank -> row value
    std::set<int> pending_reads;            // data banks still to read
    std::set<std::pair<int, int>> pending_writes;  // (parity bank id, seg idx)
    bool row_loaded = false;
  };
  Encode enc_;
  std::vector<int> source_banks_;  // banks appearing in any parity segment

  bool drain_check_ = false;
  std::uint64_t switch_count_ = 0;
};

}  // namespace codedmem
