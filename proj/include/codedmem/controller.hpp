#pragma once

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "codedmem/bankarray.hpp"
#include "codedmem/codes.hpp"
#include "codedmem/types.hpp"

namespace codedmem {

class DynamicCoder;

/// One timestamped word request from a core. Writes carry the full row
/// payload; the word index only matters for transaction bookkeeping.
struct AccessRequest {
  RequestId id = 0;
  int core = 0;
  enum class Kind : std::uint8_t { Read, Write, Refresh } kind = Kind::Read;
  Address addr;
  TimeNs issue_time = 0;
  RowValue payload;  // writes only
  std::uint64_t txn_id = 0;
  bool is_critical = false;  // first word of its transaction
  bool is_last = false;      // last word of its transaction
};

/// Per data bank: a FIFO read queue and write queue of bounded depth, plus a
/// shared queue for special requests (refresh).
class BankQueues {
 public:
  BankQueues(int num_banks, int depth);

  int depth() const { return depth_; }
  bool can_accept(const AccessRequest& req) const;
  void push(AccessRequest req);

  const std::deque<AccessRequest>& reads(int bank) const { return reads_[bank]; }
  const std::deque<AccessRequest>& writes(int bank) const { return writes_[bank]; }
  std::deque<AccessRequest>& special() { return special_; }
  const std::deque<AccessRequest>& special() const { return special_; }

  void pop_reads(int bank, std::size_t count);
  void pop_writes(int bank, std::size_t count);

  bool any_read_pending() const;
  bool any_write_pending() const;
  std::size_t max_write_occupancy() const;
  std::size_t total_pending() const;

 private:
  int depth_;
  std::vector<std::deque<AccessRequest>> reads_;
  std::vector<std::deque<AccessRequest>> writes_;
  std::deque<AccessRequest> special_;
};

/// Tracks which physical copies of every data row are current, and which
/// physical parity rows do not presently hold their code value.
class CodeStatusTable final : public FreshnessView {
 public:
  explicit CodeStatusTable(const CodeLayout& layout);

  RowStatus row_status(int bank, RowIndex row) const override;
  SegmentRef fresh_holder(int bank, RowIndex row) const override;
  bool parity_row_is_code(int parity_phys_bank, RowIndex phys_row) const override;

  /// PARITY_FRESH requires a holder segment; anything else forbids one.
  void set_status(int bank, RowIndex row, RowStatus st,
                  std::optional<SegmentRef> holder = std::nullopt);

  void mark_parity_row_stale(int parity_phys_bank, RowIndex phys_row);
  void clear_parity_row_stale(int parity_phys_bank, RowIndex phys_row);
  /// Wipes stale marks for a physical row range of every parity bank segment;
  /// used when a drained slot is released.
  void clear_stale_in_slot(const CodeLayout& layout, RowIndex slot_lo, RowIndex slot_hi);

  std::size_t stale_parity_rows() const { return stale_.size(); }
  std::size_t non_fresh_rows() const { return non_fresh_; }
  bool clean() const { return non_fresh_ == 0 && stale_.empty(); }

 private:
  struct Entry {
    RowStatus st = RowStatus::AllFresh;
    SegmentRef holder;
  };
  const CodeLayout* layout_;
  std::vector<std::vector<Entry>> entries_;
  std::set<std::pair<int, RowIndex>> stale_;  // (phys bank, phys row)
  std::size_t non_fresh_ = 0;
};

/// Background restoration work for one data row after writes left stale
/// copies behind.
struct RecodeRequest {
  int bank = 0;
  RowIndex row = 0;
  Cycle created_cycle = 0;
  int origin_core = -1;
  std::set<std::pair<SegmentRef, RowIndex>> stale_rows;  // (segment, physical row)
};

struct ServedRead {
  AccessRequest req;
  RowValue value;  // the full decoded row
};

struct ServedWrite {
  AccessRequest req;
};

struct CycleResult {
  char mode = 'C';
  std::vector<ServedRead> reads;
  std::vector<ServedWrite> writes;  // in commit order
  int recode_ops = 0;
  int encode_ops = 0;
  int refresh_ops = 0;
};

struct ControllerConfig {
  int queue_depth = 10;
  double write_threshold = 0.8;  // of depth; reaching it forces a write cycle
};

/// Three-stage memory controller: core arbiter, bank queues, and the access
/// scheduler with its read/write pattern builders, recoding unit and optional
/// dynamic coder.
class Controller {
 public:
  Controller(const CodeLayout& layout, BankState& state, ControllerConfig cfg,
             const RowCoverage& coverage, DynamicCoder* dyn = nullptr);

  /// Core arbiter entry: accepts at most this one request into its bank
  /// queue. Returns false (stall) when the queue is full.
  bool arbiter_push(const AccessRequest& req);

  /// Advances one memory cycle: picks the cycle mode, builds and applies the
  /// pattern, folds in recode/encode/refresh work on idle banks.
  CycleResult schedule_cycle(Cycle cycle);

  AccessPattern build_read_pattern(Cycle cycle) const;
  AccessPattern build_write_pattern(Cycle cycle);
  void recoder_fill(AccessPattern& pattern, Cycle cycle);

  char pick_mode() const;

  const CodeLayout& layout() const { return *layout_; }
  BankQueues& queues() { return queues_; }
  const BankQueues& queues() const { return queues_; }
  CodeStatusTable& status() { return status_; }
  const CodeStatusTable& status() const { return status_; }
  const RowCoverage& coverage() const { return *coverage_; }

  std::size_t recode_backlog() const { return recode_pending_.size() + recode_jobs_.size(); }
  const std::deque<RecodeRequest>& recode_queue() const { return recode_pending_; }
  bool quiescent() const;

  void set_event_sink(std::function<void(const std::string&)> sink) {
    event_sink_ = std::move(sink);
  }

 private:
  struct RecodeJob {
    RecodeRequest req;
    bool data_writeback = false;
    std::vector<std::pair<SegmentRef, RowIndex>> recompute;  // parity rows to rebuild
    std::vector<int> value_banks;  // data banks whose logical value we need
    std::map<int, std::pair<int, RowIndex>> read_from;  // data bank -> physical source
    std::map<int, RowValue> values;  // data bank -> logical row value
    std::set<std::pair<int, RowIndex>> awaiting;  // outstanding physical reads
    bool reads_issued = false;
  };

  void enqueue_recode(int bank, RowIndex row, Cycle cycle, int core,
                      std::set<std::pair<SegmentRef, RowIndex>> stale_rows);
  void abort_jobs_at_row(RowIndex row);
  void note_demand_write(const AccessRequest& req, Cycle cycle, bool redirected,
                         SegmentRef holder, RowIndex holder_row);
  std::optional<std::pair<SegmentRef, RowIndex>> find_buffer_slot(
      RowIndex row, const AccessPattern& pattern) const;
  void refresh_fill(AccessPattern& pattern, CycleResult& result);
  void emit_event(const AccessPattern& pattern, const CycleResult& result) const;

  const CodeLayout* layout_;
  BankState* state_;
  ControllerConfig cfg_;
  const RowCoverage* coverage_;
  DynamicCoder* dyn_;
  BankQueues queues_;
  CodeStatusTable status_;

  std::deque<RecodeRequest> recode_pending_;  // ordered by created_cycle
  std::vector<RecodeJob> recode_jobs_;
  std::function<void(const std::string&)> event_sink_;
};

}  // namespace codedmem
