#include "codedmem/codes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace codedmem {

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::Uncoded: return "uncoded";
    case Scheme::SchemeI: return "scheme1";
    case Scheme::SchemeII: return "scheme2";
    case Scheme::SchemeIII: return "scheme3";
    case Scheme::ReadReplication: return "read_replication";
    case Scheme::RWReplication: return "rw_replication";
  }
  return "?";
}

std::optional<Scheme> scheme_from_name(const std::string& name) {
  if (name == "uncoded") return Scheme::Uncoded;
  if (name == "scheme1" || name == "schemeI" || name == "i") return Scheme::SchemeI;
  if (name == "scheme2" || name == "schemeII" || name == "ii") return Scheme::SchemeII;
  if (name == "scheme3" || name == "schemeIII" || name == "iii") return Scheme::SchemeIII;
  if (name == "read_replication") return Scheme::ReadReplication;
  if (name == "rw_replication") return Scheme::RWReplication;
  return std::nullopt;
}

std::uint64_t CodeLayout::parity_rows() const {
  std::uint64_t total = 0;
  for (const auto& pb : parity_banks) total += pb.depth_rows;
  return total;
}

void CodeLayout::rebuild_index() {
  covering_.assign(num_data_banks, {});
  for (const auto& pb : parity_banks) {
    for (int s = 0; s < static_cast<int>(pb.segments.size()); ++s) {
      for (int src : pb.segments[s].source_banks) {
        covering_[src].push_back(SegmentRef{pb.id, s});
      }
    }
  }
}

int CodeLayout::segment_ordinal(SegmentRef ref) const {
  int n = 0;
  for (int b = 0; b < ref.parity_bank; ++b) {
    n += static_cast<int>(parity_banks[b].segments.size());
  }
  return n + ref.seg_index;
}

RowIndex coded_row_count(double alpha, RowIndex L) {
  return static_cast<RowIndex>(std::floor(alpha * static_cast<double>(L) + 1e-9));
}

namespace {

void check_dims(RowIndex L, RowIndex W) {
  if (L == 0 || W == 0) throw ConfigError("layout rows and words_per_row must be >= 1");
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0) {
    throw ConfigError("layout.alpha must be in (0,1]: got " + std::to_string(alpha));
  }
}

ParityBankSpec single_segment_bank(int id, std::vector<int> sources, RowIndex cap) {
  ParityBankSpec pb;
  pb.id = id;
  pb.depth_rows = cap;
  pb.segments.push_back(ParitySegment{std::move(sources), cap, 0});
  return pb;
}

}  // namespace

CodeLayout build_uncoded(int num_banks, RowIndex L, RowIndex W) {
  if (num_banks < 1) throw ConfigError("uncoded layout needs at least one bank");
  check_dims(L, W);
  CodeLayout layout;
  layout.scheme = Scheme::Uncoded;
  layout.num_data_banks = num_banks;
  layout.rows_per_bank = L;
  layout.words_per_row = W;
  layout.alpha = 0.0;
  layout.segment_capacity_rows = 0;
  layout.groups = {std::vector<int>(num_banks)};
  for (int b = 0; b < num_banks; ++b) layout.groups[0][b] = b;
  layout.rebuild_index();
  return layout;
}

CodeLayout build_scheme_i(RowIndex L, RowIndex W, double alpha) {
  check_dims(L, W);
  check_alpha(alpha);
  CodeLayout layout;
  layout.scheme = Scheme::SchemeI;
  layout.num_data_banks = 8;
  layout.rows_per_bank = L;
  layout.words_per_row = W;
  layout.alpha = alpha;
  layout.groups = {{0, 1, 2, 3}, {4, 5, 6, 7}};
  const RowIndex cap = coded_row_count(alpha, L);
  layout.segment_capacity_rows = cap;
  int id = 0;
  for (const auto& group : layout.groups) {
    for (std::size_t i = 0; i < group.size(); ++i) {
      for (std::size_t j = i + 1; j < group.size(); ++j) {
        layout.parity_banks.push_back(single_segment_bank(id++, {group[i], group[j]}, cap));
      }
    }
  }
  layout.rebuild_index();
  return layout;
}

CodeLayout build_scheme_ii(RowIndex L, RowIndex W, double alpha) {
  check_dims(L, W);
  check_alpha(alpha);
  CodeLayout layout;
  layout.scheme = Scheme::SchemeII;
  layout.num_data_banks = 8;
  layout.rows_per_bank = L;
  layout.words_per_row = W;
  layout.alpha = alpha;
  layout.groups = {{0, 1, 2, 3}, {4, 5, 6, 7}};
  const RowIndex cap = coded_row_count(alpha, L);
  layout.segment_capacity_rows = cap;
  int id = 0;
  for (const auto& g : layout.groups) {
    // Five double-depth banks per group. The pair parities the worked examples
    // consume (ab, bc, cd, ad, bd) land in five distinct banks, and each data
    // bank's replica avoids the banks holding its own pair parities.
    const std::vector<std::vector<std::vector<int>>> halves = {
        {{g[0], g[1]}, {g[3]}},          // a+b | copy of d
        {{g[1], g[2]}, {g[0]}},          // b+c | copy of a
        {{g[2], g[3]}, {g[1]}},          // c+d | copy of b
        {{g[0], g[3]}, {g[2]}},          // a+d | copy of c
        {{g[1], g[3]}, {g[0], g[2]}},    // b+d | a+c
    };
    for (const auto& bank_halves : halves) {
      ParityBankSpec pb;
      pb.id = id++;
      pb.depth_rows = 2 * cap;
      RowIndex off = 0;
      for (const auto& sources : bank_halves) {
        pb.segments.push_back(ParitySegment{sources, cap, off});
        off += cap;
      }
      layout.parity_banks.push_back(std::move(pb));
    }
  }
  layout.rebuild_index();
  return layout;
}

CodeLayout build_scheme_iii(RowIndex L, RowIndex W, double alpha, int num_banks) {
  check_dims(L, W);
  check_alpha(alpha);
  if (num_banks != 8 && num_banks != 9) {
    throw ConfigError("scheme3 supports 8 or 9 data banks");
  }
  CodeLayout layout;
  layout.scheme = Scheme::SchemeIII;
  layout.num_data_banks = num_banks;
  layout.rows_per_bank = L;
  layout.words_per_row = W;
  layout.alpha = alpha;
  layout.groups = {std::vector<int>(num_banks)};
  for (int b = 0; b < num_banks; ++b) layout.groups[0][b] = b;
  const RowIndex cap = coded_row_count(alpha, L);
  layout.segment_capacity_rows = cap;
  // 3x3 grid of banks a..h,z: rows, columns, then diagonals.
  const std::vector<std::vector<int>> triples = {
      {0, 1, 2}, {3, 4, 5}, {6, 7, 8},
      {0, 3, 6}, {1, 4, 7}, {2, 5, 8},
      {0, 4, 8}, {1, 5, 6}, {2, 3, 7},
  };
  int id = 0;
  for (auto triple : triples) {
    if (num_banks == 8) {
      // Bank z is omitted from the encoding; its contribution is all-zero.
      std::erase(triple, 8);
    }
    layout.parity_banks.push_back(single_segment_bank(id++, std::move(triple), cap));
  }
  layout.rebuild_index();
  return layout;
}

CodeLayout build_replication(int r, int w, RowIndex L, RowIndex W, int num_logical_banks) {
  if (r < 1) throw ConfigError("replication factor r must be >= 1");
  if (w < 0) throw ConfigError("replication factor w must be >= 0");
  if (num_logical_banks < 1) throw ConfigError("replication needs at least one logical bank");
  check_dims(L, W);
  CodeLayout layout;
  layout.scheme = (w == 0) ? Scheme::ReadReplication : Scheme::RWReplication;
  layout.num_data_banks = num_logical_banks;
  layout.rows_per_bank = L;
  layout.words_per_row = W;
  layout.alpha = 1.0;
  layout.replication_r = r;
  layout.replication_w = w;
  layout.segment_capacity_rows = L;
  layout.groups = {std::vector<int>(num_logical_banks)};
  for (int b = 0; b < num_logical_banks; ++b) layout.groups[0][b] = b;
  // r*(w+1) copies of every logical bank: the original plus copies-1 replicas,
  // organized as r groups of (w+1) copies each.
  const int copies = r * (w + 1);
  int id = 0;
  for (int b = 0; b < num_logical_banks; ++b) {
    for (int c = 1; c < copies; ++c) {
      layout.parity_banks.push_back(single_segment_bank(id++, {b}, L));
    }
  }
  layout.rebuild_index();
  return layout;
}

CodeLayout with_segment_capacity(const CodeLayout& layout, RowIndex capacity_rows) {
  CodeLayout out = layout;
  out.segment_capacity_rows = capacity_rows;
  for (auto& pb : out.parity_banks) {
    RowIndex off = 0;
    for (auto& seg : pb.segments) {
      seg.coded_rows = capacity_rows;
      seg.row_offset = off;
      off += capacity_rows;
    }
    pb.depth_rows = off;
  }
  out.rebuild_index();
  return out;
}

RowValue xor_rows(const std::vector<RowValue>& rows, RowIndex width) {
  RowValue acc(width, 0);
  for (const auto& row : rows) {
    if (row.size() != width) {
      throw ShapeError("xor_rows: row width " + std::to_string(row.size()) +
                       " != " + std::to_string(width));
    }
    xor_into(acc, row);
  }
  return acc;
}

void xor_into(RowValue& acc, std::span<const Word> row) {
  if (row.size() != acc.size()) throw ShapeError("xor_into: width mismatch");
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] ^= row[i];
}

std::vector<ReadPlan> degraded_read_plans(const CodeLayout& layout, const Address& target,
                                          const FreshnessView& fresh,
                                          const RowCoverage& coverage) {
  if (target.bank < 0 || target.bank >= layout.num_data_banks ||
      target.row >= layout.rows_per_bank) {
    throw ConfigError("degraded_read_plans: address outside layout");
  }
  std::vector<ReadPlan> plans;
  const RowStatus st = fresh.row_status(target.bank, target.row);
  if (st == RowStatus::ParityFresh) {
    const SegmentRef holder = fresh.fresh_holder(target.bank, target.row);
    const auto srow = coverage.segment_row_for_writeback(target.row);
    if (!srow) {
      throw SimulationFault("parity-fresh row has no reachable holder mapping");
    }
    const auto& seg = layout.segment(holder);
    ReadPlan plan;
    plan.target = target;
    plan.reads = {{layout.parity_phys(holder.parity_bank), seg.row_offset + *srow}};
    plans.push_back(std::move(plan));
    return plans;
  }

  ReadPlan direct;
  direct.target = target;
  direct.reads = {{target.bank, target.row}};
  plans.push_back(std::move(direct));
  if (st != RowStatus::AllFresh) return plans;  // stale parities: direct only

  const auto srow = coverage.segment_row(target.row);
  if (!srow) return plans;

  std::vector<std::pair<std::pair<int, int>, ReadPlan>> degraded;  // key: (locality, bank)
  for (const SegmentRef ref : layout.covering(target.bank)) {
    const auto& seg = layout.segment(ref);
    if (*srow >= seg.coded_rows) continue;
    const RowIndex phys_row = seg.row_offset + *srow;
    const int phys_bank = layout.parity_phys(ref.parity_bank);
    if (!fresh.parity_row_is_code(phys_bank, phys_row)) continue;
    bool usable = true;
    for (int src : seg.source_banks) {
      if (fresh.row_status(src, target.row) != RowStatus::AllFresh) {
        usable = false;
        break;
      }
    }
    if (!usable) continue;
    ReadPlan plan;
    plan.target = target;
    plan.reads.push_back({phys_bank, phys_row});
    for (int src : seg.source_banks) {
      if (src != target.bank) plan.reads.push_back({src, target.row});
    }
    degraded.push_back({{plan.locality(), phys_bank}, std::move(plan)});
  }
  std::sort(degraded.begin(), degraded.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [key, plan] : degraded) plans.push_back(std::move(plan));
  return plans;
}

double rate(const CodeLayout& layout) {
  const double data = static_cast<double>(layout.data_rows());
  const double parity = static_cast<double>(layout.parity_rows());
  return data / (data + parity);
}

std::string bank_name(const CodeLayout& layout, int phys_bank) {
  if (phys_bank < layout.num_data_banks) {
    if (phys_bank == 8) return "z";  // the ninth data bank in the 3x3 grid
    if (phys_bank < 26) return std::string(1, static_cast<char>('a' + phys_bank));
    return "b" + std::to_string(phys_bank);
  }
  return "P" + std::to_string(phys_bank - layout.num_data_banks);
}

std::string describe(const CodeLayout& layout) {
  std::ostringstream os;
  os << "scheme=" << scheme_name(layout.scheme) << " alpha=" << layout.alpha
     << " data_banks=" << layout.num_data_banks << " rows=" << layout.rows_per_bank
     << " words=" << layout.words_per_row << " rate=" << rate(layout) << "\n";
  for (std::size_t g = 0; g < layout.groups.size(); ++g) {
    os << "group " << g << ":";
    for (int b : layout.groups[g]) os << " " << bank_name(layout, b);
    os << "\n";
  }
  for (const auto& pb : layout.parity_banks) {
    for (const auto& seg : pb.segments) {
      os << "P" << pb.id << " rows[" << seg.row_offset << ".."
         << seg.row_offset + seg.coded_rows << ") = XOR(";
      for (std::size_t i = 0; i < seg.source_banks.size(); ++i) {
        if (i) os << ",";
        os << bank_name(layout, seg.source_banks[i]);
      }
      os << ")\n";
    }
  }
  return os.str();
}

}  // namespace codedmem
