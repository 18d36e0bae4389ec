#include "codedmem/bankarray.hpp"

#include <algorithm>
#include <cassert>
#include <cstdio>
#include <sstream>

namespace codedmem {

BankState::BankState(const CodeLayout& layout) : layout_(&layout) {
  banks_.resize(layout.total_banks());
  for (int b = 0; b < layout.num_data_banks; ++b) {
    banks_[b].assign(static_cast<std::size_t>(layout.rows_per_bank) * layout.words_per_row, 0);
  }
  for (const auto& pb : layout.parity_banks) {
    banks_[layout.parity_phys(pb.id)].assign(
        static_cast<std::size_t>(pb.depth_rows) * layout.words_per_row, 0);
  }
  busy_.assign(layout.total_banks(), 0);
}

RowIndex BankState::depth(int phys_bank) const {
  return static_cast<RowIndex>(banks_[phys_bank].size() / layout_->words_per_row);
}

std::span<const Word> BankState::row(int phys_bank, RowIndex r) const {
  const RowIndex W = layout_->words_per_row;
  if (phys_bank < 0 || phys_bank >= layout_->total_banks() || r >= depth(phys_bank)) {
    throw SimulationFault("bank row access out of range: bank " + std::to_string(phys_bank) +
                          " row " + std::to_string(r));
  }
  return {banks_[phys_bank].data() + static_cast<std::size_t>(r) * W, W};
}

void BankState::poke_row(int phys_bank, RowIndex r, std::span<const Word> value) {
  const RowIndex W = layout_->words_per_row;
  if (value.size() != W) throw ShapeError("poke_row: width mismatch");
  if (phys_bank < 0 || phys_bank >= layout_->total_banks() || r >= depth(phys_bank)) {
    throw SimulationFault("bank row write out of range");
  }
  std::copy(value.begin(), value.end(),
            banks_[phys_bank].begin() + static_cast<std::size_t>(r) * W);
}

std::vector<ReadResult> BankState::apply_pattern(const AccessPattern& pattern) {
  std::fill(busy_.begin(), busy_.end(), 0);
  for (const auto& op : pattern.ops) {
    if (op.phys_bank < 0 || op.phys_bank >= layout_->total_banks()) {
      throw SimulationFault("pattern addresses unknown bank " + std::to_string(op.phys_bank));
    }
    if (busy_[op.phys_bank]) {
      throw SimulationFault("single-port violation: bank " + std::to_string(op.phys_bank) +
                            " booked twice in cycle " + std::to_string(pattern.cycle));
    }
    busy_[op.phys_bank] = 1;
  }

  std::vector<ReadResult> results;
  for (const auto& op : pattern.ops) {
    if (op.kind != BankOp::Kind::Read) continue;
    auto r = row(op.phys_bank, op.phys_row);
    results.push_back({op.phys_bank, op.phys_row, RowValue(r.begin(), r.end())});
  }
  for (const auto& op : pattern.ops) {
    if (op.kind != BankOp::Kind::Write) continue;
    poke_row(op.phys_bank, op.phys_row, op.value);
  }
  std::fill(busy_.begin(), busy_.end(), 0);
  return results;
}

void BankState::initialize_from_oracle(std::span<const Word> flat, const RowCoverage& coverage) {
  const RowIndex W = layout_->words_per_row;
  const RowIndex L = layout_->rows_per_bank;
  if (flat.size() != layout_->data_rows() * W) {
    throw ShapeError("oracle image size " + std::to_string(flat.size()) + " != " +
                     std::to_string(layout_->data_rows() * W));
  }
  for (int b = 0; b < layout_->num_data_banks; ++b) {
    const std::size_t base = static_cast<std::size_t>(b) * L * W;
    std::copy(flat.begin() + base, flat.begin() + base + static_cast<std::size_t>(L) * W,
              banks_[b].begin());
  }
  for (const auto& pb : layout_->parity_banks) {
    const int phys = layout_->parity_phys(pb.id);
    for (const auto& seg : pb.segments) {
      for (RowIndex r = 0; r < L; ++r) {
        const auto srow = coverage.segment_row(r);
        if (!srow || *srow >= seg.coded_rows) continue;
        RowValue acc(W, 0);
        for (int src : seg.source_banks) xor_into(acc, row(src, r));
        poke_row(phys, seg.row_offset + *srow, acc);
      }
    }
  }
}

std::string BankState::snapshot_dump() const {
  std::ostringstream os;
  const RowIndex W = layout_->words_per_row;
  for (int b = 0; b < layout_->total_banks(); ++b) {
    for (RowIndex r = 0; r < depth(b); ++r) {
      os << bank_name(*layout_, b) << " " << r << " ";
      auto data = row(b, r);
      char buf[17];
      for (RowIndex w = 0; w < W; ++w) {
        std::snprintf(buf, sizeof buf, "%016llx",
                      static_cast<unsigned long long>(data[w]));
        os << buf;
        if (w + 1 < W) os << " ";
      }
      os << "\n";
    }
  }
  return os.str();
}

// --- RowMap -----------------------------------------------------------------

RowMap::RowMap(RowIndex region_rows, int active_slots) : region_rows_(region_rows) {
  if (region_rows == 0 || active_slots < 1) {
    throw ConfigError("row map needs region_rows >= 1 and at least one active slot");
  }
  slots_.resize(static_cast<std::size_t>(active_slots) + 1);  // plus scratch
}

std::optional<RowIndex> RowMap::lookup(RowIndex data_row, bool include_draining) const {
  for (std::size_t s = 0; s < slots_.size(); ++s) {
    const Slot& slot = slots_[s];
    const bool visible = slot.state == SlotState::Active ||
                         (include_draining && slot.state == SlotState::Draining);
    if (!visible) continue;
    if (data_row >= slot.region_base && data_row < slot.region_base + slot.rows) {
      return static_cast<RowIndex>(s) * region_rows_ + (data_row - slot.region_base);
    }
  }
  return std::nullopt;
}

std::optional<RowIndex> RowMap::segment_row(RowIndex data_row) const {
  return lookup(data_row, false);
}

std::optional<RowIndex> RowMap::segment_row_for_writeback(RowIndex data_row) const {
  return lookup(data_row, true);
}

bool RowMap::has_free_slot() const {
  return std::any_of(slots_.begin(), slots_.end(),
                     [](const Slot& s) { return s.state == SlotState::Free; });
}

bool RowMap::region_mapped(RowIndex region_base) const {
  return std::any_of(slots_.begin(), slots_.end(), [&](const Slot& s) {
    return s.state != SlotState::Free && s.region_base == region_base;
  });
}

std::optional<int> RowMap::slot_of_region(RowIndex region_base) const {
  for (std::size_t s = 0; s < slots_.size(); ++s) {
    if (slots_[s].state != SlotState::Free && slots_[s].region_base == region_base) {
      return static_cast<int>(s);
    }
  }
  return std::nullopt;
}

int RowMap::begin_encode(RowIndex region_base, RowIndex rows) {
  if (region_mapped(region_base)) {
    throw SimulationFault("region already mapped while starting encode");
  }
  for (std::size_t s = 0; s < slots_.size(); ++s) {
    if (slots_[s].state == SlotState::Free) {
      slots_[s] = {SlotState::Scratch, region_base, rows};
      return static_cast<int>(s);
    }
  }
  throw SimulationFault("encode started with no free slot");
}

void RowMap::activate(int slot) {
  if (slots_[slot].state != SlotState::Scratch) throw SimulationFault("activate: not encoding");
  slots_[slot].state = SlotState::Active;
}

void RowMap::abort_encode(int slot) {
  if (slots_[slot].state != SlotState::Scratch) throw SimulationFault("abort: not encoding");
  slots_[slot] = {};
}

void RowMap::drain(int slot) {
  if (slots_[slot].state != SlotState::Active) throw SimulationFault("drain: slot not active");
  slots_[slot].state = SlotState::Draining;
}

void RowMap::release(int slot) {
  if (slots_[slot].state != SlotState::Draining) throw SimulationFault("release: not draining");
  slots_[slot] = {};
}

std::pair<RowIndex, RowIndex> RowMap::slot_row_range(int slot) const {
  const RowIndex base = static_cast<RowIndex>(slot) * region_rows_;
  return {base, base + slots_[slot].rows};
}

}  // namespace codedmem
