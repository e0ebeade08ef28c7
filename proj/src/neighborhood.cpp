#include "m3gen/neighborhood.hpp"

namespace m3gen {

const char* neighborhood_name(NeighborhoodKind kind) {
  return kind == NeighborhoodKind::Local4 ? "local4" : "global";
}

NeighborhoodKind parse_neighborhood(const std::string& name) {
  if (name == "local4") return NeighborhoodKind::Local4;
  if (name == "global") return NeighborhoodKind::Global;
  throw SpecError("unknown neighborhood '" + name + "' (expected local4 or global)");
}

std::size_t key_length(NeighborhoodKind kind) {
  return kind == NeighborhoodKind::Local4 ? 4 : 6;
}

std::array<Slot, kMaxSlots> neighborhood_slots(NeighborhoodKind kind, int row, int col) {
  if (!Level::on_board(row, col)) {
    throw SpecError("neighborhood center (" + std::to_string(row) + "," + std::to_string(col) +
                    ") is off the board");
  }
  auto slot_at = [](int r, int c) {
    return Slot{Level::on_board(r, c) ? SlotState::OnBoard : SlotState::OffBoard, {r, c}};
  };
  std::array<Slot, kMaxSlots> slots{};
  slots[0] = slot_at(row - 1, col);
  slots[1] = slot_at(row + 1, col);
  slots[2] = slot_at(row, col - 1);
  slots[3] = slot_at(row, col + 1);
  if (kind == NeighborhoodKind::Global) {
    const Position mirrors[2] = {{row, kBoardSize - 1 - col}, {kBoardSize - 1 - row, col}};
    for (std::size_t m = 0; m < 2; ++m) {
      Slot& slot = slots[4 + m];
      slot = slot_at(mirrors[m].row, mirrors[m].col);
      bool duplicate = mirrors[m] == Position{row, col};
      for (std::size_t k = 0; k < 4 + m && !duplicate; ++k) {
        duplicate = slots[k].state != SlotState::Removed && slots[k].pos == mirrors[m];
      }
      if (duplicate) slot.state = SlotState::Removed;
    }
  }
  return slots;
}

std::vector<Neighbor> neighborhood_positions(NeighborhoodKind kind, int row, int col) {
  const auto slots = neighborhood_slots(kind, row, col);
  std::vector<Neighbor> out;
  for (std::size_t k = 0; k < key_length(kind); ++k) {
    if (slots[k].state == SlotState::Removed) continue;
    out.push_back({slots[k].pos, slots[k].state == SlotState::OffBoard});
  }
  return out;
}

}  // namespace m3gen
