#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "m3gen/level.hpp"

namespace m3gen {

enum class NeighborhoodKind : std::uint8_t {
  /// Up, down, left, right.
  Local4,
  /// Local4 followed by the vertical mirror (r, 8-c) and the horizontal
  /// mirror (8-r, c).
  Global,
};

const char* neighborhood_name(NeighborhoodKind kind);
/// Accepts "local4" and "global".
NeighborhoodKind parse_neighborhood(const std::string& name);

inline constexpr std::size_t kMaxSlots = 6;

/// Fixed key width: 4 for Local4, 6 for Global.
std::size_t key_length(NeighborhoodKind kind);

struct Neighbor {
  Position pos;
  bool off_board = false;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Conditioning positions of (row, col) in slot order. Off-board positions
/// are kept and flagged. Mirror positions that coincide with the center are
/// dropped, so Global at (4,4) is exactly Local4. Throws SpecError when the
/// center is not on the board.
std::vector<Neighbor> neighborhood_positions(NeighborhoodKind kind, int row, int col);

enum class SlotState : std::uint8_t { OnBoard, OffBoard, Removed };

struct Slot {
  SlotState state = SlotState::Removed;
  Position pos;
};

/// Fixed-width view of the same neighborhood used to build CPD keys. A
/// dropped position keeps its slot, marked Removed. Only the first
/// key_length(kind) entries are meaningful.
std::array<Slot, kMaxSlots> neighborhood_slots(NeighborhoodKind kind, int row, int col);

}  // namespace m3gen
