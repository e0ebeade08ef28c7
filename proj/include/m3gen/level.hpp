#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "m3gen/errors.hpp"

namespace m3gen {

inline constexpr int kBoardSize = 9;
inline constexpr int kCellCount = kBoardSize * kBoardSize;
inline constexpr int kLayerCount = 6;

/// Layer order is fixed: it is both the tensor channel order and the bit
/// order of TileId (shape is the least significant bit).
enum class Layer : std::uint8_t { Shape = 0, Regular, Special, Block, Jelly, Lock };

inline constexpr std::array<Layer, kLayerCount> kAllLayers = {
    Layer::Shape, Layer::Regular, Layer::Special, Layer::Block, Layer::Jelly, Layer::Lock};

const char* layer_name(Layer layer);

struct Position {
  int row = 0;
  int col = 0;

  friend bool operator==(const Position&, const Position&) = default;
};

/// Six binary occurrence flags for one board cell.
///
/// The first four layers (shape, regular, special, block) are mutually
/// exclusive. A cell with none of them set is void. A shape-only cell is a
/// playable cell with no item ("empty"). CellState does not enforce these
/// rules itself; see validate().
struct CellState {
  bool shape = false;
  bool regular = false;
  bool special = false;
  bool block = false;
  bool jelly = false;
  bool lock = false;

  bool get(Layer layer) const;
  void set(Layer layer, bool value);

  bool is_void() const { return !shape && !regular && !special && !block; }
  bool has_item() const { return regular || special || block; }
  bool is_valid() const;

  static CellState void_cell() { return {}; }
  static CellState empty() { return {.shape = true}; }
  static CellState regular_candy() { return {.regular = true}; }
  static CellState special_candy() { return {.special = true}; }
  static CellState blocker() { return {.block = true}; }

  friend bool operator==(const CellState&, const CellState&) = default;
};

/// Collapsed 6-bit identity of a valid cell, or the BORDER conditioning token.
class TileId {
 public:
  static constexpr std::uint8_t kBorderValue = 64;

  /// Throws SpecError for values outside [0, 64] and for bit patterns whose
  /// expansion is not a valid CellState.
  static TileId from_value(int value);
  static TileId border() { return TileId(kBorderValue); }

  std::uint8_t value() const { return value_; }
  bool is_border() const { return value_ == kBorderValue; }

  friend auto operator<=>(const TileId&, const TileId&) = default;

 private:
  explicit TileId(std::uint8_t value) : value_(value) {}
  std::uint8_t value_;
};

bool is_valid_tile_bits(unsigned bits);

/// All valid non-BORDER tiles in ascending order of value.
std::span<const TileId> valid_tiles();

/// Throws SpecError if the cell violates a CellState rule.
TileId collapse(const CellState& cell);
/// Throws SpecError for BORDER.
CellState expand(TileId tile);

class Level {
 public:
  Level() = default;

  const CellState& at(int row, int col) const { return cells_[index(row, col)]; }
  CellState& at(int row, int col) { return cells_[index(row, col)]; }
  const CellState& at(Position p) const { return at(p.row, p.col); }
  CellState& at(Position p) { return at(p.row, p.col); }

  std::span<const CellState, kCellCount> cells() const { return cells_; }

  static bool on_board(int row, int col) {
    return row >= 0 && row < kBoardSize && col >= 0 && col < kBoardSize;
  }

  friend bool operator==(const Level&, const Level&) = default;

 private:
  static std::size_t index(int row, int col);

  std::array<CellState, kCellCount> cells_{};
};

enum class Rule : std::uint8_t {
  FirstFourCoexistence,
  JellyOnVoid,
  LockOnVoid,
  LockOnEmpty,
};

struct Violation {
  Position pos;
  Rule rule;

  std::string describe() const;
  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Reports every broken cell rule, in row-major order. Never throws.
std::vector<Violation> validate(const Level& level);

/// 9x9x6 generator output prior to repair, indexed [row][col][layer].
class RawLevelTensor {
 public:
  RawLevelTensor() = default;

  /// `values` must hold exactly 486 finite numbers in row, col, layer order.
  static RawLevelTensor from_flat(std::span<const double> values);
  static RawLevelTensor from_nested(const std::vector<std::vector<std::vector<double>>>& values);
  /// 0/1 embedding of a level.
  static RawLevelTensor from_level(const Level& level);

  double at(int row, int col, Layer layer) const {
    return values_[flat_index(row, col, layer)];
  }
  std::span<const double> flat() const { return values_; }

 private:
  static std::size_t flat_index(int row, int col, Layer layer) {
    return (static_cast<std::size_t>(row) * kBoardSize + static_cast<std::size_t>(col)) *
               kLayerCount +
           static_cast<std::size_t>(layer);
  }

  std::array<double, kCellCount * kLayerCount> values_{};
};

/// Threshold a raw value must strictly exceed for its layer to be set.
inline constexpr double kLayerThreshold = 0.5;

/// Repairs raw generator output into a level that always validates.
///
/// The base layer is the highest of shape/regular/special/block when it
/// exceeds the threshold (earlier layers win ties), otherwise the cell is void.
/// Jelly then needs a non-void cell and lock needs an item.
CellState postprocess_cell(std::span<const double, kLayerCount> layers);
Level postprocess(const RawLevelTensor& raw);

enum class Axis : std::uint8_t { Vertical, Horizontal, Diagonal };

const char* axis_name(Axis axis);
/// Throws SpecError for unknown names.
Axis parse_axis(const std::string& name);

/// Full reflection of the board: vertical maps (r,c) to (r,8-c), horizontal
/// to (8-r,c), diagonal to (c,r).
Level reflect(const Level& level, Axis axis);

/// Overwrites the right (vertical) or bottom (horizontal) half with the
/// mirror of the other half. The axis line is left untouched. Diagonal is not
/// supported and throws SpecError.
Level mirror_complete(const Level& level, Axis axis);

}  // namespace m3gen
