#include "m3gen/level.hpp"

#include <cassert>
#include <cmath>

namespace m3gen {

const char* layer_name(Layer layer) {
  switch (layer) {
    case Layer::Shape: return "shape";
    case Layer::Regular: return "regular";
    case Layer::Special: return "special";
    case Layer::Block: return "block";
    case Layer::Jelly: return "jelly";
    case Layer::Lock: return "lock";
  }
  return "?";
}

bool CellState::get(Layer layer) const {
  switch (layer) {
    case Layer::Shape: return shape;
    case Layer::Regular: return regular;
    case Layer::Special: return special;
    case Layer::Block: return block;
    case Layer::Jelly: return jelly;
    case Layer::Lock: return lock;
  }
  return false;
}

void CellState::set(Layer layer, bool value) {
  switch (layer) {
    case Layer::Shape: shape = value; break;
    case Layer::Regular: regular = value; break;
    case Layer::Special: special = value; break;
    case Layer::Block: block = value; break;
    case Layer::Jelly: jelly = value; break;
    case Layer::Lock: lock = value; break;
  }
}

bool CellState::is_valid() const {
  const int base = int{shape} + int{regular} + int{special} + int{block};
  if (base > 1) return false;
  if (jelly && is_void()) return false;
  if (lock && !has_item()) return false;
  return true;
}

namespace {

CellState cell_from_bits(unsigned bits) {
  CellState cell;
  for (Layer layer : kAllLayers) {
    cell.set(layer, ((bits >> static_cast<unsigned>(layer)) & 1U) != 0);
  }
  return cell;
}

unsigned bits_from_cell(const CellState& cell) {
  unsigned bits = 0;
  for (Layer layer : kAllLayers) {
    if (cell.get(layer)) bits |= 1U << static_cast<unsigned>(layer);
  }
  return bits;
}

std::vector<TileId> enumerate_valid_tiles() {
  std::vector<TileId> tiles;
  for (unsigned bits = 0; bits < 64; ++bits) {
    if (is_valid_tile_bits(bits)) tiles.push_back(TileId::from_value(static_cast<int>(bits)));
  }
  return tiles;
}

}  // namespace

bool is_valid_tile_bits(unsigned bits) { return bits < 64 && cell_from_bits(bits).is_valid(); }

TileId TileId::from_value(int value) {
  if (value == kBorderValue) return border();
  if (value < 0 || value > kBorderValue) {
    throw SpecError("tile id " + std::to_string(value) + " out of range [0, 64]");
  }
  if (!is_valid_tile_bits(static_cast<unsigned>(value))) {
    throw SpecError("tile id " + std::to_string(value) + " expands to an invalid cell");
  }
  return TileId(static_cast<std::uint8_t>(value));
}

std::span<const TileId> valid_tiles() {
  static const std::vector<TileId> tiles = enumerate_valid_tiles();
  return tiles;
}

TileId collapse(const CellState& cell) {
  if (!cell.is_valid()) throw SpecError("cannot collapse an invalid cell");
  return TileId::from_value(static_cast<int>(bits_from_cell(cell)));
}

CellState expand(TileId tile) {
  if (tile.is_border()) throw SpecError("BORDER does not expand to a cell");
  return cell_from_bits(tile.value());
}

std::size_t Level::index(int row, int col) {
  assert(on_board(row, col));
  return static_cast<std::size_t>(row) * kBoardSize + static_cast<std::size_t>(col);
}

std::string Violation::describe() const {
  std::string rule_text;
  switch (rule) {
    case Rule::FirstFourCoexistence: rule_text = "first-four coexistence"; break;
    case Rule::JellyOnVoid: rule_text = "jelly on void cell"; break;
    case Rule::LockOnVoid: rule_text = "lock on void cell"; break;
    case Rule::LockOnEmpty: rule_text = "lock on empty cell"; break;
  }
  return rule_text + " at (" + std::to_string(pos.row) + "," + std::to_string(pos.col) + ")";
}

std::vector<Violation> validate(const Level& level) {
  std::vector<Violation> violations;
  for (int r = 0; r < kBoardSize; ++r) {
    for (int c = 0; c < kBoardSize; ++c) {
      const CellState& cell = level.at(r, c);
      const Position pos{r, c};
      const int base = int{cell.shape} + int{cell.regular} + int{cell.special} + int{cell.block};
      if (base > 1) violations.push_back({pos, Rule::FirstFourCoexistence});
      if (cell.jelly && cell.is_void()) violations.push_back({pos, Rule::JellyOnVoid});
      if (cell.lock && !cell.has_item()) {
        violations.push_back({pos, cell.is_void() ? Rule::LockOnVoid : Rule::LockOnEmpty});
      }
    }
  }
  return violations;
}

RawLevelTensor RawLevelTensor::from_flat(std::span<const double> values) {
  RawLevelTensor tensor;
  if (values.size() != tensor.values_.size()) {
    throw FormatError("raw tensor must hold 9x9x6 = 486 values, got " +
                      std::to_string(values.size()));
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw FormatError("raw tensor contains a non-finite value");
    tensor.values_[i] = values[i];
  }
  return tensor;
}

RawLevelTensor RawLevelTensor::from_nested(
    const std::vector<std::vector<std::vector<double>>>& values) {
  if (values.size() != kBoardSize) {
    throw FormatError("raw tensor must have 9 rows, got " + std::to_string(values.size()));
  }
  std::vector<double> flat;
  flat.reserve(kCellCount * kLayerCount);
  for (std::size_t r = 0; r < values.size(); ++r) {
    if (values[r].size() != kBoardSize) {
      throw FormatError("raw tensor row " + std::to_string(r) + " must have 9 columns, got " +
                        std::to_string(values[r].size()));
    }
    for (std::size_t c = 0; c < values[r].size(); ++c) {
      if (values[r][c].size() != kLayerCount) {
        throw FormatError("raw tensor cell (" + std::to_string(r) + "," + std::to_string(c) +
                          ") must have 6 layers, got " + std::to_string(values[r][c].size()));
      }
      flat.insert(flat.end(), values[r][c].begin(), values[r][c].end());
    }
  }
  return from_flat(flat);
}

RawLevelTensor RawLevelTensor::from_level(const Level& level) {
  RawLevelTensor tensor;
  for (int r = 0; r < kBoardSize; ++r) {
    for (int c = 0; c < kBoardSize; ++c) {
      for (Layer layer : kAllLayers) {
        tensor.values_[flat_index(r, c, layer)] = level.at(r, c).get(layer) ? 1.0 : 0.0;
      }
    }
  }
  return tensor;
}

CellState postprocess_cell(std::span<const double, kLayerCount> layers) {
  CellState cell;
  int best = -1;
  double best_value = kLayerThreshold;
  // Layers 0..3 are the mutually exclusive base layers; strict comparison
  // keeps the earliest layer on ties.
  for (int i = 0; i < 4; ++i) {
    if (layers[static_cast<std::size_t>(i)] > best_value) {
      best = i;
      best_value = layers[static_cast<std::size_t>(i)];
    }
  }
  if (best < 0) return cell;
  cell.set(static_cast<Layer>(best), true);
  cell.jelly = layers[static_cast<std::size_t>(Layer::Jelly)] > kLayerThreshold;
  cell.lock = layers[static_cast<std::size_t>(Layer::Lock)] > kLayerThreshold && cell.has_item();
  return cell;
}

Level postprocess(const RawLevelTensor& raw) {
  Level level;
  const auto flat = raw.flat();
  for (int r = 0; r < kBoardSize; ++r) {
    for (int c = 0; c < kBoardSize; ++c) {
      const auto offset = (static_cast<std::size_t>(r) * kBoardSize + static_cast<std::size_t>(c)) *
                          kLayerCount;
      level.at(r, c) = postprocess_cell(flat.subspan(offset).first<kLayerCount>());
    }
  }
  return level;
}

const char* axis_name(Axis axis) {
  switch (axis) {
    case Axis::Vertical: return "vertical";
    case Axis::Horizontal: return "horizontal";
    case Axis::Diagonal: return "diagonal";
  }
  return "?";
}

Axis parse_axis(const std::string& name) {
  if (name == "vertical") return Axis::Vertical;
  if (name == "horizontal") return Axis::Horizontal;
  if (name == "diagonal") return Axis::Diagonal;
  throw SpecError("unknown axis '" + name + "' (expected vertical, horizontal or diagonal)");
}

Level reflect(const Level& level, Axis axis) {
  Level out;
  for (int r = 0; r < kBoardSize; ++r) {
    for (int c = 0; c < kBoardSize; ++c) {
      switch (axis) {
        case Axis::Vertical: out.at(r, c) = level.at(r, kBoardSize - 1 - c); break;
        case Axis::Horizontal: out.at(r, c) = level.at(kBoardSize - 1 - r, c); break;
        case Axis::Diagonal: out.at(r, c) = level.at(c, r); break;
      }
    }
  }
  return out;
}

Level mirror_complete(const Level& level, Axis axis) {
  constexpr int kHalf = kBoardSize / 2;
  Level out = level;
  switch (axis) {
    case Axis::Vertical:
      for (int r = 0; r < kBoardSize; ++r) {
        for (int c = 0; c < kHalf; ++c) out.at(r, kBoardSize - 1 - c) = level.at(r, c);
      }
      break;
    case Axis::Horizontal:
      for (int r = 0; r < kHalf; ++r) {
        for (int c = 0; c < kBoardSize; ++c) out.at(kBoardSize - 1 - r, c) = level.at(r, c);
      }
      break;
    case Axis::Diagonal:
      throw SpecError("mirror completion supports only the vertical and horizontal axes");
  }
  return out;
}

}  // namespace m3gen
