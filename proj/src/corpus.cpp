#include "m3gen/corpus.hpp"

#include <algorithm>
#include <cmath>

#include "m3gen/metrics.hpp"
#include "m3gen/rng.hpp"

namespace m3gen {

namespace {

constexpr int kLast = kBoardSize - 1;
constexpr int kPatternSlots = 3;
constexpr std::size_t kMinClusterSize = 2;
constexpr std::size_t kMaxClusterSize = 4;

constexpr std::array<Position, 4> kOrthogonal = {{{-1, 0}, {1, 0}, {0, -1}, {0, 1}}};

std::size_t flat(Position p) { return static_cast<std::size_t>(p.row * kBoardSize + p.col); }

Position mirror_of(Position p, Axis axis) {
  switch (axis) {
    case Axis::Vertical: return {p.row, kLast - p.col};
    case Axis::Horizontal: return {kLast - p.row, p.col};
    case Axis::Diagonal: return {p.col, p.row};
  }
  return p;
}

// Source half of every mirrored pair: left columns, top rows, or the upper
// triangle for the main diagonal.
bool is_source(Position p, Axis axis) {
  switch (axis) {
    case Axis::Vertical: return p.col < kBoardSize / 2;
    case Axis::Horizontal: return p.row < kBoardSize / 2;
    case Axis::Diagonal: return p.row < p.col;
  }
  return false;
}

bool in_unit_range(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

CellState draw_base(const CorpusSpec& spec, Rng& rng) {
  const auto& w = spec.tile_weights;
  const double pick = uniform01(rng) * (w.empty + w.regular + w.special + w.block);
  const double jelly = uniform01(rng);
  const double lock = uniform01(rng);
  CellState cell;
  if (pick < w.empty) {
    cell.shape = true;
  } else if (pick < w.empty + w.regular) {
    cell.regular = true;
  } else if (pick < w.empty + w.regular + w.special) {
    cell.special = true;
  } else {
    cell.block = true;
  }
  cell.jelly = jelly < spec.jelly_rate;
  cell.lock = cell.has_item() && lock < spec.lock_rate;
  return cell;
}

bool has_adjacent_free_pair(const BoardMask& mask) {
  for (int r = 0; r < kBoardSize; ++r) {
    for (int c = 0; c < kBoardSize; ++c) {
      if (mask.free(r, c) && (mask.free(r + 1, c) || mask.free(r, c + 1))) return true;
    }
  }
  return false;
}

class LevelBuilder {
 public:
  LevelBuilder(const CorpusSpec& spec, Rng& rng) : spec_(spec), rng_(rng) {}

  SynthesizedLevel build() {
    sample_base();
    tie_pairs();
    for (int slot = 0; slot < kPatternSlots; ++slot) {
      const bool fire = uniform01(rng_) < spec_.local_pattern_rate;
      const std::size_t kind = uniform_index(rng_, 3);
      if (fire) inject(static_cast<PatternKind>(kind));
    }
    return {level_, std::move(patterns_)};
  }

 private:
  void sample_base() {
    for (int r = 0; r < kBoardSize; ++r) {
      for (int c = 0; c < kBoardSize; ++c) {
        // Always draw so the stream does not depend on the mask.
        CellState cell = draw_base(spec_, rng_);
        level_.at(r, c) = spec_.mask.forced(r, c) ? CellState::void_cell() : cell;
      }
    }
  }

  void tie_pairs() {
    if (!spec_.symmetry) return;
    const Axis axis = *spec_.symmetry;
    for (int r = 0; r < kBoardSize; ++r) {
      for (int c = 0; c < kBoardSize; ++c) {
        const Position src{r, c};
        if (!is_source(src, axis)) continue;
        const Position dst = mirror_of(src, axis);
        const bool draw = uniform01(rng_) < spec_.strength;
        if (draw && spec_.mask.forced(r, c) == spec_.mask.forced(dst.row, dst.col)) {
          tied_[flat(src)] = tied_[flat(dst)] = true;
          level_.at(dst) = level_.at(src);
        }
      }
    }
  }

  bool available(Position p) const {
    return spec_.mask.free(p.row, p.col) && !used_[flat(p)];
  }

  std::vector<Position> free_neighbors(Position p) const {
    std::vector<Position> out;
    for (auto d : kOrthogonal) {
      const Position q{p.row + d.row, p.col + d.col};
      if (available(q)) out.push_back(q);
    }
    return out;
  }

  // Writes a pattern cell, and its mirror when the pair is tied.
  void write(Position p, const CellState& cell) {
    level_.at(p) = cell;
    used_[flat(p)] = true;
    if (spec_.symmetry && tied_[flat(p)]) {
      const Position m = mirror_of(p, *spec_.symmetry);
      level_.at(m) = cell;
      used_[flat(m)] = true;
    }
  }

  CellState with_jelly_of(CellState cell, Position p) const {
    cell.jelly = level_.at(p).jelly;
    return cell;
  }

  void inject(PatternKind kind) {
    std::vector<Position> anchors;
    for (int r = 0; r < kBoardSize; ++r) {
      for (int c = 0; c < kBoardSize; ++c) {
        const Position p{r, c};
        if (!available(p)) continue;
        const auto around = free_neighbors(p);
        if (around.empty()) continue;
        if (kind == PatternKind::EnclosedSpecial) {
          // Every free orthogonal neighbor must still be unclaimed.
          bool clear = true;
          for (auto d : kOrthogonal) {
            const Position q{r + d.row, c + d.col};
            clear = clear && (!spec_.mask.free(q.row, q.col) || !used_[flat(q)]);
          }
          if (!clear) continue;
        }
        anchors.push_back(p);
      }
    }
    if (anchors.empty()) return;
    const Position anchor = anchors[uniform_index(rng_, anchors.size())];

    InjectedPattern pattern{kind, {anchor}};
    if (kind == PatternKind::EnclosedSpecial) {
      for (auto q : free_neighbors(anchor)) pattern.cells.push_back(q);
      write(anchor, with_jelly_of(CellState::special_candy(), anchor));
      for (std::size_t i = 1; i < pattern.cells.size(); ++i) {
        write(pattern.cells[i], with_jelly_of(CellState::blocker(), pattern.cells[i]));
      }
    } else {
      const std::size_t target =
          kMinClusterSize + uniform_index(rng_, kMaxClusterSize - kMinClusterSize + 1);
      CellState member = kind == PatternKind::BlockCluster ? CellState::blocker()
                                                           : CellState{.regular = true, .lock = true};
      write(anchor, with_jelly_of(member, anchor));
      while (pattern.cells.size() < target) {
        std::vector<Position> frontier;
        for (auto p : pattern.cells) {
          for (auto q : free_neighbors(p)) {
            if (std::find(frontier.begin(), frontier.end(), q) == frontier.end()) {
              frontier.push_back(q);
            }
          }
        }
        if (frontier.empty()) break;
        const Position next = frontier[uniform_index(rng_, frontier.size())];
        pattern.cells.push_back(next);
        write(next, with_jelly_of(member, next));
      }
    }
    patterns_.push_back(std::move(pattern));
  }

  const CorpusSpec& spec_;
  Rng& rng_;
  Level level_;
  std::array<bool, kCellCount> tied_{};
  std::array<bool, kCellCount> used_{};
  std::vector<InjectedPattern> patterns_;
};

}  // namespace

bool BoardMask::symmetric(Axis axis) const {
  for (int r = 0; r < kBoardSize; ++r) {
    for (int c = 0; c < kBoardSize; ++c) {
      const Position m = mirror_of({r, c}, axis);
      if (forced(r, c) != forced(m.row, m.col)) return false;
    }
  }
  return true;
}

BoardMask BoardMask::parse(std::string_view text) {
  BoardMask mask;
  int row = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    start = end + 1;
    if (line.empty()) continue;
    if (row == kBoardSize) throw FormatError("board mask has more than 9 rows");
    if (line.size() != kBoardSize) {
      throw FormatError("board mask row " + std::to_string(row) + " must have 9 characters");
    }
    for (int c = 0; c < kBoardSize; ++c) {
      const char ch = line[static_cast<std::size_t>(c)];
      if (ch != '#' && ch != '.') {
        throw FormatError(std::string("board mask has invalid character '") + ch + "'");
      }
      mask.void_forced[static_cast<std::size_t>(row * kBoardSize + c)] = ch == '#';
    }
    ++row;
  }
  if (row != kBoardSize) throw FormatError("board mask must have 9 rows, got " + std::to_string(row));
  return mask;
}

std::string BoardMask::to_string() const {
  std::string out;
  for (int r = 0; r < kBoardSize; ++r) {
    for (int c = 0; c < kBoardSize; ++c) out += forced(r, c) ? '#' : '.';
    out += '\n';
  }
  return out;
}

void CorpusSpec::validate() const {
  if (count < 1) throw SpecError("corpus count must be at least 1");
  if (!in_unit_range(strength)) throw SpecError("symmetry strength must lie in [0, 1]");
  if (!in_unit_range(jelly_rate)) throw SpecError("jelly rate must lie in [0, 1]");
  if (!in_unit_range(lock_rate)) throw SpecError("lock rate must lie in [0, 1]");
  if (!in_unit_range(local_pattern_rate)) throw SpecError("local pattern rate must lie in [0, 1]");
  const auto& w = tile_weights;
  for (double x : {w.empty, w.regular, w.special, w.block}) {
    if (!std::isfinite(x) || x < 0) throw SpecError("tile weights must be finite and nonnegative");
  }
  if (w.empty + w.regular + w.special + w.block <= 0) {
    throw SpecError("tile weights must not all be zero");
  }
  if (symmetry && strength == 1.0 && !mask.symmetric(*symmetry)) {
    throw SpecError(std::string("perfect ") + axis_name(*symmetry) +
                    " symmetry needs a board mask that is symmetric on that axis");
  }
  if (local_pattern_rate > 0 && !has_adjacent_free_pair(mask)) {
    throw SpecError(
        "local patterns need at least two orthogonally adjacent free cells in the board mask");
  }
}

SynthesizedLevel synthesize_one(const CorpusSpec& spec, std::size_t index) {
  spec.validate();
  Rng rng(derive_seed(spec.seed, index));
  return LevelBuilder(spec, rng).build();
}

std::vector<Level> synthesize(const CorpusSpec& spec) {
  spec.validate();
  std::vector<Level> levels;
  levels.reserve(spec.count);
  for (std::size_t i = 0; i < spec.count; ++i) {
    Rng rng(derive_seed(spec.seed, i));
    levels.push_back(LevelBuilder(spec, rng).build().level);
  }
  return levels;
}

std::vector<Level> filter_by_symmetry(std::span<const Level> levels, Axis axis, double min_score) {
  std::vector<Level> kept;
  for (const auto& level : levels) {
    if (symmetry(level, axis) >= min_score) kept.push_back(level);
  }
  return kept;
}

std::vector<Level> load_corpus(const std::filesystem::path& path) {
  return decode_corpus(read_text_file(path)).levels;
}

void save_corpus(std::span<const Level> levels, const std::filesystem::path& path,
                 const nlohmann::ordered_json& meta) {
  CorpusFile file{{levels.begin(), levels.end()}, meta};
  write_text_file(path, encode_corpus(file));
}

}  // namespace m3gen
