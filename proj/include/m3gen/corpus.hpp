#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "m3gen/level.hpp"
#include "m3gen/level_io.hpp"

namespace m3gen {

/// Playfield silhouette: true marks a cell that is forced to void.
struct BoardMask {
  std::array<bool, kCellCount> void_forced{};

  bool forced(int row, int col) const {
    return void_forced[static_cast<std::size_t>(row * kBoardSize + col)];
  }
  bool free(int row, int col) const { return Level::on_board(row, col) && !forced(row, col); }
  /// True when the void-forced set maps onto itself under reflection.
  bool symmetric(Axis axis) const;

  /// Nine lines of nine characters: '#' void-forced, '.' free.
  static BoardMask parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const BoardMask&, const BoardMask&) = default;
};

/// Relative weights of the base content drawn for a free cell.
struct TileWeights {
  double empty = 0.04;
  double regular = 0.84;
  double special = 0.04;
  double block = 0.08;
};

/// Parameters of the synthetic corpus. Defaults give a corpus that is fully
/// vertically symmetric with a median horizontal symmetry near 0.556,
/// resembling hand-made jelly levels.
struct CorpusSpec {
  std::size_t count = 500;
  std::uint64_t seed = 0;
  BoardMask mask;
  std::optional<Axis> symmetry = Axis::Vertical;
  /// Probability that a mirrored pair is tied so both cells are identical.
  double strength = 1.0;
  TileWeights tile_weights;
  double jelly_rate = 0.94;
  double lock_rate = 0.04;
  /// Per-slot probability of injecting a lock/block cluster or a
  /// blocker-enclosed special.
  double local_pattern_rate = 0.4;

  /// Throws SpecError naming the first broken constraint.
  void validate() const;
};

enum class PatternKind : std::uint8_t { BlockCluster, LockCluster, EnclosedSpecial };

struct InjectedPattern {
  PatternKind kind;
  /// Cluster members, or the special followed by its enclosing blocks.
  std::vector<Position> cells;
};

struct SynthesizedLevel {
  Level level;
  std::vector<InjectedPattern> patterns;
};

/// Level `index` of the corpus described by `spec`, with a record of the
/// injected local patterns. Uses its own RNG stream derived from
/// (spec.seed, index).
SynthesizedLevel synthesize_one(const CorpusSpec& spec, std::size_t index);

/// Exactly spec.count valid levels; a pure function of spec.
std::vector<Level> synthesize(const CorpusSpec& spec);

/// Keeps, in order, the levels whose score on `axis` is at least `min_score`.
std::vector<Level> filter_by_symmetry(std::span<const Level> levels, Axis axis, double min_score);

std::vector<Level> load_corpus(const std::filesystem::path& path);
void save_corpus(std::span<const Level> levels, const std::filesystem::path& path,
                 const nlohmann::ordered_json& meta = nlohmann::ordered_json::object());

}  // namespace m3gen
