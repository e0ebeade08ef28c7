#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "m3gen/level.hpp"
#include "m3gen/neighborhood.hpp"

namespace m3gen {

/// Conditioning token: a tile value in [0, 63], BORDER for off-board slots,
/// or SELF for slots whose position was dropped from the neighborhood.
using Token = std::uint8_t;
inline constexpr Token kBorderToken = TileId::kBorderValue;
inline constexpr Token kSelfToken = 65;
inline constexpr std::size_t kTokenCount = 66;
inline constexpr std::size_t kTileSpace = 64;

using Key = std::array<Token, kMaxSlots>;

struct CountVector {
  std::array<std::uint32_t, kTileSpace> counts{};
  std::uint64_t total = 0;

  void add(Token tile, std::uint32_t n = 1) {
    counts[tile] += n;
    total += n;
  }
  bool empty() const { return total == 0; }

  friend bool operator==(const CountVector&, const CountVector&) = default;
};

/// Backoff order used by lookup().
enum class Tier : std::uint8_t { Full, Local4, Neighbor, Marginal };

const char* tier_name(Tier tier);

struct Categorical {
  std::array<double, kTileSpace> probabilities{};
  Tier tier = Tier::Marginal;
};

/// Conditional tile counts keyed by neighbor tokens, with backoff tiers:
/// the full key, then (Global only) its four local slots, then one table per
/// slot, then the marginal over all center tiles.
class Cpd {
 public:
  explicit Cpd(NeighborhoodKind kind) : kind_(kind) {}

  NeighborhoodKind kind() const { return kind_; }
  std::size_t key_length() const { return m3gen::key_length(kind_); }

  /// Records one (key -> center) observation in every tier.
  void observe(std::span<const Token> key, Token center);

  /// Distribution from the first tier holding a match. The per-slot tier
  /// averages the normalized distributions of every slot with a match
  /// (SELF slots are skipped). Throws SpecError if nothing was observed.
  Categorical lookup(std::span<const Token> key) const;

  /// Exact count vector of a table entry, or nullptr when absent. For
  /// Tier::Neighbor, `key` is {slot, token}; for Tier::Marginal it is empty.
  const CountVector* find(Tier tier, std::span<const Token> key) const;
  std::size_t table_size(Tier tier) const;
  const CountVector& marginal() const { return marginal_; }
  bool trained() const { return !marginal_.empty(); }

  /// Sorted, versioned encoding; byte-identical for equal Cpds.
  nlohmann::ordered_json to_json() const;
  static Cpd from_json(const nlohmann::ordered_json& doc);
  std::string encode() const;
  static Cpd decode(std::string_view text);

  friend bool operator==(const Cpd&, const Cpd&) = default;

 private:
  using Table = std::unordered_map<std::uint64_t, CountVector>;

  static std::uint64_t pack(std::span<const Token> key);

  NeighborhoodKind kind_;
  Table full_;
  Table local4_;
  std::array<std::array<CountVector, kTokenCount>, kMaxSlots> neighbor_{};
  CountVector marginal_;
};

/// Tokens of the neighborhood of (row, col) on a board of tile values.
Key context_key(std::span<const Token, kCellCount> board, NeighborhoodKind kind, int row, int col);

/// Counts every position of every level. Throws SpecError for an empty
/// corpus and ValidationError for invalid levels.
Cpd train(std::span<const Level> levels, NeighborhoodKind kind);

}  // namespace m3gen
