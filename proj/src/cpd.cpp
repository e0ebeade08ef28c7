#include "m3gen/cpd.hpp"

#include <algorithm>

#include "m3gen/level_io.hpp"

namespace m3gen {

using nlohmann::ordered_json;

namespace {

constexpr std::size_t kLocalSlots = 4;

using SlotTable = std::array<std::array<Slot, kMaxSlots>, kCellCount>;

SlotTable build_slot_table(NeighborhoodKind kind) {
  SlotTable table{};
  for (int r = 0; r < kBoardSize; ++r) {
    for (int c = 0; c < kBoardSize; ++c) {
      table[static_cast<std::size_t>(r * kBoardSize + c)] = neighborhood_slots(kind, r, c);
    }
  }
  return table;
}

const SlotTable& slot_table(NeighborhoodKind kind) {
  static const SlotTable local = build_slot_table(NeighborhoodKind::Local4);
  static const SlotTable global = build_slot_table(NeighborhoodKind::Global);
  return kind == NeighborhoodKind::Local4 ? local : global;
}

ordered_json counts_to_json(const CountVector& v) {
  ordered_json counts = ordered_json::object();
  for (std::size_t t = 0; t < kTileSpace; ++t) {
    if (v.counts[t] != 0) counts[std::to_string(t)] = v.counts[t];
  }
  return counts;
}

CountVector counts_from_json(const ordered_json& doc) {
  if (!doc.is_object()) throw FormatError("cpd counts must be an object");
  CountVector v;
  for (const auto& [tile_text, count] : doc.items()) {
    int tile = -1;
    try {
      std::size_t used = 0;
      tile = std::stoi(tile_text, &used);
      if (used != tile_text.size()) tile = -1;
    } catch (const std::exception&) {
      tile = -1;
    }
    if (tile < 0 || tile >= static_cast<int>(kTileSpace) ||
        !is_valid_tile_bits(static_cast<unsigned>(tile))) {
      throw FormatError("cpd counts reference invalid tile '" + tile_text + "'");
    }
    if (!count.is_number_unsigned() || count.get<std::uint64_t>() > UINT32_MAX) {
      throw FormatError("cpd count for tile " + tile_text + " must be a nonnegative integer");
    }
    v.add(static_cast<Token>(tile), count.get<std::uint32_t>());
  }
  return v;
}

std::vector<Token> key_from_json(const ordered_json& doc, std::size_t expected_length) {
  if (!doc.is_array() || doc.size() != expected_length) {
    throw FormatError("cpd key must be an array of " + std::to_string(expected_length) +
                      " tokens");
  }
  std::vector<Token> key;
  for (const auto& token : doc) {
    if (!token.is_number_unsigned() || token.get<std::uint64_t>() >= kTokenCount) {
      throw FormatError("cpd key token out of range: " + token.dump());
    }
    key.push_back(static_cast<Token>(token.get<unsigned>()));
  }
  return key;
}

void accumulate(Categorical& out, const CountVector& v, double weight) {
  const double scale = weight / static_cast<double>(v.total);
  for (std::size_t t = 0; t < kTileSpace; ++t) {
    if (v.counts[t] != 0) out.probabilities[t] += scale * static_cast<double>(v.counts[t]);
  }
}

template <typename Fn>
void for_each_sorted(const std::unordered_map<std::uint64_t, CountVector>& table, Fn&& fn) {
  std::vector<std::uint64_t> keys;
  keys.reserve(table.size());
  for (const auto& entry : table) keys.push_back(entry.first);
  std::sort(keys.begin(), keys.end());
  for (auto key : keys) fn(key, table.at(key));
}

}  // namespace

const char* tier_name(Tier tier) {
  switch (tier) {
    case Tier::Full: return "full";
    case Tier::Local4: return "local4";
    case Tier::Neighbor: return "neighbor";
    case Tier::Marginal: return "marginal";
  }
  return "?";
}

std::uint64_t Cpd::pack(std::span<const Token> key) {
  std::uint64_t packed = 0;
  for (Token t : key) packed = (packed << 7) | t;
  return packed;
}

void Cpd::observe(std::span<const Token> key, Token center) {
  if (key.size() != key_length()) throw SpecError("cpd key has the wrong length");
  full_[pack(key)].add(center);
  if (kind_ == NeighborhoodKind::Global) local4_[pack(key.first(kLocalSlots))].add(center);
  for (std::size_t slot = 0; slot < key.size(); ++slot) {
    if (key[slot] != kSelfToken) neighbor_[slot][key[slot]].add(center);
  }
  marginal_.add(center);
}

Categorical Cpd::lookup(std::span<const Token> key) const {
  if (key.size() != key_length()) throw SpecError("cpd key has the wrong length");
  if (!trained()) throw SpecError("cpd has not been trained");
  Categorical out;
  if (auto it = full_.find(pack(key)); it != full_.end()) {
    out.tier = Tier::Full;
    accumulate(out, it->second, 1.0);
    return out;
  }
  if (kind_ == NeighborhoodKind::Global) {
    if (auto it = local4_.find(pack(key.first(kLocalSlots))); it != local4_.end()) {
      out.tier = Tier::Local4;
      accumulate(out, it->second, 1.0);
      return out;
    }
  }
  std::array<const CountVector*, kMaxSlots> hits{};
  std::size_t hit_count = 0;
  for (std::size_t slot = 0; slot < key.size(); ++slot) {
    if (key[slot] == kSelfToken || key[slot] >= kTokenCount) continue;
    const CountVector& v = neighbor_[slot][key[slot]];
    if (!v.empty()) hits[hit_count++] = &v;
  }
  if (hit_count > 0) {
    out.tier = Tier::Neighbor;
    for (std::size_t i = 0; i < hit_count; ++i) {
      accumulate(out, *hits[i], 1.0 / static_cast<double>(hit_count));
    }
    return out;
  }
  out.tier = Tier::Marginal;
  accumulate(out, marginal_, 1.0);
  return out;
}

const CountVector* Cpd::find(Tier tier, std::span<const Token> key) const {
  auto in = [](const Table& table, std::uint64_t packed) -> const CountVector* {
    auto it = table.find(packed);
    return it == table.end() ? nullptr : &it->second;
  };
  switch (tier) {
    case Tier::Full:
      return key.size() == key_length() ? in(full_, pack(key)) : nullptr;
    case Tier::Local4:
      if (kind_ != NeighborhoodKind::Global || key.size() != kLocalSlots) return nullptr;
      return in(local4_, pack(key));
    case Tier::Neighbor: {
      if (key.size() != 2 || key[0] >= key_length() || key[1] >= kTokenCount) return nullptr;
      const CountVector& v = neighbor_[key[0]][key[1]];
      return v.empty() ? nullptr : &v;
    }
    case Tier::Marginal:
      return marginal_.empty() ? nullptr : &marginal_;
  }
  return nullptr;
}

std::size_t Cpd::table_size(Tier tier) const {
  switch (tier) {
    case Tier::Full: return full_.size();
    case Tier::Local4: return local4_.size();
    case Tier::Neighbor: {
      std::size_t n = 0;
      for (const auto& slot : neighbor_) {
        n += static_cast<std::size_t>(
            std::count_if(slot.begin(), slot.end(), [](const CountVector& v) { return !v.empty(); }));
      }
      return n;
    }
    case Tier::Marginal: return marginal_.empty() ? 0 : 1;
  }
  return 0;
}

ordered_json Cpd::to_json() const {
  const std::size_t width = key_length();
  auto unpack = [](std::uint64_t packed, std::size_t length) {
    ordered_json key = ordered_json::array();
    for (std::size_t i = length; i-- > 0;) key.push_back((packed >> (7 * i)) & 0x7F);
    return key;
  };
  auto table_json = [&](const Table& table, std::size_t length) {
    ordered_json entries = ordered_json::array();
    for_each_sorted(table, [&](std::uint64_t packed, const CountVector& v) {
      ordered_json entry;
      entry["key"] = unpack(packed, length);
      entry["counts"] = counts_to_json(v);
      entries.push_back(std::move(entry));
    });
    return entries;
  };

  ordered_json tiers = ordered_json::array();
  tiers.push_back({{"tier", "full"}, {"tables", table_json(full_, width)}});
  if (kind_ == NeighborhoodKind::Global) {
    tiers.push_back({{"tier", "local4"}, {"tables", table_json(local4_, kLocalSlots)}});
  }
  ordered_json neighbor = ordered_json::array();
  for (std::size_t slot = 0; slot < width; ++slot) {
    for (std::size_t token = 0; token < kTokenCount; ++token) {
      const CountVector& v = neighbor_[slot][token];
      if (v.empty()) continue;
      ordered_json entry;
      entry["slot"] = slot;
      entry["key"] = ordered_json::array({token});
      entry["counts"] = counts_to_json(v);
      neighbor.push_back(std::move(entry));
    }
  }
  tiers.push_back({{"tier", "neighbor"}, {"tables", std::move(neighbor)}});
  ordered_json marginal = ordered_json::array();
  if (!marginal_.empty()) {
    marginal.push_back({{"key", ordered_json::array()}, {"counts", counts_to_json(marginal_)}});
  }
  tiers.push_back({{"tier", "marginal"}, {"tables", std::move(marginal)}});

  ordered_json doc;
  doc["format_version"] = kFormatVersion;
  doc["neighborhood"] = neighborhood_name(kind_);
  doc["key_length"] = width;
  doc["tiers"] = std::move(tiers);
  return doc;
}

Cpd Cpd::from_json(const ordered_json& doc) {
  if (!doc.is_object()) throw FormatError("cpd file must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "format_version" && key != "neighborhood" && key != "key_length" &&
        key != "tiers") {
      throw FormatError("cpd file has unknown field '" + key + "'");
    }
  }
  if (!doc.contains("format_version") || doc["format_version"] != kFormatVersion) {
    throw FormatError("cpd file has missing or unsupported format_version");
  }
  if (!doc.contains("neighborhood") || !doc["neighborhood"].is_string()) {
    throw FormatError("cpd file is missing 'neighborhood'");
  }
  NeighborhoodKind kind{};
  try {
    kind = parse_neighborhood(doc["neighborhood"].get<std::string>());
  } catch (const SpecError& e) {
    throw FormatError(e.what());
  }
  Cpd cpd(kind);
  const std::size_t width = cpd.key_length();
  if (!doc.contains("key_length") || doc["key_length"] != width) {
    throw FormatError("cpd key_length does not match its neighborhood");
  }
  if (!doc.contains("tiers") || !doc["tiers"].is_array()) {
    throw FormatError("cpd file is missing 'tiers'");
  }
  for (const auto& tier : doc["tiers"]) {
    if (!tier.is_object() || !tier.contains("tier") || !tier.contains("tables") ||
        !tier["tables"].is_array()) {
      throw FormatError("cpd tier must be an object with 'tier' and 'tables'");
    }
    const std::string name = tier["tier"].is_string() ? tier["tier"].get<std::string>() : "";
    for (const auto& entry : tier["tables"]) {
      if (!entry.is_object() || !entry.contains("key") || !entry.contains("counts")) {
        throw FormatError("cpd table entry must have 'key' and 'counts'");
      }
      CountVector counts = counts_from_json(entry["counts"]);
      if (name == "full") {
        cpd.full_[pack(key_from_json(entry["key"], width))] = counts;
      } else if (name == "local4" && kind == NeighborhoodKind::Global) {
        cpd.local4_[pack(key_from_json(entry["key"], kLocalSlots))] = counts;
      } else if (name == "neighbor") {
        const auto token = key_from_json(entry["key"], 1);
        if (!entry.contains("slot") || !entry["slot"].is_number_unsigned() ||
            entry["slot"].get<std::size_t>() >= width || token[0] == kSelfToken) {
          throw FormatError("cpd neighbor entry has an invalid slot or token");
        }
        cpd.neighbor_[entry["slot"].get<std::size_t>()][token[0]] = counts;
      } else if (name == "marginal") {
        key_from_json(entry["key"], 0);
        cpd.marginal_ = counts;
      } else {
        throw FormatError("cpd has unknown tier '" + name + "'");
      }
    }
  }
  auto table_total = [](const Table& table) {
    std::uint64_t total = 0;
    for (const auto& entry : table) total += entry.second.total;
    return total;
  };
  if (table_total(cpd.full_) != cpd.marginal_.total ||
      (kind == NeighborhoodKind::Global && table_total(cpd.local4_) != cpd.marginal_.total)) {
    throw FormatError("cpd tier totals disagree with the marginal tier");
  }
  return cpd;
}

std::string Cpd::encode() const { return to_json().dump() + "\n"; }

Cpd Cpd::decode(std::string_view text) {
  try {
    return from_json(ordered_json::parse(text.begin(), text.end()));
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("cpd file is not valid JSON: ") + e.what());
  }
}

Key context_key(std::span<const Token, kCellCount> board, NeighborhoodKind kind, int row,
                int col) {
  const auto& slots = slot_table(kind)[static_cast<std::size_t>(row * kBoardSize + col)];
  Key key{};
  for (std::size_t k = 0; k < m3gen::key_length(kind); ++k) {
    switch (slots[k].state) {
      case SlotState::OnBoard:
        key[k] = board[static_cast<std::size_t>(slots[k].pos.row * kBoardSize + slots[k].pos.col)];
        break;
      case SlotState::OffBoard: key[k] = kBorderToken; break;
      case SlotState::Removed: key[k] = kSelfToken; break;
    }
  }
  return key;
}

Cpd train(std::span<const Level> levels, NeighborhoodKind kind) {
  if (levels.empty()) throw SpecError("cannot train on an empty corpus");
  std::vector<LevelViolations> reports;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    auto violations = validate(levels[i]);
    if (!violations.empty()) reports.push_back({i, std::move(violations)});
  }
  if (!reports.empty()) throw ValidationError(std::move(reports));

  Cpd cpd(kind);
  const std::size_t width = key_length(kind);
  std::array<Token, kCellCount> board{};
  for (const auto& level : levels) {
    for (int r = 0; r < kBoardSize; ++r) {
      for (int c = 0; c < kBoardSize; ++c) {
        board[static_cast<std::size_t>(r * kBoardSize + c)] = collapse(level.at(r, c)).value();
      }
    }
    for (int r = 0; r < kBoardSize; ++r) {
      for (int c = 0; c < kBoardSize; ++c) {
        const Key key = context_key(board, kind, r, c);
        cpd.observe(std::span<const Token>(key).first(width),
                    board[static_cast<std::size_t>(r * kBoardSize + c)]);
      }
    }
  }
  return cpd;
}

}  // namespace m3gen
