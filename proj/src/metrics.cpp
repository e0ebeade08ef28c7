#include "m3gen/metrics.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

namespace m3gen {

namespace {

constexpr int kLast = kBoardSize - 1;

using PackedBoard = std::array<std::uint8_t, kCellCount>;

// 6-bit codes, so whole-cell equality is one byte compare. No validity
// check: metrics accept whatever is on the board.
PackedBoard pack(const Level& level) {
  PackedBoard packed{};
  const auto cells = level.cells();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    std::uint8_t bits = 0;
    for (Layer layer : kAllLayers) {
      if (cells[i].get(layer)) bits |= static_cast<std::uint8_t>(1U << static_cast<unsigned>(layer));
    }
    packed[i] = bits;
  }
  return packed;
}

constexpr std::size_t at(int r, int c) {
  return static_cast<std::size_t>(r * kBoardSize + c);
}

std::string format_number(double value) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), end);
}

nlohmann::ordered_json summary_to_json(const Summary& s) {
  nlohmann::ordered_json doc;
  doc["min"] = s.min;
  doc["q1"] = s.q1;
  doc["median"] = s.median;
  doc["q3"] = s.q3;
  doc["max"] = s.max;
  doc["mean"] = s.mean;
  return doc;
}

}  // namespace

double vertical_symmetry(const Level& level) {
  const auto b = pack(level);
  int matches = kBoardSize;  // axis column
  for (int r = 0; r < kBoardSize; ++r) {
    for (int c = 0; c < kBoardSize / 2; ++c) {
      if (b[at(r, c)] == b[at(r, kLast - c)]) matches += 2;
    }
  }
  return matches / static_cast<double>(kCellCount);
}

double horizontal_symmetry(const Level& level) {
  const auto b = pack(level);
  int matches = kBoardSize;  // axis row
  for (int r = 0; r < kBoardSize / 2; ++r) {
    for (int c = 0; c < kBoardSize; ++c) {
      if (b[at(r, c)] == b[at(kLast - r, c)]) matches += 2;
    }
  }
  return matches / static_cast<double>(kCellCount);
}

double diagonal_symmetry(const Level& level) {
  const auto b = pack(level);
  int matches = 0;
  for (int r = 0; r < kBoardSize; ++r) {
    for (int c = 0; c < kBoardSize; ++c) {
      const auto self = b[at(r, c)];
      if (self == b[at(c, r)] || self == b[at(kLast - c, kLast - r)]) ++matches;
    }
  }
  return matches / static_cast<double>(kCellCount);
}

double symmetry(const Level& level, Axis axis) {
  switch (axis) {
    case Axis::Vertical: return vertical_symmetry(level);
    case Axis::Horizontal: return horizontal_symmetry(level);
    case Axis::Diagonal: return diagonal_symmetry(level);
  }
  return 0;
}

double cluster_score(const Level& level, ClusterCategories categories) {
  auto flagged = [&](int r, int c) {
    if (!Level::on_board(r, c)) return false;
    const auto& cell = level.at(r, c);
    return (categories.block && cell.block) || (categories.lock && cell.lock);
  };
  int total = 0;
  int grouped = 0;
  for (int r = 0; r < kBoardSize; ++r) {
    for (int c = 0; c < kBoardSize; ++c) {
      if (!flagged(r, c)) continue;
      ++total;
      if (flagged(r - 1, c) || flagged(r + 1, c) || flagged(r, c - 1) || flagged(r, c + 1)) {
        ++grouped;
      }
    }
  }
  return total == 0 ? 1.0 : grouped / static_cast<double>(total);
}

const char* pick_name(Pick pick) {
  switch (pick) {
    case Pick::Min: return "min";
    case Pick::Median: return "median";
    case Pick::Max: return "max";
  }
  return "?";
}

std::vector<Pick> parse_picks(const std::string& text) {
  std::vector<Pick> picks;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (item == "min") {
      picks.push_back(Pick::Min);
    } else if (item == "median") {
      picks.push_back(Pick::Median);
    } else if (item == "max") {
      picks.push_back(Pick::Max);
    } else {
      throw SpecError("unknown pick '" + item + "' (expected min, median or max)");
    }
  }
  if (picks.empty()) throw SpecError("no picks given");
  return picks;
}

std::vector<Selection> select_by_quantile(std::span<const Level> levels, Axis axis,
                                          std::span<const Pick> picks) {
  if (levels.empty()) throw SpecError("cannot select from an empty set of levels");
  std::vector<double> scores;
  scores.reserve(levels.size());
  for (const auto& level : levels) scores.push_back(symmetry(level, axis));

  std::vector<std::size_t> order(levels.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // max_element returns the first maximum, i.e. the lowest index.
  const auto max_index =
      static_cast<std::size_t>(std::max_element(scores.begin(), scores.end()) - scores.begin());

  std::vector<Selection> out;
  for (Pick pick : picks) {
    std::size_t index = 0;
    switch (pick) {
      case Pick::Min: index = order.front(); break;
      case Pick::Median: index = order[(order.size() - 1) / 2]; break;
      case Pick::Max: index = max_index; break;
    }
    out.push_back({pick, index, scores[index]});
  }
  return out;
}

LevelScores score_level(const Level& level) {
  return {vertical_symmetry(level), horizontal_symmetry(level), diagonal_symmetry(level),
          cluster_score(level)};
}

Summary summarize(std::span<const double> values) {
  if (values.empty()) throw SpecError("cannot summarize an empty set");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return frac == 0.0 ? sorted[lo] : sorted[lo] + frac * (sorted[hi] - sorted[lo]);
  };
  Summary s;
  s.min = sorted.front();
  s.q1 = quantile(0.25);
  s.median = quantile(0.5);
  s.q3 = quantile(0.75);
  s.max = sorted.back();
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  return s;
}

SymmetryReport report(std::span<const Level> levels) {
  if (levels.empty()) throw SpecError("cannot report on an empty set of levels");
  SymmetryReport out;
  out.per_level.reserve(levels.size());
  for (const auto& level : levels) out.per_level.push_back(score_level(level));

  std::vector<double> column(levels.size());
  auto summarize_field = [&](double LevelScores::*field) {
    for (std::size_t i = 0; i < out.per_level.size(); ++i) column[i] = out.per_level[i].*field;
    return summarize(column);
  };
  out.vertical = summarize_field(&LevelScores::vertical);
  out.horizontal = summarize_field(&LevelScores::horizontal);
  out.diagonal = summarize_field(&LevelScores::diagonal);
  out.cluster = summarize_field(&LevelScores::cluster);
  return out;
}

nlohmann::ordered_json report_to_json(const SymmetryReport& report, const std::string& label) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& scores : report.per_level) {
    nlohmann::ordered_json row;
    row["vertical"] = scores.vertical;
    row["horizontal"] = scores.horizontal;
    row["diagonal"] = scores.diagonal;
    row["cluster"] = scores.cluster;
    rows.push_back(std::move(row));
  }
  nlohmann::ordered_json aggregates;
  aggregates["vertical"] = summary_to_json(report.vertical);
  aggregates["horizontal"] = summary_to_json(report.horizontal);
  aggregates["diagonal"] = summary_to_json(report.diagonal);
  aggregates["cluster"] = summary_to_json(report.cluster);

  nlohmann::ordered_json doc;
  doc["label"] = label;
  doc["count"] = report.per_level.size();
  doc["aggregates"] = std::move(aggregates);
  doc["per_level"] = std::move(rows);
  return doc;
}

std::string plot_data_csv(std::span<const LabeledReport> reports) {
  std::string out = "generator,vertical,horizontal,diagonal,cluster\n";
  for (const auto& labeled : reports) {
    for (const auto& s : labeled.report.per_level) {
      out += labeled.label + "," + format_number(s.vertical) + "," + format_number(s.horizontal) +
             "," + format_number(s.diagonal) + "," + format_number(s.cluster) + "\n";
    }
  }
  return out;
}

}  // namespace m3gen
