#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "m3gen/level.hpp"

namespace m3gen {

/// Fraction of positions whose cell equals the cell at (r, 8-c). Cells on the
/// axis column are their own counterparts and always count.
double vertical_symmetry(const Level& level);
/// Same as vertical_symmetry with counterpart (8-r, c).
double horizontal_symmetry(const Level& level);
/// A position counts when it equals its main-diagonal counterpart (c, r) or
/// its anti-diagonal counterpart (8-c, 8-r).
double diagonal_symmetry(const Level& level);
double symmetry(const Level& level, Axis axis);

struct ClusterCategories {
  bool block = true;
  bool lock = true;
};

/// Share of flagged cells (block and/or lock, per `categories`) that have
/// at least one orthogonally adjacent flagged cell. 1.0 when nothing is
/// flagged.
double cluster_score(const Level& level, ClusterCategories categories = {});

enum class Pick { Min, Median, Max };

const char* pick_name(Pick pick);
/// Parses a comma separated list such as "min,median,max".
std::vector<Pick> parse_picks(const std::string& text);

struct Selection {
  Pick pick;
  std::size_t index;
  double score;
};

/// Selects levels by their score on `axis`. Ties go to the lowest index.
/// The median is element floor((n-1)/2) of the stably sorted order.
/// Throws SpecError on an empty set.
std::vector<Selection> select_by_quantile(std::span<const Level> levels, Axis axis,
                                          std::span<const Pick> picks);

struct LevelScores {
  double vertical = 0;
  double horizontal = 0;
  double diagonal = 0;
  double cluster = 0;
};

LevelScores score_level(const Level& level);

/// Five-number summary plus mean. Quartiles interpolate linearly between
/// order statistics (position q*(n-1)), so the median of an even-sized set
/// is the mean of its two middle values.
struct Summary {
  double min = 0;
  double q1 = 0;
  double median = 0;
  double q3 = 0;
  double max = 0;
  double mean = 0;

  friend bool operator==(const Summary&, const Summary&) = default;
};

Summary summarize(std::span<const double> values);

struct SymmetryReport {
  std::vector<LevelScores> per_level;
  Summary vertical;
  Summary horizontal;
  Summary diagonal;
  Summary cluster;
};

/// Throws SpecError on an empty set.
SymmetryReport report(std::span<const Level> levels);

nlohmann::ordered_json report_to_json(const SymmetryReport& report, const std::string& label);

struct LabeledReport {
  std::string label;
  SymmetryReport report;
};

/// One header line, then one line per level:
/// generator,vertical,horizontal,diagonal,cluster
std::string plot_data_csv(std::span<const LabeledReport> reports);

}  // namespace m3gen
