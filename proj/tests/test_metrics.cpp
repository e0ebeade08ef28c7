#include <doctest.h>

#include <random>

#include "m3gen/metrics.hpp"
#include "oracles.hpp"

using namespace m3gen;

namespace {

Level single(int r, int c, CellState cell) {
  Level level;
  level.at(r, c) = cell;
  return level;
}

}  // namespace

TEST_SUITE("symmetry fixtures") {
  TEST_CASE("single block in the corner") {
    const Level level = single(0, 0, CellState::blocker());
    // Confirm against the brute-force oracle before pinning the values.
    REQUIRE(oracle::vertical(level) == 79.0 / 81.0);
    REQUIRE(oracle::horizontal(level) == 79.0 / 81.0);
    REQUIRE(oracle::diagonal(level) == 1.0);
    CHECK(vertical_symmetry(level) == 79.0 / 81.0);
    CHECK(horizontal_symmetry(level) == 79.0 / 81.0);
    CHECK(diagonal_symmetry(level) == 1.0);
  }

  TEST_CASE("single block next to the corner") {
    const Level level = single(0, 1, CellState::blocker());
    REQUIRE(oracle::diagonal(level) == 80.0 / 81.0);
    CHECK(diagonal_symmetry(level) == 80.0 / 81.0);
  }

  TEST_CASE("axis cells count as matches") {
    const Level level = single(3, 4, CellState::special_candy());
    CHECK(vertical_symmetry(level) == 1.0);
    CHECK(horizontal_symmetry(level) == 79.0 / 81.0);
  }

  TEST_CASE("overlay flags take part in the comparison") {
    Level level;
    level.at(2, 1) = CellState::regular_candy();
    level.at(2, 7) = {.regular = true, .jelly = true};
    CHECK(vertical_symmetry(level) == 79.0 / 81.0);
  }
}

TEST_SUITE("symmetry properties") {
  TEST_CASE("production scores equal the oracle on random levels") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 1000; ++i) {
      const Level level = i % 2 ? oracle::random_level(rng) : oracle::random_sparse_level(rng);
      CHECK(vertical_symmetry(level) == oracle::vertical(level));
      CHECK(horizontal_symmetry(level) == oracle::horizontal(level));
      CHECK(diagonal_symmetry(level) == oracle::diagonal(level));
    }
  }

  TEST_CASE("scores are invariant under their own reflection and bounded") {
    std::mt19937_64 rng(22);
    for (int i = 0; i < 300; ++i) {
      const Level level = oracle::random_sparse_level(rng);
      for (Axis axis : {Axis::Vertical, Axis::Horizontal, Axis::Diagonal}) {
        const double s = symmetry(level, axis);
        CHECK(s >= 0.0);
        CHECK(s <= 1.0);
        CHECK(symmetry(reflect(level, axis), axis) == s);
      }
      CHECK(diagonal_symmetry(level) >= oracle::main_diagonal(level));
      CHECK(diagonal_symmetry(level) >= oracle::anti_diagonal(level));
    }
  }

  TEST_CASE("uniform boards are perfectly symmetric") {
    for (TileId tile : valid_tiles()) {
      const Level level = oracle::uniform_level(expand(tile));
      CHECK(vertical_symmetry(level) == 1.0);
      CHECK(horizontal_symmetry(level) == 1.0);
      CHECK(diagonal_symmetry(level) == 1.0);
    }
  }
}

TEST_SUITE("cluster score") {
  TEST_CASE("no flagged cells scores 1") {
    CHECK(cluster_score(Level{}) == 1.0);
    CHECK(cluster_score(single(4, 4, CellState::regular_candy())) == 1.0);
  }

  TEST_CASE("isolated and paired blockers") {
    Level level;
    level.at(0, 0) = CellState::blocker();
    CHECK(cluster_score(level) == 0.0);
    level.at(0, 1) = CellState::blocker();
    CHECK(cluster_score(level) == 1.0);
    level.at(5, 5) = CellState::blocker();
    CHECK(cluster_score(level) == doctest::Approx(2.0 / 3.0));
    level.at(4, 4) = CellState::blocker();  // diagonal contact does not count
    CHECK(cluster_score(level) == 0.5);
  }

  TEST_CASE("categories select what is flagged") {
    Level level;
    level.at(2, 2) = CellState::blocker();
    level.at(2, 3) = {.regular = true, .lock = true};
    CHECK(cluster_score(level) == 1.0);
    CHECK(cluster_score(level, {.block = true, .lock = false}) == 0.0);
    CHECK(cluster_score(level, {.block = false, .lock = true}) == 0.0);
    CHECK(cluster_score(level, {.block = false, .lock = false}) == 1.0);
  }
}

TEST_SUITE("selection") {
  TEST_CASE("min, median and max with ties") {
    std::vector<Level> levels(5);
    levels[0] = single(0, 0, CellState::blocker());  // 79/81
    levels[1] = Level{};                             // 1
    levels[2] = single(0, 0, CellState::blocker());  // 79/81
    levels[3] = Level{};                             // 1
    levels[4] = single(1, 1, CellState::blocker());  // 79/81
    const std::vector<Pick> picks = {Pick::Min, Pick::Median, Pick::Max};
    const auto sel = select_by_quantile(levels, Axis::Vertical, picks);
    REQUIRE(sel.size() == 3);
    CHECK(sel[0].index == 0);
    CHECK(sel[1].index == 4);  // sorted: 0,2,4,1,3; element 2
    CHECK(sel[2].index == 1);
    CHECK(sel[2].score == 1.0);
  }

  TEST_CASE("even sized sets take the lower middle") {
    std::vector<Level> levels = {Level{}, single(0, 0, CellState::blocker())};
    const std::vector<Pick> picks = {Pick::Median};
    CHECK(select_by_quantile(levels, Axis::Vertical, picks)[0].index == 1);
  }

  TEST_CASE("errors and parsing") {
    const std::vector<Pick> picks = {Pick::Min};
    CHECK_THROWS_AS(select_by_quantile({}, Axis::Vertical, picks), SpecError);
    CHECK(parse_picks("max,min") == std::vector<Pick>{Pick::Max, Pick::Min});
    CHECK_THROWS_AS(parse_picks("mode"), SpecError);
    CHECK_THROWS_AS(parse_picks(""), SpecError);
  }
}

TEST_SUITE("summaries") {
  TEST_CASE("quartiles interpolate between order statistics") {
    const std::vector<double> values = {4, 1, 3, 2};
    const Summary s = summarize(values);
    CHECK(s.min == 1);
    CHECK(s.q1 == 1.75);
    CHECK(s.median == 2.5);
    CHECK(s.q3 == 3.25);
    CHECK(s.max == 4);
    CHECK(s.mean == 2.5);
  }

  TEST_CASE("single value") {
    const std::vector<double> values = {0.25};
    CHECK(summarize(values) == Summary{0.25, 0.25, 0.25, 0.25, 0.25, 0.25});
  }

  TEST_CASE("report aggregates per-level scores") {
    std::mt19937_64 rng(23);
    std::vector<Level> levels;
    for (int i = 0; i < 41; ++i) levels.push_back(oracle::random_sparse_level(rng));
    const SymmetryReport rep = report(levels);
    REQUIRE(rep.per_level.size() == levels.size());
    std::vector<double> vertical;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      CHECK(rep.per_level[i].vertical == oracle::vertical(levels[i]));
      CHECK(rep.per_level[i].cluster == cluster_score(levels[i]));
      vertical.push_back(rep.per_level[i].vertical);
    }
    CHECK(rep.vertical == summarize(vertical));
    CHECK(rep.vertical.min <= rep.vertical.q1);
    CHECK(rep.vertical.q3 <= rep.vertical.max);
    CHECK_THROWS_AS(report({}), SpecError);

    const auto doc = report_to_json(rep, "corpus");
    CHECK(doc["label"] == "corpus");
    CHECK(doc["count"] == 41);
    CHECK(doc["aggregates"]["vertical"]["median"].get<double>() == rep.vertical.median);
    CHECK(doc["per_level"].size() == 41);
  }

  TEST_CASE("plot data has one row per level") {
    std::vector<Level> levels = {Level{}, single(0, 1, CellState::blocker())};
    const std::vector<LabeledReport> reports = {{"corpus", report(levels)}};
    CHECK(plot_data_csv(reports) ==
          "generator,vertical,horizontal,diagonal,cluster\n"
          "corpus,1,1,1,1\n"
          "corpus,0.9753086419753086,0.9753086419753086,0.9876543209876543,0\n");
  }
}
