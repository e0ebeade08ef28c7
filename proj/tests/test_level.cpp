#include <doctest.h>

#include <random>

#include "m3gen/level.hpp"
#include "m3gen/metrics.hpp"
#include "oracles.hpp"

using namespace m3gen;

namespace {

std::array<double, kLayerCount> layers(double shape, double regular, double special, double block,
                                       double jelly, double lock) {
  return {shape, regular, special, block, jelly, lock};
}

RawLevelTensor random_tensor(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> value(lo, hi);
  std::vector<double> flat(kCellCount * kLayerCount);
  for (auto& v : flat) v = value(rng);
  return RawLevelTensor::from_flat(flat);
}

}  // namespace

TEST_SUITE("validate") {
  TEST_CASE("all-void board has no violations") { CHECK(validate(Level{}).empty()); }

  TEST_CASE("first-four coexistence is reported once") {
    Level level;
    level.at(2, 5) = {.regular = true, .block = true};
    const auto violations = validate(level);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].rule == Rule::FirstFourCoexistence);
    CHECK(violations[0].pos == Position{2, 5});
    CHECK(violations[0].describe() == "first-four coexistence at (2,5)");
  }

  TEST_CASE("lock on a shape-only cell") {
    Level level;
    level.at(0, 3) = {.shape = true, .lock = true};
    const auto violations = validate(level);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].describe() == "lock on empty cell at (0,3)");
  }

  TEST_CASE("jelly and lock on a void cell") {
    Level level;
    level.at(8, 8) = {.jelly = true, .lock = true};
    const auto violations = validate(level);
    REQUIRE(violations.size() == 2);
    CHECK(violations[0].rule == Rule::JellyOnVoid);
    CHECK(violations[1].rule == Rule::LockOnVoid);
  }

  TEST_CASE("validate agrees with the rule oracle on every bit pattern") {
    for (unsigned bits = 0; bits < 64; ++bits) {
      Level level;
      level.at(4, 4) = oracle::cell_from_pattern(bits);
      CHECK(validate(level).empty() == oracle::cell_ok(level.at(4, 4)));
    }
  }
}

TEST_SUITE("tile ids") {
  TEST_CASE("all-unset cell collapses to 0") { CHECK(collapse(CellState{}).value() == 0); }

  TEST_CASE("block with jelly sets exactly the block and jelly bits") {
    const TileId tile = collapse({.block = true, .jelly = true});
    CHECK(tile.value() == ((1U << 3) | (1U << 4)));
  }

  TEST_CASE("valid tile set matches brute-force enumeration") {
    const auto expected = oracle::valid_patterns();
    // void, shape, shape+jelly, and {regular, special, block} x jelly x lock.
    CHECK(expected.size() == 15);
    const auto tiles = valid_tiles();
    REQUIRE(tiles.size() == expected.size());
    for (std::size_t i = 0; i < tiles.size(); ++i) CHECK(tiles[i].value() == expected[i]);
  }

  TEST_CASE("collapse and expand are inverse on valid tiles") {
    for (TileId tile : valid_tiles()) {
      const CellState cell = expand(tile);
      CHECK(cell.is_valid());
      CHECK(collapse(cell) == tile);
    }
  }

  TEST_CASE("invalid constructions are rejected") {
    CHECK_THROWS_AS(expand(TileId::border()), SpecError);
    CHECK_THROWS_AS(TileId::from_value(3), SpecError);   // shape + regular
    CHECK_THROWS_AS(TileId::from_value(16), SpecError);  // jelly on void
    CHECK_THROWS_AS(TileId::from_value(65), SpecError);
    CHECK_THROWS_AS(TileId::from_value(-1), SpecError);
    CHECK_THROWS_AS(collapse({.shape = true, .lock = true}), SpecError);
    CHECK(TileId::from_value(64).is_border());
  }
}

TEST_SUITE("postprocess") {
  TEST_CASE("argmax above threshold picks that layer") {
    const auto l = layers(0.9, 0.2, 0.1, 0.3, 0.0, 0.0);
    CHECK(postprocess_cell(l) == CellState::empty());
  }

  TEST_CASE("nothing above threshold gives a void cell with jelly and lock suppressed") {
    const auto l = layers(0.4, 0.5, 0.3, 0.2, 0.9, 0.9);
    CHECK(postprocess_cell(l) == CellState::void_cell());
  }

  TEST_CASE("ties resolve by layer order and lock is kept on a regular candy") {
    const auto l = layers(0.1, 0.8, 0.2, 0.8, 0.0, 0.7);
    CHECK(postprocess_cell(l) == CellState{.regular = true, .lock = true});
  }

  TEST_CASE("exactly 0.5 does not pass the threshold") {
    CHECK(postprocess_cell(layers(0.5, 0.5, 0.5, 0.5, 0.5, 0.5)) == CellState::void_cell());
    CHECK(postprocess_cell(layers(0.6, 0, 0, 0, 0.5, 0)) == CellState::empty());
  }

  TEST_CASE("jelly survives on an empty cell, lock does not") {
    CHECK(postprocess_cell(layers(0.9, 0, 0, 0, 0.9, 0.9)) ==
          CellState{.shape = true, .jelly = true});
  }

  TEST_CASE("shape wins a tie against every later layer") {
    CHECK(postprocess_cell(layers(0.7, 0.7, 0.7, 0.7, 0, 0)) == CellState::empty());
    CHECK(postprocess_cell(layers(0.1, 0.1, 0.7, 0.7, 0, 1)) ==
          CellState{.special = true, .lock = true});
  }

  TEST_CASE("random tensors always give valid levels") {
    std::mt19937_64 rng(101);
    for (int i = 0; i < 2000; ++i) {
      CHECK(validate(postprocess(random_tensor(rng, -1.0, 2.0))).empty());
    }
  }

  TEST_CASE("postprocess is idempotent through the 0/1 embedding") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 500; ++i) {
      const Level once = postprocess(random_tensor(rng, -1.0, 2.0));
      CHECK(postprocess(RawLevelTensor::from_level(once)) == once);
    }
  }

  TEST_CASE("malformed tensors are rejected") {
    std::vector<double> short_flat(485, 0.0);
    CHECK_THROWS_AS(RawLevelTensor::from_flat(short_flat), FormatError);
    std::vector<double> flat(486, 0.0);
    flat[17] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(RawLevelTensor::from_flat(flat), FormatError);

    std::vector<std::vector<std::vector<double>>> nested(
        9, std::vector<std::vector<double>>(9, std::vector<double>(6, 0.0)));
    CHECK_NOTHROW(RawLevelTensor::from_nested(nested));
    nested[3][4].pop_back();
    CHECK_THROWS_AS(RawLevelTensor::from_nested(nested), FormatError);
    nested.pop_back();
    CHECK_THROWS_AS(RawLevelTensor::from_nested(nested), FormatError);
  }
}

TEST_SUITE("mirror completion") {
  TEST_CASE("vertical completion copies columns 0..3 onto 8..5") {
    Level level;
    level.at(1, 0) = CellState::blocker();
    level.at(2, 3) = {.regular = true, .jelly = true};
    level.at(5, 4) = CellState::special_candy();
    level.at(6, 7) = CellState::empty();  // overwritten
    const Level out = mirror_complete(level, Axis::Vertical);
    CHECK(out.at(1, 8) == CellState::blocker());
    CHECK(out.at(2, 5) == CellState{.regular = true, .jelly = true});
    CHECK(out.at(5, 4) == CellState::special_candy());
    CHECK(out.at(6, 7) == CellState::void_cell());
    for (int r = 0; r < kBoardSize; ++r) {
      for (int c = 0; c <= 4; ++c) CHECK(out.at(r, c) == level.at(r, c));
    }
  }

  TEST_CASE("completion gives perfect symmetry, stays valid and is idempotent") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 300; ++i) {
      const Level level = oracle::random_level(rng);
      for (Axis axis : {Axis::Vertical, Axis::Horizontal}) {
        const Level out = mirror_complete(level, axis);
        CHECK(symmetry(out, axis) == 1.0);
        CHECK(validate(out).empty());
        CHECK(mirror_complete(out, axis) == out);
      }
    }
  }

  TEST_CASE("diagonal completion is not supported") {
    CHECK_THROWS_AS(mirror_complete(Level{}, Axis::Diagonal), SpecError);
  }

  TEST_CASE("reflection is an involution") {
    std::mt19937_64 rng(5);
    const Level level = oracle::random_level(rng);
    for (Axis axis : {Axis::Vertical, Axis::Horizontal, Axis::Diagonal}) {
      CHECK(reflect(reflect(level, axis), axis) == level);
    }
  }
}
