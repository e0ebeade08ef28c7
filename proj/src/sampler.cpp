#include "m3gen/sampler.hpp"

#include <numeric>

#include "m3gen/rng.hpp"

namespace m3gen {

namespace {

Token draw(const std::array<double, kTileSpace>& weights, Rng& rng) {
  double total = 0;
  Token last = 0;
  for (std::size_t t = 0; t < kTileSpace; ++t) {
    if (weights[t] > 0) {
      total += weights[t];
      last = static_cast<Token>(t);
    }
  }
  double target = uniform01(rng) * total;
  for (std::size_t t = 0; t < kTileSpace; ++t) {
    if (weights[t] <= 0) continue;
    if (target < weights[t]) return static_cast<Token>(t);
    target -= weights[t];
  }
  return last;
}

}  // namespace

const char* scan_name(ScanOrder scan) { return scan == ScanOrder::Random ? "random" : "raster"; }

ScanOrder parse_scan(const std::string& name) {
  if (name == "random") return ScanOrder::Random;
  if (name == "raster") return ScanOrder::Raster;
  throw SpecError("unknown scan order '" + name + "' (expected random or raster)");
}

const char* init_name(InitMode init) {
  return init == InitMode::Marginal ? "marginal" : "uniform-valid";
}

InitMode parse_init(const std::string& name) {
  if (name == "marginal") return InitMode::Marginal;
  if (name == "uniform-valid") return InitMode::UniformValid;
  throw SpecError("unknown init mode '" + name + "' (expected marginal or uniform-valid)");
}

void SamplerConfig::validate() const {
  if (sweeps < 1) throw SpecError("sampler needs at least one sweep, got " + std::to_string(sweeps));
}

Level sample(const Cpd& cpd, const SamplerConfig& config) {
  config.validate();
  if (!cpd.trained()) throw SpecError("cannot sample from an untrained cpd");

  Rng rng(config.seed);
  std::array<double, kTileSpace> init{};
  for (std::size_t t = 0; t < kTileSpace; ++t) {
    const auto n = cpd.marginal().counts[t];
    if (n == 0) continue;
    init[t] = config.init == InitMode::Marginal ? static_cast<double>(n) : 1.0;
  }

  std::array<Token, kCellCount> board{};
  for (auto& cell : board) cell = draw(init, rng);

  std::array<int, kCellCount> order{};
  std::iota(order.begin(), order.end(), 0);
  const std::size_t width = cpd.key_length();
  for (int sweep = 0; sweep < config.sweeps; ++sweep) {
    if (config.scan == ScanOrder::Random) shuffle(order.begin(), order.end(), rng);
    for (int index : order) {
      const int r = index / kBoardSize;
      const int c = index % kBoardSize;
      const Key key = context_key(board, cpd.kind(), r, c);
      const auto dist = cpd.lookup(std::span<const Token>(key).first(width));
      board[static_cast<std::size_t>(index)] = draw(dist.probabilities, rng);
    }
  }

  Level level;
  for (int r = 0; r < kBoardSize; ++r) {
    for (int c = 0; c < kBoardSize; ++c) {
      level.at(r, c) = expand(TileId::from_value(board[static_cast<std::size_t>(r * kBoardSize + c)]));
    }
  }
  return level;
}

std::vector<Level> sample_many(const Cpd& cpd, const SamplerConfig& config, std::size_t count) {
  std::vector<Level> levels;
  levels.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    SamplerConfig per_level = config;
    per_level.seed = derive_seed(config.seed, i);
    levels.push_back(sample(cpd, per_level));
  }
  return levels;
}

}  // namespace m3gen
