#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "m3gen/cpd.hpp"
#include "m3gen/level.hpp"

namespace m3gen {

enum class ScanOrder : std::uint8_t { Random, Raster };
enum class InitMode : std::uint8_t { Marginal, UniformValid };

const char* scan_name(ScanOrder scan);
ScanOrder parse_scan(const std::string& name);
const char* init_name(InitMode init);
InitMode parse_init(const std::string& name);

struct SamplerConfig {
  int sweeps = 50;
  ScanOrder scan = ScanOrder::Random;
  std::uint64_t seed = 0;
  /// Marginal draws each initial cell from the corpus tile frequencies;
  /// UniformValid draws uniformly over the tiles seen in training.
  InitMode init = InitMode::Marginal;

  /// Throws SpecError when sweeps < 1.
  void validate() const;
};

/// Sequential Gibbs sampling: every sweep resamples all 81 cells one at a
/// time from lookup() of their current neighbors. Only tiles observed in
/// training can be drawn, so the result always validates.
Level sample(const Cpd& cpd, const SamplerConfig& config);

/// Level i is sampled with seed derive_seed(config.seed, i).
std::vector<Level> sample_many(const Cpd& cpd, const SamplerConfig& config, std::size_t count);

}  // namespace m3gen
