// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <algorithm>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "m3gen/corpus.hpp"
#include "m3gen/level_io.hpp"
#include "m3gen/metrics.hpp"
#include "m3gen/sampler.hpp"
#include "oracles.hpp"

using namespace m3gen;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

Outcome postprocess_totality() {
  const auto start = Clock::now();
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> value(-1.0, 2.0);
  std::vector<double> flat(kCellCount * kLayerCount);
  int valid = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    for (auto& v : flat) v = value(rng);
    if (validate(postprocess(RawLevelTensor::from_flat(flat))).empty()) ++valid;
  }
  const double t = seconds_since(start);
  return {valid == n && t < 10.0, fmt("%d/%d valid, %.2fs (limit 10s)", valid, n, t)};
}

Outcome symmetry_oracle() {
  std::mt19937_64 rng(77);
  std::vector<Level> levels;
  for (int i = 0; i < 1000; ++i) {
    levels.push_back(i % 2 ? oracle::random_level(rng) : oracle::random_sparse_level(rng));
  }
  const auto start = Clock::now();
  int mismatches = 0;
  for (const auto& level : levels) {
    mismatches += vertical_symmetry(level) != oracle::vertical(level);
    mismatches += horizontal_symmetry(level) != oracle::horizontal(level);
    mismatches += diagonal_symmetry(level) != oracle::diagonal(level);
  }
  const double t = seconds_since(start);
  return {mismatches == 0 && t < 5.0,
          fmt("%d mismatches over 1000 levels x 3 axes, %.3fs (limit 5s)", mismatches, t)};
}

Outcome derived_fixtures() {
  Level corner;
  corner.at(0, 0) = CellState::blocker();
  Level beside;
  beside.at(0, 1) = CellState::blocker();
  const bool oracle_ok = oracle::vertical(corner) == 79.0 / 81.0 &&
                         oracle::horizontal(corner) == 79.0 / 81.0 &&
                         oracle::diagonal(corner) == 1.0 && oracle::diagonal(beside) == 80.0 / 81.0;
  const bool impl_ok = vertical_symmetry(corner) == 79.0 / 81.0 &&
                       horizontal_symmetry(corner) == 79.0 / 81.0 &&
                       diagonal_symmetry(corner) == 1.0 && diagonal_symmetry(beside) == 80.0 / 81.0;
  return {oracle_ok && impl_ok,
          fmt("corner v=%.0f/81 h=%.0f/81 d=%.0f/81, beside d=%.0f/81",
              vertical_symmetry(corner) * 81, horizontal_symmetry(corner) * 81,
              diagonal_symmetry(corner) * 81, diagonal_symmetry(beside) * 81)};
}

Outcome rq1_direction() {
  const auto start = Clock::now();
  CorpusSpec spec;
  spec.count = 500;
  spec.seed = 7;
  spec.symmetry = Axis::Vertical;
  spec.strength = 1.0;
  const auto corpus = synthesize(spec);
  SamplerConfig config;
  config.sweeps = 50;
  config.seed = 1;
  const double local =
      report(sample_many(train(corpus, NeighborhoodKind::Local4), config, 1000)).vertical.median;
  const double global =
      report(sample_many(train(corpus, NeighborhoodKind::Global), config, 1000)).vertical.median;
  const double t = seconds_since(start);
  return {global >= local + 0.15 && global >= 0.7 && t < 120.0,
          fmt("median vertical global %.4f, local4 %.4f (need global >= local4 + 0.15 and >= 0.7), "
              "%.1fs (limit 120s)",
              global, local, t)};
}

Outcome memorization() {
  int failures = 0;
  int runs = 0;
  for (TileId tile : valid_tiles()) {
    const Level board = oracle::uniform_level(expand(tile));
    for (auto kind : {NeighborhoodKind::Local4, NeighborhoodKind::Global}) {
      const Cpd cpd = train(std::vector<Level>{board}, kind);
      for (std::uint64_t seed : {0ULL, 42ULL, 0xdeadbeefULL}) {
        SamplerConfig config;
        config.seed = seed;
        config.sweeps = 5;
        config.scan = seed % 2 ? ScanOrder::Raster : ScanOrder::Random;
        failures += sample(cpd, config) != board;
        ++runs;
      }
    }
  }

  const CellState a = CellState::regular_candy();
  const CellState b = CellState::blocker();
  const std::vector<Level> boards = {oracle::checkerboard(a, b), oracle::checkerboard(b, a)};
  const Cpd cpd = train(boards, NeighborhoodKind::Global);
  SamplerConfig config;
  config.sweeps = 50;
  double sum = 0;
  for (const auto& level : sample_many(cpd, config, 100)) {
    sum += oracle::checkerboard_consistency(level, a, b);
  }
  const double consistency = sum / 100;
  return {failures == 0 && consistency >= 0.99,
          fmt("uniform boards %d/%d exact; checkerboard (global) %.4f of cells "
              "in one phase over 100 samples (need >= 0.99)",
              runs - failures, runs, consistency)};
}

std::vector<std::string> output_files(const fs::path& dir) {
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir)) {
    names.push_back(entry.path().filename().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "m3gen_acceptance";
  fs::remove_all(root);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> value(-1.0, 2.0);
  std::vector<RawLevelTensor> tensors;
  for (int i = 0; i < 25; ++i) {
    std::vector<double> flat(kCellCount * kLayerCount);
    for (auto& v : flat) v = value(rng);
    tensors.push_back(RawLevelTensor::from_flat(flat));
  }
  fs::create_directories(root);
  write_text_file(root / "raw.json", encode_tensors(tensors));

  auto pipeline = [&](const fs::path& dir) {
    fs::create_directories(dir);
    auto p = [&](const char* name) { return (dir / name).string(); };
    const std::vector<std::vector<std::string>> steps = {
        {"synth", "--count", "60", "--seed", "13", "-o", p("corpus.json")},
        {"train", "--neighborhood", "global", "-i", p("corpus.json"), "-o", p("global.cpd.json")},
        {"train", "--neighborhood", "local4", "-i", p("corpus.json"), "-o", p("local4.cpd.json")},
        {"generate", "-m", p("global.cpd.json"), "-n", "40", "--seed", "3", "-o", p("global.json")},
        {"generate", "-m", p("local4.cpd.json"), "-n", "40", "--seed", "3", "--scan", "raster",
         "-o", p("local4.json")},
        {"postprocess", "-i", (root / "raw.json").string(), "-o", p("post.json")},
        {"evaluate", "corpus=" + p("corpus.json"), "global=" + p("global.json"),
         "local4=" + p("local4.json"), "post=" + p("post.json"), "--report", p("report.json"),
         "--plot-data", p("plot.csv"), "--pick", "min,median,max", "--pick-output",
         p("picks.json")},
        {"render", "-i", p("picks.json"), "-o", p("picks.txt")},
        {"render", "-i", p("picks.json"), "--index", "0", "--format", "svg", "-o", p("pick.svg")},
    };
    for (const auto& args : steps) {
      std::ostringstream out;
      std::ostringstream err;
      if (cli::run(args, out, err) != 0) throw Error(args[0] + " failed: " + err.str());
    }
  };

  // Both runs use the same paths so manifests are comparable verbatim.
  try {
    pipeline(root / "run");
    fs::rename(root / "run", root / "first");
    pipeline(root / "run");
  } catch (const std::exception& e) {
    fs::remove_all(root);
    return {false, e.what()};
  }
  const auto names = output_files(root / "first");
  bool same = names == output_files(root / "run");
  int compared = 0;
  for (const auto& name : names) {
    if (!same) break;
    same = read_text_file(root / "first" / name) == read_text_file(root / "run" / name);
    ++compared;
  }
  fs::remove_all(root);
  return {same, fmt("%d output files compared across two runs, %s", compared,
                    same ? "all byte-identical" : "difference found")};
}

Outcome mirror_completion() {
  std::mt19937_64 rng(99);
  int failures = 0;
  for (int i = 0; i < 1000; ++i) {
    const Level level = oracle::random_level(rng);
    const Level out = mirror_complete(level, Axis::Vertical);
    if (vertical_symmetry(out) != 1.0 || !validate(out).empty() ||
        mirror_complete(out, Axis::Vertical) != out) {
      ++failures;
    }
  }
  return {failures == 0, fmt("%d/1000 levels failed symmetry, validity or idempotence", failures)};
}

Outcome throughput() {
  CorpusSpec spec;
  spec.count = 500;
  const auto corpus = synthesize(spec);
  const auto start = Clock::now();
  const Cpd cpd = train(corpus, NeighborhoodKind::Global);
  const auto levels = sample_many(cpd, SamplerConfig{}, 1000);
  const double t = seconds_since(start);
  return {levels.size() == 1000 && t < 60.0,
          fmt("train 500 (global) + generate 1000 in %.2fs (limit 60s)", t)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"postprocess totality", postprocess_totality},
      {"symmetry oracle equivalence", symmetry_oracle},
      {"derived symmetry fixtures", derived_fixtures},
      {"global vs local4 vertical symmetry", rq1_direction},
      {"degenerate memorization", memorization},
      {"pipeline determinism", determinism},
      {"mirror completion", mirror_completion},
      {"throughput", throughput},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    failed += !outcome.pass;
    std::printf("%s  %-36s %s\n", outcome.pass ? "PASS" : "FAIL", name, outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
