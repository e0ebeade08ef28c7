#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "m3gen/corpus.hpp"
#include "m3gen/cpd.hpp"
#include "m3gen/level_io.hpp"
#include "m3gen/metrics.hpp"
#include "m3gen/render.hpp"
#include "m3gen/sampler.hpp"
#include "m3gen/version.hpp"

namespace m3gen::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

fs::path resolve_output(const std::string& path) {
  fs::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
      return fs::path(dir) / p;
    }
  }
  return p;
}

void write_manifest(const fs::path& output, const std::string& command, ordered_json config,
                    ordered_json extra = ordered_json::object()) {
  ordered_json doc;
  doc["tool"] = "m3gen";
  doc["version"] = kVersion;
  doc["command"] = command;
  doc["config"] = std::move(config);
  for (auto& [key, value] : extra.items()) doc[key] = value;
  auto path = output;
  path += ".manifest.json";
  write_text_file(path, doc.dump(2) + "\n");
}

// Expands `--config FILE` (flat key=value lines) into `--key value` flags
// placed right after the subcommand, ahead of the user's own flags, so that
// explicit flags win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::optional<std::string> config_path;
  for (std::size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i] == "--config") config_path = args[i + 1];
  }
  for (const auto& arg : args) {
    if (arg.rfind("--config=", 0) == 0) config_path = arg.substr(9);
  }
  if (!config_path || args.empty()) return args;

  std::ifstream in(*config_path);
  if (!in) throw SpecError("cannot read config file '" + *config_path + "'");
  std::vector<std::string> injected;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#' || line[first] == ';') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw SpecError("config line " + std::to_string(line_no) + " is not key=value");
    }
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t\r\""));
      s.erase(s.find_last_not_of(" \t\r\"") + 1);
      return s;
    };
    std::string key = trim(line.substr(0, eq));
    std::replace(key.begin(), key.end(), '_', '-');
    injected.push_back("--" + key);
    injected.push_back(trim(line.substr(eq + 1)));
  }
  std::vector<std::string> out;
  out.push_back(args.front());
  out.insert(out.end(), injected.begin(), injected.end());
  out.insert(out.end(), args.begin() + 1, args.end());
  return out;
}

const CorpusSpec kDefaultSpec{};

struct SynthOptions {
  std::size_t count = kDefaultSpec.count;
  std::uint64_t seed = kDefaultSpec.seed;
  std::string symmetry = kDefaultSpec.symmetry ? axis_name(*kDefaultSpec.symmetry) : "none";
  double strength = kDefaultSpec.strength;
  TileWeights weights = kDefaultSpec.tile_weights;
  double jelly_rate = kDefaultSpec.jelly_rate;
  double lock_rate = kDefaultSpec.lock_rate;
  double pattern_rate = kDefaultSpec.local_pattern_rate;
  std::string mask;
  std::string output;
  std::string config;
};

struct TrainOptions {
  std::string neighborhood;
  std::string input;
  std::string output;
  std::string config;
};

struct GenerateOptions {
  std::string model;
  std::size_t count = 1000;
  std::uint64_t seed = 0;
  int sweeps = 50;
  std::string scan = "random";
  std::string init = "marginal";
  std::string output;
  std::string config;
};

struct PostprocessOptions {
  std::string input;
  std::string output;
  std::string config;
};

struct EvaluateOptions {
  std::vector<std::string> inputs;
  std::string report;
  std::string plot_data;
  std::string metric = "vertical";
  std::string picks;
  std::string pick_output;
  std::string config;
};

struct RenderOptions {
  std::string input;
  std::optional<std::size_t> index;
  std::string format = "text";
  std::string output;
  std::string config;
};

int cmd_synth(const SynthOptions& o, std::ostream& out) {
  CorpusSpec spec;
  spec.count = o.count;
  spec.seed = o.seed;
  spec.symmetry = o.symmetry == "none" ? std::nullopt : std::optional<Axis>(parse_axis(o.symmetry));
  spec.strength = o.strength;
  spec.tile_weights = o.weights;
  spec.jelly_rate = o.jelly_rate;
  spec.lock_rate = o.lock_rate;
  spec.local_pattern_rate = o.pattern_rate;
  if (!o.mask.empty()) spec.mask = BoardMask::parse(read_text_file(o.mask));
  spec.validate();

  const auto levels = synthesize(spec);
  ordered_json meta;
  meta["generator"] = "synth";
  meta["seed"] = o.seed;
  const auto path = resolve_output(o.output);
  save_corpus(levels, path, meta);

  ordered_json config;
  config["count"] = o.count;
  config["seed"] = o.seed;
  config["symmetry"] = o.symmetry;
  config["strength"] = o.strength;
  config["weight_empty"] = o.weights.empty;
  config["weight_regular"] = o.weights.regular;
  config["weight_special"] = o.weights.special;
  config["weight_block"] = o.weights.block;
  config["jelly_rate"] = o.jelly_rate;
  config["lock_rate"] = o.lock_rate;
  config["pattern_rate"] = o.pattern_rate;
  config["mask"] = spec.mask.to_string();
  config["output"] = o.output;
  write_manifest(path, "synth", config,
                 {{"seed_root", o.seed}, {"rng_streams", "level i: derive_seed(seed_root, i)"}});
  out << "wrote " << levels.size() << " levels to " << path.string() << "\n";
  return kExitOk;
}

int cmd_train(const TrainOptions& o, std::ostream& out) {
  const NeighborhoodKind kind = parse_neighborhood(o.neighborhood);
  const auto levels = load_corpus(o.input);
  if (levels.empty()) throw FormatError("corpus '" + o.input + "' has no levels to train on");
  const Cpd cpd = train(levels, kind);
  const auto path = resolve_output(o.output);
  write_text_file(path, cpd.encode());

  ordered_json config;
  config["neighborhood"] = o.neighborhood;
  config["input"] = o.input;
  config["output"] = o.output;
  write_manifest(path, "train", config, {{"training_levels", levels.size()}});
  out << "trained " << neighborhood_name(kind) << " cpd on " << levels.size() << " levels ("
      << cpd.table_size(Tier::Full) << " full contexts) -> " << path.string() << "\n";
  return kExitOk;
}

int cmd_generate(const GenerateOptions& o, std::ostream& out) {
  SamplerConfig config;
  config.sweeps = o.sweeps;
  config.seed = o.seed;
  config.scan = parse_scan(o.scan);
  config.init = parse_init(o.init);
  config.validate();
  const Cpd cpd = Cpd::decode(read_text_file(o.model));
  const auto levels = sample_many(cpd, config, o.count);

  ordered_json meta;
  meta["generator"] = std::string("mrf-") + neighborhood_name(cpd.kind());
  meta["seed"] = o.seed;
  const auto path = resolve_output(o.output);
  save_corpus(levels, path, meta);

  ordered_json resolved;
  resolved["model"] = o.model;
  resolved["count"] = o.count;
  resolved["seed"] = o.seed;
  resolved["sweeps"] = o.sweeps;
  resolved["scan"] = o.scan;
  resolved["init"] = o.init;
  resolved["output"] = o.output;
  write_manifest(path, "generate", resolved,
                 {{"seed_root", o.seed}, {"rng_streams", "level i: derive_seed(seed_root, i)"}});
  out << "generated " << levels.size() << " levels -> " << path.string() << "\n";
  return kExitOk;
}

int cmd_postprocess(const PostprocessOptions& o, std::ostream& out) {
  const auto tensors = decode_tensors(read_text_file(o.input));
  std::vector<Level> levels;
  levels.reserve(tensors.size());
  for (const auto& tensor : tensors) levels.push_back(postprocess(tensor));

  const auto path = resolve_output(o.output);
  save_corpus(levels, path, {{"generator", "postprocess"}});
  ordered_json config;
  config["input"] = o.input;
  config["output"] = o.output;
  write_manifest(path, "postprocess", config);
  out << "post-processed " << levels.size() << " tensors -> " << path.string() << "\n";
  return kExitOk;
}

int cmd_evaluate(const EvaluateOptions& o, std::ostream& out) {
  if (o.inputs.empty()) throw SpecError("evaluate needs at least one input corpus");
  const Axis metric = parse_axis(o.metric);
  const std::vector<Pick> picks = o.picks.empty() ? std::vector<Pick>{} : parse_picks(o.picks);

  std::vector<LabeledReport> reports;
  ordered_json report_docs = ordered_json::array();
  ordered_json pick_docs = ordered_json::array();
  std::vector<Level> picked;
  for (const auto& input : o.inputs) {
    std::string label;
    std::string path = input;
    if (auto eq = input.find('='); eq != std::string::npos) {
      label = input.substr(0, eq);
      path = input.substr(eq + 1);
    } else {
      label = fs::path(input).stem().string();
    }
    const auto levels = load_corpus(path);
    if (levels.empty()) throw SpecError("corpus '" + path + "' is empty");
    reports.push_back({label, report(levels)});
    report_docs.push_back(report_to_json(reports.back().report, label));

    const auto& s = reports.back().report;
    out << label << " (" << levels.size() << " levels): median vertical " << s.vertical.median
        << ", horizontal " << s.horizontal.median << ", diagonal " << s.diagonal.median
        << ", cluster " << s.cluster.median << "\n";

    for (const auto& sel : select_by_quantile(levels, metric, picks)) {
      pick_docs.push_back({{"label", label},
                           {"pick", pick_name(sel.pick)},
                           {"metric", axis_name(metric)},
                           {"index", sel.index},
                           {"score", sel.score}});
      picked.push_back(levels[sel.index]);
      out << "  " << pick_name(sel.pick) << " " << axis_name(metric) << ": level " << sel.index
          << " (" << sel.score << ")\n";
    }
  }

  ordered_json config;
  config["inputs"] = o.inputs;
  config["metric"] = o.metric;
  config["pick"] = o.picks;
  config["report"] = o.report;
  config["plot_data"] = o.plot_data;
  config["pick_output"] = o.pick_output;

  if (!o.report.empty()) {
    ordered_json doc;
    doc["format_version"] = kFormatVersion;
    doc["reports"] = report_docs;
    if (!picks.empty()) doc["picks"] = pick_docs;
    const auto path = resolve_output(o.report);
    write_text_file(path, doc.dump(2) + "\n");
    write_manifest(path, "evaluate", config);
  }
  if (!o.plot_data.empty()) write_text_file(resolve_output(o.plot_data), plot_data_csv(reports));
  if (!o.pick_output.empty()) {
    if (picks.empty()) throw SpecError("--pick-output needs --pick");
    save_corpus(picked, resolve_output(o.pick_output),
                {{"generator", "evaluate-picks"}, {"picks", pick_docs}});
  }
  return kExitOk;
}

std::vector<Level> load_levels_any(const std::string& path) {
  const std::string text = read_text_file(path);
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError("'" + path + "' is not valid JSON: " + e.what());
  }
  if (doc.is_object() && doc.contains("cells")) return {level_from_json(doc)};
  return decode_corpus(text).levels;
}

int cmd_render(const RenderOptions& o, std::ostream& out) {
  const auto levels = load_levels_any(o.input);
  if (o.format != "text" && o.format != "svg") {
    throw SpecError("unknown render format '" + o.format + "' (expected text or svg)");
  }
  if (o.index && *o.index >= levels.size()) {
    throw SpecError("level index " + std::to_string(*o.index) + " out of range (" +
                    std::to_string(levels.size()) + " levels)");
  }
  std::string rendered;
  if (o.format == "svg") {
    if (levels.empty()) throw SpecError("nothing to render");
    rendered = render_svg(levels[o.index.value_or(0)]);
  } else if (o.index) {
    rendered = render_text(levels[*o.index]);
  } else {
    for (std::size_t i = 0; i < levels.size(); ++i) {
      if (i > 0) rendered += "\n";
      if (levels.size() > 1) rendered += "# level " + std::to_string(i) + "\n";
      rendered += render_text(levels[i]);
    }
  }
  if (o.output.empty()) {
    out << rendered;
  } else {
    write_text_file(resolve_output(o.output), rendered);
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"m3gen: learn and generate match-three levels with local and global MRFs"};
  app.name("m3gen");
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_version_flag("--version", std::string(kVersion));
  app.footer(std::string("Relative output paths are resolved against $") + kOutputDirEnv +
             " when it is set.");

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Synthesize a corpus of levels");
  synth_cmd->add_option("--count", synth.count, "Number of levels")->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "Master seed")->capture_default_str();
  synth_cmd->add_option("--symmetry", synth.symmetry, "none|vertical|horizontal|diagonal")
      ->capture_default_str();
  synth_cmd->add_option("--strength", synth.strength, "Probability a mirrored pair is tied")
      ->capture_default_str();
  synth_cmd->add_option("--weight-empty", synth.weights.empty, "Weight of empty cells")
      ->capture_default_str();
  synth_cmd->add_option("--weight-regular", synth.weights.regular, "Weight of regular candies")
      ->capture_default_str();
  synth_cmd->add_option("--weight-special", synth.weights.special, "Weight of special candies")
      ->capture_default_str();
  synth_cmd->add_option("--weight-block", synth.weights.block, "Weight of blockers")
      ->capture_default_str();
  synth_cmd->add_option("--jelly-rate", synth.jelly_rate, "Jelly probability on non-void cells")
      ->capture_default_str();
  synth_cmd->add_option("--lock-rate", synth.lock_rate, "Lock probability on item cells")
      ->capture_default_str();
  synth_cmd->add_option("--pattern-rate", synth.pattern_rate,
                        "Per-slot probability of a local pattern")
      ->capture_default_str();
  synth_cmd->add_option("--mask", synth.mask, "Board mask file: 9 lines of '#' (void) or '.'");
  synth_cmd->add_option("-o,--output", synth.output, "Corpus file to write")->required();
  synth_cmd->add_option("--config", synth.config, "Flat key=value file; flags win");

  TrainOptions train_opts;
  auto* train_cmd = app.add_subcommand("train", "Train an MRF cpd on a corpus");
  train_cmd->add_option("--neighborhood", train_opts.neighborhood, "local4|global")->required();
  train_cmd->add_option("-i,--input", train_opts.input, "Corpus file")->required();
  train_cmd->add_option("-o,--output", train_opts.output, "Cpd file to write")->required();
  train_cmd->add_option("--config", train_opts.config, "Flat key=value file; flags win");

  GenerateOptions gen;
  auto* gen_cmd = app.add_subcommand("generate", "Sample levels from a trained cpd");
  gen_cmd->add_option("-m,--model", gen.model, "Cpd file")->required();
  gen_cmd->add_option("-n,--count", gen.count, "Number of levels")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Master seed")->capture_default_str();
  gen_cmd->add_option("--sweeps", gen.sweeps, "Gibbs sweeps per level")->capture_default_str();
  gen_cmd->add_option("--scan", gen.scan, "random|raster")->capture_default_str();
  gen_cmd->add_option("--init", gen.init, "marginal|uniform-valid")->capture_default_str();
  gen_cmd->add_option("-o,--output", gen.output, "Corpus file to write")->required();
  gen_cmd->add_option("--config", gen.config, "Flat key=value file; flags win");

  PostprocessOptions post;
  auto* post_cmd = app.add_subcommand("postprocess", "Repair raw 9x9x6 tensors into levels");
  post_cmd->add_option("-i,--input", post.input, "Raw tensor file")->required();
  post_cmd->add_option("-o,--output", post.output, "Corpus file to write")->required();
  post_cmd->add_option("--config", post.config, "Flat key=value file; flags win");

  EvaluateOptions eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "Symmetry and cluster report for corpora");
  eval_cmd->add_option("-i,--input,inputs", eval.inputs, "Corpus files, optionally label=path")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  eval_cmd->add_option("--report", eval.report, "Report JSON file to write");
  eval_cmd->add_option("--plot-data", eval.plot_data, "Per-level CSV for boxplots");
  eval_cmd->add_option("--metric", eval.metric, "Metric for --pick")->capture_default_str();
  eval_cmd->add_option("--pick", eval.picks, "Comma list of min,median,max");
  eval_cmd->add_option("--pick-output", eval.pick_output, "Corpus file of the picked levels");
  eval_cmd->add_option("--config", eval.config, "Flat key=value file; flags win");

  RenderOptions render;
  auto* render_cmd = app.add_subcommand("render", "Render levels as text or SVG");
  render_cmd->add_option("-i,--input", render.input, "Level or corpus file")->required();
  render_cmd->add_option("--index", render.index, "Render only this level");
  render_cmd->add_option("--format", render.format, "text|svg")->capture_default_str();
  render_cmd->add_option("-o,--output", render.output, "Output file (default stdout)");
  render_cmd->add_option("--config", render.config, "Flat key=value file; flags win");

  try {
    std::vector<std::string> args = expand_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SpecError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (synth_cmd->parsed()) return cmd_synth(synth, out);
    if (train_cmd->parsed()) return cmd_train(train_opts, out);
    if (gen_cmd->parsed()) return cmd_generate(gen, out);
    if (post_cmd->parsed()) return cmd_postprocess(post, out);
    if (eval_cmd->parsed()) return cmd_evaluate(eval, out);
    if (render_cmd->parsed()) return cmd_render(render, out);
  } catch (const SpecError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace m3gen::cli
