#include "m3gen/level_io.hpp"

#include <fstream>
#include <sstream>

namespace m3gen {

using nlohmann::ordered_json;

namespace {

constexpr std::size_t kMaxReportedViolations = 20;

std::string summarize(const std::vector<LevelViolations>& reports) {
  std::size_t total = 0;
  for (const auto& report : reports) total += report.violations.size();
  std::string text = "validation failed with " + std::to_string(total) + " violation(s)";
  std::size_t shown = 0;
  for (const auto& report : reports) {
    for (const auto& violation : report.violations) {
      if (shown == kMaxReportedViolations) {
        return text + "; ... and " + std::to_string(total - shown) + " more";
      }
      text += shown == 0 ? ": " : "; ";
      text += "level " + std::to_string(report.level_index) + ": " + violation.describe();
      ++shown;
    }
  }
  return text;
}

void require_object(const ordered_json& doc, std::string_view what) {
  if (!doc.is_object()) throw FormatError(std::string(what) + " must be a JSON object");
}

void reject_unknown_keys(const ordered_json& doc, std::initializer_list<std::string_view> allowed,
                         std::string_view what) {
  for (const auto& [key, value] : doc.items()) {
    bool known = false;
    for (auto name : allowed) known = known || key == name;
    if (!known) throw FormatError(std::string(what) + " has unknown field '" + key + "'");
  }
}

const ordered_json& required(const ordered_json& doc, const char* key, std::string_view what) {
  auto it = doc.find(key);
  if (it == doc.end()) {
    throw FormatError(std::string(what) + " is missing field '" + key + "'");
  }
  return *it;
}

void check_format_version(const ordered_json& doc, std::string_view what, bool mandatory) {
  auto it = doc.find("format_version");
  if (it == doc.end()) {
    if (mandatory) throw FormatError(std::string(what) + " is missing field 'format_version'");
    return;
  }
  if (!it->is_number_integer() || it->get<long long>() != kFormatVersion) {
    throw FormatError(std::string(what) + " has unsupported format_version " + it->dump());
  }
}

int expect_int(const ordered_json& value, std::string_view what) {
  if (!value.is_number_integer()) throw FormatError(std::string(what) + " must be an integer");
  return value.get<int>();
}

ordered_json parse(std::string_view text, std::string_view what) {
  try {
    return ordered_json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string(what) + " is not valid JSON: " + e.what());
  }
}

bool is_blank(std::string_view text) {
  return text.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

// Structural decode only; rule checking is done by the callers so corpus
// loading can aggregate violations across levels.
Level level_from_json_unchecked(const ordered_json& doc) {
  require_object(doc, "level");
  reject_unknown_keys(doc, {"format_version", "width", "height", "cells"}, "level");
  check_format_version(doc, "level", true);
  const int width = expect_int(required(doc, "width", "level"), "level width");
  const int height = expect_int(required(doc, "height", "level"), "level height");
  if (width != kBoardSize || height != kBoardSize) {
    throw FormatError("level dimensions must be 9x9, got width " + std::to_string(width) +
                      " and height " + std::to_string(height));
  }
  const auto& rows = required(doc, "cells", "level");
  if (!rows.is_array() || rows.size() != kBoardSize) {
    throw FormatError("level cells must be an array of 9 rows, got " +
                      std::to_string(rows.is_array() ? rows.size() : 0) + " rows");
  }
  Level level;
  for (int r = 0; r < kBoardSize; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    if (!row.is_array() || row.size() != kBoardSize) {
      throw FormatError("level row " + std::to_string(r) + " must be an array of 9 cells");
    }
    for (int c = 0; c < kBoardSize; ++c) {
      const auto& cell_doc = row[static_cast<std::size_t>(c)];
      const std::string where = "cell (" + std::to_string(r) + "," + std::to_string(c) + ")";
      require_object(cell_doc, where);
      reject_unknown_keys(cell_doc, {"shape", "regular", "special", "block", "jelly", "lock"},
                          where);
      CellState cell;
      for (Layer layer : kAllLayers) {
        const int flag = expect_int(required(cell_doc, layer_name(layer), where),
                                    where + " " + layer_name(layer));
        if (flag != 0 && flag != 1) {
          throw FormatError(where + " flag '" + layer_name(layer) + "' must be 0 or 1");
        }
        cell.set(layer, flag == 1);
      }
      level.at(r, c) = cell;
    }
  }
  return level;
}

}  // namespace

ValidationError::ValidationError(std::vector<LevelViolations> reports)
    : Error(summarize(reports)), reports_(std::move(reports)) {}

ordered_json level_to_json(const Level& level) {
  ordered_json rows = ordered_json::array();
  for (int r = 0; r < kBoardSize; ++r) {
    ordered_json row = ordered_json::array();
    for (int c = 0; c < kBoardSize; ++c) {
      ordered_json cell = ordered_json::object();
      for (Layer layer : kAllLayers) cell[layer_name(layer)] = level.at(r, c).get(layer) ? 1 : 0;
      row.push_back(std::move(cell));
    }
    rows.push_back(std::move(row));
  }
  ordered_json doc = ordered_json::object();
  doc["format_version"] = kFormatVersion;
  doc["width"] = kBoardSize;
  doc["height"] = kBoardSize;
  doc["cells"] = std::move(rows);
  return doc;
}

Level level_from_json(const ordered_json& doc) {
  Level level = level_from_json_unchecked(doc);
  auto violations = validate(level);
  if (!violations.empty()) throw ValidationError({{0, std::move(violations)}});
  return level;
}

std::string encode(const Level& level) { return level_to_json(level).dump() + "\n"; }

Level decode(std::string_view text) { return level_from_json(parse(text, "level file")); }

std::string encode_corpus(const CorpusFile& corpus) {
  std::ostringstream out;
  out << "{\"format_version\":" << kFormatVersion << ",\"levels\":[";
  for (std::size_t i = 0; i < corpus.levels.size(); ++i) {
    out << (i == 0 ? "\n" : ",\n") << level_to_json(corpus.levels[i]).dump();
  }
  out << (corpus.levels.empty() ? "]" : "\n]");
  if (!corpus.meta.empty()) out << ",\"meta\":" << corpus.meta.dump();
  out << "}\n";
  return out.str();
}

CorpusFile decode_corpus(std::string_view text) {
  CorpusFile corpus;
  if (is_blank(text)) return corpus;
  const ordered_json doc = parse(text, "corpus file");
  require_object(doc, "corpus file");
  reject_unknown_keys(doc, {"format_version", "levels", "meta"}, "corpus file");
  check_format_version(doc, "corpus file", false);
  const auto& levels = required(doc, "levels", "corpus file");
  if (!levels.is_array()) throw FormatError("corpus field 'levels' must be an array");
  if (auto it = doc.find("meta"); it != doc.end()) {
    require_object(*it, "corpus meta");
    corpus.meta = *it;
  }

  std::vector<LevelViolations> reports;
  corpus.levels.reserve(levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i) {
    try {
      corpus.levels.push_back(level_from_json_unchecked(levels[i]));
    } catch (const FormatError& e) {
      throw FormatError("level " + std::to_string(i) + ": " + e.what());
    }
    auto violations = validate(corpus.levels.back());
    if (!violations.empty()) reports.push_back({i, std::move(violations)});
  }
  if (!reports.empty()) throw ValidationError(std::move(reports));
  return corpus;
}

std::string encode_tensors(const std::vector<RawLevelTensor>& tensors) {
  std::ostringstream out;
  out << "{\"format_version\":" << kFormatVersion << ",\"tensors\":[";
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    ordered_json rows = ordered_json::array();
    for (int r = 0; r < kBoardSize; ++r) {
      ordered_json row = ordered_json::array();
      for (int c = 0; c < kBoardSize; ++c) {
        ordered_json layers = ordered_json::array();
        for (Layer layer : kAllLayers) layers.push_back(tensors[i].at(r, c, layer));
        row.push_back(std::move(layers));
      }
      rows.push_back(std::move(row));
    }
    out << (i == 0 ? "\n" : ",\n") << rows.dump();
  }
  out << (tensors.empty() ? "]}\n" : "\n]}\n");
  return out.str();
}

std::vector<RawLevelTensor> decode_tensors(std::string_view text) {
  const ordered_json doc = parse(text, "tensor file");
  require_object(doc, "tensor file");
  reject_unknown_keys(doc, {"format_version", "tensors", "meta"}, "tensor file");
  check_format_version(doc, "tensor file", false);
  const auto& tensors = required(doc, "tensors", "tensor file");
  if (!tensors.is_array()) throw FormatError("tensor field 'tensors' must be an array");

  std::vector<RawLevelTensor> out;
  out.reserve(tensors.size());
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    try {
      out.push_back(RawLevelTensor::from_nested(
          tensors[i].get<std::vector<std::vector<std::vector<double>>>>()));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("tensor " + std::to_string(i) + ": expected nested 9x9x6 numbers (" +
                        e.what() + ")");
    } catch (const FormatError& e) {
      throw FormatError("tensor " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot open '" + tmp.string() + "' for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw FormatError("failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw FormatError("cannot move '" + tmp.string() + "' to '" + path.string() + "': " +
                            ec.message());
}

}  // namespace m3gen
