#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "m3gen/level.hpp"

namespace m3gen {

inline constexpr int kFormatVersion = 1;

struct LevelViolations {
  std::size_t level_index = 0;
  std::vector<Violation> violations;
};

/// Decoded data that breaks CellState rules. Carries the full validate()
/// report for every offending level.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<LevelViolations> reports);

  const std::vector<LevelViolations>& reports() const { return reports_; }

 private:
  std::vector<LevelViolations> reports_;
};

nlohmann::ordered_json level_to_json(const Level& level);
/// Throws FormatError on structural problems and ValidationError (index 0)
/// on rule violations.
Level level_from_json(const nlohmann::ordered_json& doc);

/// Canonical single-line encoding. Deterministic byte-for-byte.
std::string encode(const Level& level);
Level decode(std::string_view text);

struct CorpusFile {
  std::vector<Level> levels;
  /// Free-form object; `seed` and `generator` are the conventional keys.
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
};

/// One level per line inside the `levels` array; `meta` is written only
/// when non-empty.
std::string encode_corpus(const CorpusFile& corpus);
/// Validates every level; violations from all levels are aggregated into a
/// single ValidationError.
CorpusFile decode_corpus(std::string_view text);

std::string encode_tensors(const std::vector<RawLevelTensor>& tensors);
std::vector<RawLevelTensor> decode_tensors(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);
/// Writes through a temporary file in the same directory, then renames.
void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace m3gen
