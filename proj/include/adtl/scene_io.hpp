#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "adtl/errors.hpp"
#include "adtl/scene_sim.hpp"
#include "adtl/types.hpp"

namespace adtl {

// A record that could not be turned into a valid Scene.
struct SkippedRecord {
  std::string id;        // record id when readable, else "line:<n>"
  std::size_t line = 0;  // 1-based line number, 0 when not file-backed
  ErrorKind kind = ErrorKind::MalformedRecord;
  std::string message;
};

struct LoadResult {
  std::vector<Scene> scenes;
  std::vector<SkippedRecord> skipped;

  std::size_t n_records() const { return scenes.size() + skipped.size(); }
};

// Scene JSONL, one object per line. Blank lines are ignored. Records that
// fail to parse or validate land in `skipped`. load_scenes throws
// FileNotFound when the path cannot be opened.
LoadResult load_scenes(const std::filesystem::path& path);
LoadResult read_scenes(std::istream& in);

// Throws Error(MalformedRecord) naming the offending field path.
Scene scene_from_json(const nlohmann::json& record);
nlohmann::ordered_json scene_to_json(const Scene& scene);

void write_scenes(std::ostream& out, std::span<const Scene> scenes);
// Same records with an extra "label" field ("extended" / "bent").
void write_labeled_scenes(std::ostream& out, std::span<const LabeledScene> scenes);

// Shortest decimal form that parses back to the same double.
std::string format_number(double value);

}  // namespace adtl
