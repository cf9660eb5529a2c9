#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "skelforge/scene.hpp"

namespace skelforge {

struct BatchOptions {
  std::vector<std::filesystem::path> inputs;  // files, or directories scanned for *.json
  std::filesystem::path out_dir = ".";
  bool svg = false;
  std::optional<std::filesystem::path> csv;
  SceneConfig config;
  int bench = 1;  // repetitions; timings are per-stage medians
};

struct BatchRow {
  std::string name;
  std::size_t n_vertices = 0;
  StageTimings timings;
};

struct BatchReport {
  std::vector<BatchRow> rows;
  std::vector<std::string> failures;  // "<file>: <code>: <message>"
  int exit_code() const { return failures.empty() ? 0 : 1; }
};

inline constexpr const char* kCsvHeader =
    "name,n_vertices,t_polygon,t_sskel,t_clean,t_boundeddp,t_connect,t_refine,t_total_ms";

// Polygon files (a JSON array of [x, y], either orientation) are validated as
// simple polygons and run through the per-part pipeline plus refinement;
// scene documents are loaded and re-assembled.
// Writes <stem>.skeleton.json (and <stem>.svg) into out_dir and appends one
// CSV row per successful input. Failures are reported on `diag`.
BatchReport run_batch(const BatchOptions& options, std::ostream& diag);

// Polygon black, skeleton red, joints as discs of their radius.
std::string skeleton_svg(const Skeleton& skel, const std::vector<SimplePolygon>& polygons);

}  // namespace skelforge
