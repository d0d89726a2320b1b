#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "cubetti/dataset.hpp"
#include "cubetti/filtration.hpp"
#include "cubetti/gbt.hpp"

namespace cubetti {

struct ExtractOptions {
  int workers = 0;  // 0 = logical CPU count
  Direction direction = Direction::Sublevel;
};

struct ImageLog {
  std::string path;
  bool ok = false;
  double millis = 0;
  std::string error;
};

// Per-image results in manifest order, independent of worker scheduling.
struct ExtractedFeatures {
  std::vector<std::string> labels;  // successful rows only, manifest order
  std::vector<std::string> splits;
  std::vector<std::vector<int>> rows;
  std::vector<ImageLog> log;  // every manifest entry

  std::vector<ImageLog> failures() const;
};

ExtractedFeatures extract_features(const DatasetManifest& manifest, const ExtractOptions& opts = {});

// Writes the feature CSV plus `<out_csv>.log` with one `path,status,ms`
// line per image. Failed images are skipped and listed.
ExtractedFeatures extract_dataset(const DatasetManifest& manifest, const std::string& out_csv,
                                  const ExtractOptions& opts = {});

struct ExperimentConfig {
  std::string manifest_path;
  std::vector<int> feature_counts{50, 100, 200, 400};
  GbtHyperparams hyperparams;  // seed below wins
  std::uint64_t seed = 0;
  std::string output_dir;
  Direction direction = Direction::Sublevel;
  int workers = 0;

  void validate() const;
};

ExperimentConfig load_experiment_config(const std::string& path);

// For each feature count k: rank features on the training split, keep the
// top k, train, evaluate on the test split. Artifacts (features, ranking,
// per-k predictions, report) land in output_dir; the report is returned.
nlohmann::json run_experiment(const ExperimentConfig& config);

}  // namespace cubetti
