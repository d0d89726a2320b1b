#pragma once

#include <string>
#include <vector>

#include "cubetti/matrix.hpp"

namespace cubetti {

struct ManifestEntry {
  std::string path;
  std::string label;
  std::string split;  // "train" or "test"
};

// CSV `path,label,split`, one entry per line; an optional literal header
// line is skipped. Paths must be unique, labels non-empty.
struct DatasetManifest {
  std::vector<ManifestEntry> entries;

  bool has_split(const std::string& split) const;
};

DatasetManifest load_manifest(const std::string& path);
void save_manifest(const DatasetManifest& manifest, const std::string& path);

// Feature matrix CSV: header `label,f000,...`, one row per image.
struct FeatureTable {
  std::vector<std::string> labels;
  Matrix rows;
};

void write_feature_csv(const std::string& path, const std::vector<std::string>& labels,
                       const std::vector<std::vector<int>>& rows);
FeatureTable read_feature_csv(const std::string& path);

// Predictions CSV: header `label,pred,p_<class>...`; probabilities are
// printed with round-trip precision so metrics recompute identically.
struct PredictionTable {
  std::vector<std::string> classes;
  std::vector<std::string> y_true;
  std::vector<std::string> y_pred;
  Matrix probs;
};

void write_predictions_csv(const std::string& path, const PredictionTable& table);
PredictionTable read_predictions_csv(const std::string& path);

}  // namespace cubetti
