#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cubetti/matrix.hpp"

namespace cubetti {

struct GbtHyperparams {
  double learning_rate = 0.05;
  int max_depth = 5;
  int n_estimators = 300;
  double subsample = 0.9;
  double colsample_per_tree = 0.9;
  std::uint64_t seed = 0;

  void validate() const;
};

// Ridge added to hessian sums in leaf values and split gains.
inline constexpr double kLeafRidge = 1e-9;

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf weight, learning rate already applied

  bool leaf() const { return feature < 0; }
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // root at index 0

  double predict(const std::vector<double>& row) const {
    int at = 0;
    while (!nodes[at].leaf()) at = row[nodes[at].feature] < nodes[at].threshold ? nodes[at].left : nodes[at].right;
    return nodes[at].value;
  }
};

struct GbtModel {
  std::vector<std::string> classes;  // sorted; probability column order
  int n_features = 0;
  GbtHyperparams params;
  std::vector<double> base_score;       // initial logits, one per head
  std::vector<RegressionTree> trees;    // round-major; multiclass: heads() trees per round
  std::vector<double> importances;      // total split gain per feature
  std::vector<double> training_loss;    // mean loss after each round (not serialized)
  std::vector<int> selected_features;   // original column indices; empty = identity

  int heads() const { return classes.size() <= 2 ? 1 : static_cast<int>(classes.size()); }
};

// Gradient-boosted trees: logistic loss for two classes, softmax with one
// tree per class per round otherwise. Exact greedy splits on raw values,
// Newton leaf weights, per-round row subsampling and per-tree feature
// subsampling driven by the seed.
GbtModel train_gbt(const Matrix& X, const std::vector<std::string>& y, const GbtHyperparams& hp);

// n x n_classes probabilities; rows sum to 1.
Matrix predict_proba(const GbtModel& m, const Matrix& X);
std::vector<std::string> predict_labels(const GbtModel& m, const Matrix& X);

// All feature indices with their total split gain, sorted by descending gain
// (ties by ascending index).
std::vector<std::pair<int, double>> feature_importance(const GbtModel& m);

struct SelectedFeatures {
  Matrix matrix;
  std::vector<int> index_map;  // reduced column -> original column
};

SelectedFeatures select_top_k(const std::vector<std::pair<int, double>>& ranking, const Matrix& X,
                              int k);

nlohmann::json model_to_json(const GbtModel& m);
GbtModel model_from_json(const nlohmann::json& j);
void save_model(const GbtModel& m, const std::string& path);
GbtModel load_model(const std::string& path);

}  // namespace cubetti
