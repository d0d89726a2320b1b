#include "cubetti/gbt.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "cubetti/losses.hpp"
#include "cubetti/rng.hpp"

namespace cubetti {

namespace {

constexpr double kMinSplitGain = 1e-12;

struct SplitChoice {
  double gain = 0.0;
  int feature = -1;
  int position = 0;  // rows routed left
  double threshold = 0.0;
};

double leaf_score(double g_sum, double h_sum) { return g_sum * g_sum / (h_sum + kLeafRidge); }

// Greedy exact-split tree over (gradient, hessian) targets. `rows` indexes
// into X; g/h are indexed by sample id.
class TreeBuilder {
 public:
  TreeBuilder(const Matrix& X, const std::vector<double>& g, const std::vector<double>& h,
              const std::vector<int>& features, const GbtHyperparams& hp, std::vector<double>& importances)
      : X_(X), g_(g), h_(h), features_(features), hp_(hp), importances_(importances) {}

  RegressionTree build(std::vector<int> rows) {
    tree_.nodes.clear();
    grow(std::move(rows), 0);
    return std::move(tree_);
  }

 private:
  int grow(std::vector<int> rows, int depth) {
    double g_sum = 0.0, h_sum = 0.0;
    for (int r : rows) {
      g_sum += g_[r];
      h_sum += h_[r];
    }

    SplitChoice best;
    if (depth < hp_.max_depth && rows.size() >= 2) best = find_split(rows, g_sum, h_sum);

    int at = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    if (best.feature < 0) {
      tree_.nodes[at].value = -g_sum / (h_sum + kLeafRidge) * hp_.learning_rate;
      return at;
    }

    importances_[best.feature] += best.gain;
    std::vector<int> left_rows, right_rows;
    left_rows.reserve(best.position);
    right_rows.reserve(rows.size() - best.position);
    for (int r : rows)
      (X_[r][best.feature] < best.threshold ? left_rows : right_rows).push_back(r);
    rows.clear();
    rows.shrink_to_fit();

    tree_.nodes[at].feature = best.feature;
    tree_.nodes[at].threshold = best.threshold;
    int left = grow(std::move(left_rows), depth + 1);
    int right = grow(std::move(right_rows), depth + 1);
    tree_.nodes[at].left = left;
    tree_.nodes[at].right = right;
    return at;
  }

  SplitChoice find_split(const std::vector<int>& rows, double g_sum, double h_sum) {
    SplitChoice best;
    const double parent_score = leaf_score(g_sum, h_sum);
    std::vector<std::pair<double, int>> ordered(rows.size());
    for (int feature : features_) {
      for (std::size_t i = 0; i < rows.size(); ++i)
        ordered[i] = {X_[rows[i]][feature], rows[i]};
      std::sort(ordered.begin(), ordered.end());

      double gl = 0.0, hl = 0.0;
      for (std::size_t p = 0; p + 1 < ordered.size(); ++p) {
        gl += g_[ordered[p].second];
        hl += h_[ordered[p].second];
        if (ordered[p].first == ordered[p + 1].first) continue;
        double gain =
            0.5 * (leaf_score(gl, hl) + leaf_score(g_sum - gl, h_sum - hl) - parent_score);
        // Ties keep the first candidate; the scan runs in ascending
        // (feature, position) order, so ties resolve to the lowest pair.
        if (gain > kMinSplitGain && gain > best.gain) {
          best.gain = gain;
          best.feature = feature;
          best.position = static_cast<int>(p) + 1;
          best.threshold = (ordered[p].first + ordered[p + 1].first) / 2.0;
        }
      }
    }
    return best;
  }

  const Matrix& X_;
  const std::vector<double>& g_;
  const std::vector<double>& h_;
  const std::vector<int>& features_;
  const GbtHyperparams& hp_;
  std::vector<double>& importances_;
  RegressionTree tree_;
};

void validate_matrix(const Matrix& X, std::size_t expected_rows) {
  if (X.empty()) throw std::invalid_argument("empty feature matrix");
  if (expected_rows && X.size() != expected_rows)
    throw std::invalid_argument("feature matrix row count does not match labels");
  std::size_t width = X[0].size();
  if (width == 0) throw std::invalid_argument("feature matrix has no columns");
  for (const auto& row : X) {
    if (row.size() != width) throw std::invalid_argument("ragged feature matrix");
    for (double v : row)
      if (!std::isfinite(v)) throw std::invalid_argument("feature matrix contains non-finite values");
  }
}

std::vector<double> project_row(const GbtModel& m, const std::vector<double>& row) {
  std::vector<double> out(m.selected_features.size());
  for (std::size_t i = 0; i < m.selected_features.size(); ++i) {
    std::size_t src = static_cast<std::size_t>(m.selected_features[i]);
    if (src >= row.size()) throw std::invalid_argument("predict: row too short for feature projection");
    out[i] = row[src];
  }
  return out;
}

nlohmann::json node_to_json(const RegressionTree& tree, int at) {
  const TreeNode& node = tree.nodes[at];
  if (node.leaf()) return nlohmann::json{{"leaf", node.value}};
  return nlohmann::json{{"feature", node.feature},
                        {"threshold", node.threshold},
                        {"left", node_to_json(tree, node.left)},
                        {"right", node_to_json(tree, node.right)}};
}

int node_from_json(const nlohmann::json& j, RegressionTree& tree) {
  int at = static_cast<int>(tree.nodes.size());
  tree.nodes.emplace_back();
  if (j.contains("leaf")) {
    tree.nodes[at].value = j.at("leaf").get<double>();
    return at;
  }
  tree.nodes[at].feature = j.at("feature").get<int>();
  tree.nodes[at].threshold = j.at("threshold").get<double>();
  int left = node_from_json(j.at("left"), tree);
  int right = node_from_json(j.at("right"), tree);
  tree.nodes[at].left = left;
  tree.nodes[at].right = right;
  return at;
}

}  // namespace

void GbtHyperparams::validate() const {
  if (!(learning_rate > 0)) throw std::invalid_argument("learning_rate must be > 0");
  if (max_depth < 1) throw std::invalid_argument("max_depth must be >= 1");
  if (n_estimators < 0) throw std::invalid_argument("n_estimators must be >= 0");
  if (!(subsample > 0 && subsample <= 1)) throw std::invalid_argument("subsample must be in (0, 1]");
  if (!(colsample_per_tree > 0 && colsample_per_tree <= 1))
    throw std::invalid_argument("colsample_per_tree must be in (0, 1]");
}

GbtModel train_gbt(const Matrix& X, const std::vector<std::string>& y, const GbtHyperparams& hp) {
  hp.validate();
  validate_matrix(X, y.size());
  const int n = static_cast<int>(X.size());
  const int n_features = static_cast<int>(X[0].size());

  std::set<std::string> class_set(y.begin(), y.end());
  if (class_set.size() < 2) throw std::invalid_argument("train_gbt: need at least 2 classes");

  GbtModel model;
  model.classes.assign(class_set.begin(), class_set.end());
  model.n_features = n_features;
  model.params = hp;
  model.importances.assign(n_features, 0.0);

  std::map<std::string, int> class_index;
  for (std::size_t k = 0; k < model.classes.size(); ++k) class_index[model.classes[k]] = static_cast<int>(k);
  std::vector<int> yi(n);
  std::vector<int> class_count(model.classes.size(), 0);
  for (int i = 0; i < n; ++i) {
    yi[i] = class_index.at(y[i]);
    ++class_count[yi[i]];
  }
  for (std::size_t k = 0; k < class_count.size(); ++k)
    if (class_count[k] < 2)
      throw std::invalid_argument("train_gbt: class '" + model.classes[k] + "' has fewer than 2 samples");

  const int heads = model.heads();
  model.base_score.assign(heads, 0.0);

  Matrix margins(n, std::vector<double>(heads, 0.0));
  std::vector<double> g(n), h(n);
  Matrix probs;  // multiclass per-round snapshot
  Rng rng(hp.seed);

  auto mean_loss = [&]() {
    double total = 0.0;
    for (int i = 0; i < n; ++i)
      total += heads == 1 ? logistic_loss(margins[i][0], yi[i]) : softmax_loss(margins[i], yi[i]);
    return total / n;
  };
  model.training_loss.push_back(mean_loss());

  const int n_sampled_rows = std::max(1, static_cast<int>(std::floor(hp.subsample * n)));
  const int n_sampled_cols = std::max(1, static_cast<int>(std::floor(hp.colsample_per_tree * n_features)));
  std::vector<int> all_rows(n), all_features(n_features);
  for (int i = 0; i < n; ++i) all_rows[i] = i;
  for (int f = 0; f < n_features; ++f) all_features[f] = f;

  for (int round = 0; round < hp.n_estimators; ++round) {
    std::vector<int> rows =
        hp.subsample < 1.0 ? rng.sample_without_replacement(n, n_sampled_rows) : all_rows;

    if (heads > 1) {
      probs.resize(n);
      for (int i = 0; i < n; ++i) softmax_probs(margins[i], probs[i]);
    }

    for (int head = 0; head < heads; ++head) {
      std::vector<int> features = hp.colsample_per_tree < 1.0
                                      ? rng.sample_without_replacement(n_features, n_sampled_cols)
                                      : all_features;
      if (heads == 1) {
        for (int i = 0; i < n; ++i) {
          double p = sigmoid(margins[i][0]);
          g[i] = p - yi[i];
          h[i] = p * (1.0 - p);
        }
      } else {
        for (int i = 0; i < n; ++i) {
          double p = probs[i][head];
          g[i] = p - (yi[i] == head ? 1.0 : 0.0);
          h[i] = p * (1.0 - p);
        }
      }

      TreeBuilder builder(X, g, h, features, hp, model.importances);
      RegressionTree tree = builder.build(rows);
      for (int i = 0; i < n; ++i) margins[i][head] += tree.predict(X[i]);
      model.trees.push_back(std::move(tree));
    }
    model.training_loss.push_back(mean_loss());
  }
  return model;
}

Matrix predict_proba(const GbtModel& m, const Matrix& X) {
  if (X.empty()) throw std::invalid_argument("predict_proba: empty matrix");
  const int heads = m.heads();
  const int n_classes = static_cast<int>(m.classes.size());
  Matrix out;
  out.reserve(X.size());
  std::vector<double> logits(heads);
  for (const auto& raw : X) {
    const std::vector<double>* row = &raw;
    std::vector<double> projected;
    if (!m.selected_features.empty()) {
      projected = project_row(m, raw);
      row = &projected;
    } else if (static_cast<int>(raw.size()) != m.n_features) {
      throw std::invalid_argument("predict_proba: expected " + std::to_string(m.n_features) +
                                  " features, got " + std::to_string(raw.size()));
    }

    logits = m.base_score;
    for (std::size_t t = 0; t < m.trees.size(); ++t)
      logits[t % heads] += m.trees[t].predict(*row);

    std::vector<double> p(n_classes);
    if (heads == 1) {
      double p1 = sigmoid(logits[0]);
      p[0] = 1.0 - p1;
      p[1] = p1;
    } else {
      softmax_probs(logits, p);
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<std::string> predict_labels(const GbtModel& m, const Matrix& X) {
  Matrix probs = predict_proba(m, X);
  std::vector<std::string> out;
  out.reserve(probs.size());
  for (const auto& p : probs) {
    std::size_t best = 0;  // ties resolve to the lowest class index
    for (std::size_t k = 1; k < p.size(); ++k)
      if (p[k] > p[best]) best = k;
    out.push_back(m.classes[best]);
  }
  return out;
}

std::vector<std::pair<int, double>> feature_importance(const GbtModel& m) {
  std::vector<std::pair<int, double>> ranking;
  ranking.reserve(m.importances.size());
  for (std::size_t f = 0; f < m.importances.size(); ++f)
    ranking.emplace_back(static_cast<int>(f), m.importances[f]);
  std::sort(ranking.begin(), ranking.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return ranking;
}

SelectedFeatures select_top_k(const std::vector<std::pair<int, double>>& ranking, const Matrix& X,
                              int k) {
  if (X.empty()) throw std::invalid_argument("select_top_k: empty matrix");
  const int width = static_cast<int>(X[0].size());
  if (k < 1 || k > width || k > static_cast<int>(ranking.size()))
    throw std::invalid_argument("select_top_k: k out of range");
  SelectedFeatures out;
  out.index_map.reserve(k);
  for (int i = 0; i < k; ++i) {
    int f = ranking[i].first;
    if (f < 0 || f >= width) throw std::invalid_argument("select_top_k: ranking index out of range");
    out.index_map.push_back(f);
  }
  out.matrix.reserve(X.size());
  for (const auto& row : X) {
    std::vector<double> reduced(k);
    for (int i = 0; i < k; ++i) reduced[i] = row[out.index_map[i]];
    out.matrix.push_back(std::move(reduced));
  }
  return out;
}

nlohmann::json model_to_json(const GbtModel& m) {
  nlohmann::json j;
  j["format"] = "cubetti-gbt-v1";
  j["classes"] = m.classes;
  j["n_features"] = m.n_features;
  j["base_score"] = m.base_score;
  j["hyperparams"] = {{"learning_rate", m.params.learning_rate},
                      {"max_depth", m.params.max_depth},
                      {"n_estimators", m.params.n_estimators},
                      {"subsample", m.params.subsample},
                      {"colsample_per_tree", m.params.colsample_per_tree},
                      {"seed", m.params.seed}};
  j["selected_features"] = m.selected_features.empty() ? nlohmann::json(nullptr)
                                                       : nlohmann::json(m.selected_features);
  j["importances"] = m.importances;
  nlohmann::json trees = nlohmann::json::array();
  const int heads = m.heads();
  for (std::size_t t = 0; t < m.trees.size(); ++t) {
    trees.push_back({{"head", static_cast<int>(t % heads)}, {"root", node_to_json(m.trees[t], 0)}});
  }
  j["trees"] = std::move(trees);
  return j;
}

GbtModel model_from_json(const nlohmann::json& j) {
  if (!j.contains("format") || j.at("format") != "cubetti-gbt-v1")
    throw std::runtime_error("model_from_json: unrecognized model format");
  GbtModel m;
  m.classes = j.at("classes").get<std::vector<std::string>>();
  m.n_features = j.at("n_features").get<int>();
  m.base_score = j.at("base_score").get<std::vector<double>>();
  const auto& hp = j.at("hyperparams");
  m.params.learning_rate = hp.at("learning_rate").get<double>();
  m.params.max_depth = hp.at("max_depth").get<int>();
  m.params.n_estimators = hp.at("n_estimators").get<int>();
  m.params.subsample = hp.at("subsample").get<double>();
  m.params.colsample_per_tree = hp.at("colsample_per_tree").get<double>();
  m.params.seed = hp.at("seed").get<std::uint64_t>();
  if (!j.at("selected_features").is_null())
    m.selected_features = j.at("selected_features").get<std::vector<int>>();
  m.importances = j.at("importances").get<std::vector<double>>();
  for (const auto& tj : j.at("trees")) {
    RegressionTree tree;
    node_from_json(tj.at("root"), tree);
    m.trees.push_back(std::move(tree));
  }
  return m;
}

void save_model(const GbtModel& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  out << model_to_json(m).dump(2) << '\n';
  if (!out) throw std::runtime_error(path + ": write failed");
}

GbtModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": invalid model JSON: " + e.what());
  }
  return model_from_json(j);
}

}  // namespace cubetti
