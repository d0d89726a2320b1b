#include "cubetti/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>
#include <thread>

#include "cubetti/betti.hpp"
#include "cubetti/image.hpp"
#include "cubetti/metrics.hpp"

namespace cubetti {

namespace {

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace

std::vector<ImageLog> ExtractedFeatures::failures() const {
  std::vector<ImageLog> out;
  for (const auto& entry : log)
    if (!entry.ok) out.push_back(entry);
  return out;
}

ExtractedFeatures extract_features(const DatasetManifest& manifest, const ExtractOptions& opts) {
  const std::size_t n = manifest.entries.size();
  if (n == 0) throw std::invalid_argument("extract_features: empty manifest");

  struct Slot {
    bool ok = false;
    std::vector<int> features;
    std::string error;
    double millis = 0;
  };
  std::vector<Slot> slots(n);

  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      auto started = std::chrono::steady_clock::now();
      Slot& slot = slots[i];
      try {
        RgbImage img = load_image_auto(manifest.entries[i].path);
        slot.features = topo_feature_vector(img, opts.direction).values;
        slot.ok = true;
      } catch (const std::exception& e) {
        slot.error = e.what();
      }
      slot.millis =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    }
  };

  int workers = std::min<int>(resolve_workers(opts.workers), static_cast<int>(n));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();

  ExtractedFeatures out;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& entry = manifest.entries[i];
    out.log.push_back({entry.path, slots[i].ok, slots[i].millis, slots[i].error});
    if (slots[i].ok) {
      out.labels.push_back(entry.label);
      out.splits.push_back(entry.split);
      out.rows.push_back(std::move(slots[i].features));
    }
  }
  if (out.rows.empty()) throw std::runtime_error("extract_features: every image failed to process");
  return out;
}

ExtractedFeatures extract_dataset(const DatasetManifest& manifest, const std::string& out_csv,
                                  const ExtractOptions& opts) {
  ExtractedFeatures features = extract_features(manifest, opts);
  write_feature_csv(out_csv, features.labels, features.rows);

  std::string log_path = out_csv + ".log";
  std::ofstream log(log_path, std::ios::binary);
  if (!log) throw std::runtime_error(log_path + ": cannot open file for writing");
  log << "path,status,ms,error\n";
  for (const auto& entry : features.log) {
    char ms[32];
    std::snprintf(ms, sizeof ms, "%.3f", entry.millis);
    log << entry.path << ',' << (entry.ok ? "ok" : "failed") << ',' << ms << ','
        << entry.error << '\n';
  }
  return features;
}

void ExperimentConfig::validate() const {
  if (manifest_path.empty()) throw std::invalid_argument("experiment config: manifest path required");
  if (feature_counts.empty()) throw std::invalid_argument("experiment config: feature_counts must be non-empty");
  for (int k : feature_counts)
    if (k < 1 || k > kFeatureCount)
      throw std::invalid_argument("experiment config: feature count " + std::to_string(k) +
                                  " outside [1, " + std::to_string(kFeatureCount) + "]");
  if (output_dir.empty()) throw std::invalid_argument("experiment config: output_dir required");
  hyperparams.validate();
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": invalid config JSON: " + e.what());
  }

  ExperimentConfig config;
  config.manifest_path = j.at("manifest").get<std::string>();
  if (j.contains("feature_counts")) config.feature_counts = j.at("feature_counts").get<std::vector<int>>();
  if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("output_dir")) config.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("superlevel") && j.at("superlevel").get<bool>())
    config.direction = Direction::Superlevel;
  if (j.contains("workers")) config.workers = j.at("workers").get<int>();
  if (j.contains("hyperparams")) {
    const auto& hp = j.at("hyperparams");
    if (hp.contains("learning_rate")) config.hyperparams.learning_rate = hp.at("learning_rate").get<double>();
    if (hp.contains("max_depth")) config.hyperparams.max_depth = hp.at("max_depth").get<int>();
    if (hp.contains("n_estimators")) config.hyperparams.n_estimators = hp.at("n_estimators").get<int>();
    if (hp.contains("subsample")) config.hyperparams.subsample = hp.at("subsample").get<double>();
    if (hp.contains("colsample_per_tree"))
      config.hyperparams.colsample_per_tree = hp.at("colsample_per_tree").get<double>();
  }
  config.validate();
  return config;
}

nlohmann::json run_experiment(const ExperimentConfig& config) {
  config.validate();
  DatasetManifest manifest = load_manifest(config.manifest_path);
  if (!manifest.has_split("train") || !manifest.has_split("test"))
    throw std::invalid_argument("run_experiment: manifest needs both train and test entries");

  std::filesystem::create_directories(config.output_dir);
  auto artifact = [&](const std::string& name) {
    return (std::filesystem::path(config.output_dir) / name).string();
  };

  ExtractOptions extract_opts;
  extract_opts.workers = config.workers;
  extract_opts.direction = config.direction;
  ExtractedFeatures features = extract_dataset(manifest, artifact("features.csv"), extract_opts);
  if (auto failed = features.failures(); !failed.empty()) {
    std::string msg = "run_experiment: " + std::to_string(failed.size()) + " image(s) failed:";
    for (const auto& f : failed) msg += "\n  " + f.path + ": " + f.error;
    throw std::runtime_error(msg);
  }

  Matrix train_X, test_X;
  std::vector<std::string> train_y, test_y;
  for (std::size_t i = 0; i < features.rows.size(); ++i) {
    std::vector<double> row(features.rows[i].begin(), features.rows[i].end());
    if (features.splits[i] == "train") {
      train_X.push_back(std::move(row));
      train_y.push_back(features.labels[i]);
    } else {
      test_X.push_back(std::move(row));
      test_y.push_back(features.labels[i]);
    }
  }

  GbtHyperparams hp = config.hyperparams;
  hp.seed = config.seed;

  // Rank once from a full-feature model fit on the training split.
  GbtModel ranking_model = train_gbt(train_X, train_y, hp);
  auto ranking = feature_importance(ranking_model);
  {
    std::ofstream rank_out(artifact("ranking.csv"), std::ios::binary);
    if (!rank_out) throw std::runtime_error(artifact("ranking.csv") + ": cannot open file for writing");
    rank_out << "rank,feature,gain\n";
    for (std::size_t r = 0; r < ranking.size(); ++r) {
      char gain[40];
      std::snprintf(gain, sizeof gain, "%.17g", ranking[r].second);
      rank_out << r + 1 << ',' << ranking[r].first << ',' << gain << '\n';
    }
  }

  const bool binary = std::set<std::string>(train_y.begin(), train_y.end()).size() == 2;
  nlohmann::json rows = nlohmann::json::array();
  for (int k : config.feature_counts) {
    if (k > static_cast<int>(train_X[0].size()))
      throw std::invalid_argument("run_experiment: feature count exceeds extracted features");
    SelectedFeatures train_sel = select_top_k(ranking, train_X, k);
    GbtModel model = train_gbt(train_sel.matrix, train_y, hp);
    model.selected_features = train_sel.index_map;
    save_model(model, artifact("model_k" + std::to_string(k) + ".json"));

    Matrix probs = predict_proba(model, test_X);
    std::vector<std::string> preds = predict_labels(model, test_X);
    PredictionTable table{model.classes, test_y, preds, probs};
    std::string preds_name = "preds_k" + std::to_string(k) + ".csv";
    write_predictions_csv(artifact(preds_name), table);

    MetricsReport metrics = compute_metrics(test_y, probs, model.classes);
    nlohmann::json row;
    row["features"] = k;
    if (binary) {
      row["accuracy"] = metrics.accuracy;
      row["sensitivity"] = metrics.sensitivity;
      row["specificity"] = metrics.specificity;
    } else {
      row["balanced_accuracy"] = metrics.balanced_accuracy;
      row["accuracy"] = metrics.accuracy;
      row["auc"] = metrics.auc;
    }
    row["metrics"] = metrics_to_json(metrics);
    row["predictions"] = preds_name;
    rows.push_back(std::move(row));
  }

  nlohmann::json report;
  report["task"] = binary ? "binary" : "multiclass";
  report["classes"] = ranking_model.classes;
  report["seed"] = config.seed;
  report["direction"] = direction_name(config.direction);
  report["columns"] = binary ? nlohmann::json{"features", "accuracy", "sensitivity", "specificity"}
                             : nlohmann::json{"features", "balanced_accuracy", "accuracy", "auc"};
  report["rows"] = std::move(rows);
  report["ranking"] = "ranking.csv";

  std::ofstream report_out(artifact("report.json"), std::ios::binary);
  if (!report_out)
    throw std::runtime_error(artifact("report.json") + ": cannot open file for writing");
  report_out << report.dump(2) << '\n';
  return report;
}

}  // namespace cubetti
