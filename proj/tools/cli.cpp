// cubetti command line: topological feature extraction from images and the
// boosted-tree classification pipeline on top of it.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "cubetti/betti.hpp"
#include "cubetti/dataset.hpp"
#include "cubetti/gbt.hpp"
#include "cubetti/image.hpp"
#include "cubetti/metrics.hpp"
#include "cubetti/oracle.hpp"
#include "cubetti/persistence.hpp"
#include "cubetti/pipeline.hpp"
#include "cubetti/svg.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitPartialFailure = 2;

void write_json_file(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error(path + ": write failed");
}

void add_hyperparam_flags(CLI::App* cmd, cubetti::GbtHyperparams& hp) {
  cmd->add_option("--learning-rate", hp.learning_rate, "Boosting learning rate");
  cmd->add_option("--max-depth", hp.max_depth, "Maximum tree depth");
  cmd->add_option("--rounds", hp.n_estimators, "Number of boosting rounds");
  cmd->add_option("--subsample", hp.subsample, "Per-round row subsampling fraction");
  cmd->add_option("--colsample", hp.colsample_per_tree, "Per-tree feature subsampling fraction");
  cmd->add_option("--seed", hp.seed, "RNG seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topological image fingerprints: cubical persistence, Betti curves and a boosted-tree classifier"};
  app.require_subcommand(1);

  // extract
  auto* extract = app.add_subcommand("extract", "Extract feature vectors for a dataset manifest");
  std::string extract_manifest, extract_out;
  int extract_workers = 0;
  bool extract_superlevel = false;
  extract->add_option("manifest", extract_manifest, "CSV manifest `path,label,split`")->required();
  extract->add_option("-o,--output", extract_out, "Output feature CSV")->required();
  extract->add_option("--workers", extract_workers, "Worker threads (default: logical CPUs)");
  extract->add_flag("--superlevel", extract_superlevel, "Use the superlevel filtration");

  // diagram
  auto* diagram = app.add_subcommand("diagram", "Persistence diagrams of one image channel");
  std::string diagram_image, diagram_out, diagram_channel = "gray";
  bool diagram_oracle = false, diagram_superlevel = false;
  diagram->add_option("image", diagram_image, "Image file (PGM/PPM/CSV)")->required();
  diagram->add_option("-o,--output", diagram_out, "Output diagram JSON")->required();
  diagram->add_option("--channel", diagram_channel, "red, green, blue or gray (default gray)");
  diagram->add_flag("--oracle", diagram_oracle, "Use the brute-force boundary-matrix reduction");
  diagram->add_flag("--superlevel", diagram_superlevel, "Use the superlevel filtration");

  // vectorize
  auto* vectorize = app.add_subcommand("vectorize", "400-dimensional feature vector of one image");
  std::string vectorize_image, vectorize_out;
  bool vectorize_superlevel = false;
  vectorize->add_option("image", vectorize_image, "Image file (PGM/PPM/CSV)")->required();
  vectorize->add_option("-o,--output", vectorize_out, "Output CSV")->required();
  vectorize->add_flag("--superlevel", vectorize_superlevel, "Use the superlevel filtration");

  // train
  auto* train = app.add_subcommand("train", "Train the boosted-tree classifier on a feature CSV");
  std::string train_features, train_out;
  int train_k = 0;
  cubetti::GbtHyperparams train_hp;
  train->add_option("features", train_features, "Feature CSV from `extract`")->required();
  train->add_option("-o,--output", train_out, "Output model JSON")->required();
  train->add_option("--k", train_k, "Keep only the k most important features (0 = all)");
  add_hyperparam_flags(train, train_hp);

  // predict
  auto* predict = app.add_subcommand("predict", "Predict class probabilities for a feature CSV");
  std::string predict_model, predict_features, predict_out;
  predict->add_option("model", predict_model, "Model JSON from `train`")->required();
  predict->add_option("features", predict_features, "Feature CSV")->required();
  predict->add_option("-o,--output", predict_out, "Output predictions CSV")->required();

  // metrics
  auto* metrics_cmd = app.add_subcommand("metrics", "Diagnostic metrics from a predictions CSV");
  std::string metrics_preds, metrics_out, metrics_positive;
  metrics_cmd->add_option("predictions", metrics_preds, "Predictions CSV from `predict`")->required();
  metrics_cmd->add_option("-o,--output", metrics_out, "Output report JSON")->required();
  metrics_cmd->add_option("--positive", metrics_positive,
                          "Positive class for binary metrics (default: second class)");

  // plot
  auto* plot = app.add_subcommand("plot", "Per-class median Betti curves with quantile bands (SVG)");
  std::string plot_features, plot_out, plot_channel = "gray";
  int plot_dim = 0;
  double plot_band = 0.40;
  plot->add_option("features", plot_features, "Feature CSV from `extract`")->required();
  plot->add_option("-o,--output", plot_out, "Output SVG")->required();
  plot->add_option("--channel", plot_channel, "red, green, blue or gray (default gray)");
  plot->add_option("--dim", plot_dim, "Homology dimension, 0 or 1 (default 0)");
  plot->add_option("--band", plot_band, "Band width fraction (default 0.40)");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Feature-count sweep from a config JSON");
  std::string experiment_config, experiment_out;
  experiment->add_option("config", experiment_config, "Experiment config JSON")->required();
  experiment->add_option("-o,--output", experiment_out, "Also write the report JSON here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*extract) {
      cubetti::DatasetManifest manifest = cubetti::load_manifest(extract_manifest);
      cubetti::ExtractOptions opts;
      opts.workers = extract_workers;
      opts.direction =
          extract_superlevel ? cubetti::Direction::Superlevel : cubetti::Direction::Sublevel;
      cubetti::ExtractedFeatures features = cubetti::extract_dataset(manifest, extract_out, opts);
      auto failed = features.failures();
      std::cerr << "extracted " << features.rows.size() << "/" << manifest.entries.size()
                << " images -> " << extract_out << "\n";
      if (!failed.empty()) {
        for (const auto& f : failed) std::cerr << "failed: " << f.path << ": " << f.error << "\n";
        return kExitPartialFailure;
      }
      return kExitOk;
    }

    if (*diagram) {
      cubetti::RgbImage img = cubetti::load_image_auto(diagram_image);
      cubetti::Channel channel = cubetti::channel_from_name(diagram_channel);
      cubetti::Direction direction =
          diagram_superlevel ? cubetti::Direction::Superlevel : cubetti::Direction::Sublevel;
      cubetti::FiltrationField field =
          cubetti::build_filtration(cubetti::extract_channel(img, channel), direction);
      cubetti::DiagramPair pd = diagram_oracle ? cubetti::oracle::reduce_boundary_matrix(field)
                                               : cubetti::compute_pd(field);
      write_json_file(cubetti::diagrams_to_json(pd), diagram_out);
      return kExitOk;
    }

    if (*vectorize) {
      cubetti::RgbImage img = cubetti::load_image_auto(vectorize_image);
      cubetti::Direction direction =
          vectorize_superlevel ? cubetti::Direction::Superlevel : cubetti::Direction::Sublevel;
      cubetti::TopoFeatureVector vec = cubetti::topo_feature_vector(img, direction);
      cubetti::write_feature_csv(vectorize_out, {vectorize_image}, {vec.values});
      return kExitOk;
    }

    if (*train) {
      cubetti::FeatureTable table = cubetti::read_feature_csv(train_features);
      cubetti::GbtModel model = cubetti::train_gbt(table.rows, table.labels, train_hp);
      if (train_k > 0 && train_k < static_cast<int>(table.rows[0].size())) {
        auto ranking = cubetti::feature_importance(model);
        cubetti::SelectedFeatures selected = cubetti::select_top_k(ranking, table.rows, train_k);
        model = cubetti::train_gbt(selected.matrix, table.labels, train_hp);
        model.selected_features = selected.index_map;
      }
      cubetti::save_model(model, train_out);
      return kExitOk;
    }

    if (*predict) {
      cubetti::GbtModel model = cubetti::load_model(predict_model);
      cubetti::FeatureTable table = cubetti::read_feature_csv(predict_features);
      cubetti::Matrix probs = cubetti::predict_proba(model, table.rows);
      std::vector<std::string> preds = cubetti::predict_labels(model, table.rows);
      cubetti::write_predictions_csv(predict_out, {model.classes, table.labels, preds, probs});
      return kExitOk;
    }

    if (*metrics_cmd) {
      cubetti::PredictionTable table = cubetti::read_predictions_csv(metrics_preds);
      std::string positive = metrics_positive;
      if (positive.empty() && table.classes.size() == 2) positive = table.classes[1];
      cubetti::MetricsReport report = cubetti::compute_metrics(
          table.y_true, table.probs, table.classes, table.classes.size() == 2 ? positive : "");
      write_json_file(cubetti::metrics_to_json(report), metrics_out);
      return kExitOk;
    }

    if (*plot) {
      cubetti::FeatureTable table = cubetti::read_feature_csv(plot_features);
      cubetti::BandCurves curves =
          cubetti::class_band_curves(table.rows, table.labels, cubetti::channel_from_name(plot_channel),
                                     plot_dim, plot_band);
      cubetti::emit_betti_svg(curves, plot_out);
      return kExitOk;
    }

    if (*experiment) {
      cubetti::ExperimentConfig config = cubetti::load_experiment_config(experiment_config);
      nlohmann::json report = cubetti::run_experiment(config);
      if (!experiment_out.empty()) write_json_file(report, experiment_out);
      std::cout << report.dump(2) << '\n';
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
