#include "cubetti/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cubetti {

namespace {

std::size_t class_position(const std::vector<std::string>& classes, const std::string& name) {
  for (std::size_t k = 0; k < classes.size(); ++k)
    if (classes[k] == name) return k;
  throw std::invalid_argument("unknown class label '" + name + "'");
}

double safe_ratio(double num, double den) { return den > 0 ? num / den : 0.0; }

}  // namespace

double rank_auc(const std::vector<double>& scores, const std::vector<std::uint8_t>& is_positive) {
  if (scores.size() != is_positive.size()) throw std::invalid_argument("rank_auc: size mismatch");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  double positives = 0, negatives = 0, positive_rank_sum = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    double mid_rank = (double(i + 1) + double(j)) / 2.0;  // 1-based mid-rank for the tie block
    for (std::size_t k = i; k < j; ++k) {
      if (is_positive[order[k]]) {
        positives += 1;
        positive_rank_sum += mid_rank;
      } else {
        negatives += 1;
      }
    }
    i = j;
  }
  if (positives == 0 || negatives == 0)
    throw std::invalid_argument("rank_auc: need both positive and negative samples");
  return (positive_rank_sum - positives * (positives + 1) / 2.0) / (positives * negatives);
}

MetricsReport compute_metrics(const std::vector<std::string>& y_true, const Matrix& y_prob,
                              const std::vector<std::string>& classes,
                              const std::string& positive_class) {
  const std::size_t n = y_true.size();
  if (n == 0) throw std::invalid_argument("compute_metrics: no samples");
  if (y_prob.size() != n) throw std::invalid_argument("compute_metrics: y_true/y_prob size mismatch");
  const std::size_t n_classes = classes.size();
  if (n_classes < 2) throw std::invalid_argument("compute_metrics: need at least 2 classes");
  for (const auto& row : y_prob) {
    if (row.size() != n_classes) throw std::invalid_argument("compute_metrics: probability row width mismatch");
    double sum = 0;
    for (double p : row) {
      if (!(p >= -1e-9 && p <= 1 + 1e-9)) throw std::invalid_argument("compute_metrics: probability outside [0, 1]");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6) throw std::invalid_argument("compute_metrics: probabilities do not sum to 1");
  }

  std::vector<std::size_t> truth(n), pred(n);
  std::vector<std::size_t> support(n_classes, 0);
  for (std::size_t i = 0; i < n; ++i) {
    truth[i] = class_position(classes, y_true[i]);
    ++support[truth[i]];
    std::size_t best = 0;  // ties resolve to the lowest class index
    for (std::size_t k = 1; k < n_classes; ++k)
      if (y_prob[i][k] > y_prob[i][best]) best = k;
    pred[i] = best;
  }
  for (std::size_t k = 0; k < n_classes; ++k)
    if (support[k] == 0)
      throw std::invalid_argument("compute_metrics: class '" + classes[k] +
                                  "' absent from y_true; per-class statistics undefined");

  // Confusion counts.
  std::vector<std::vector<std::size_t>> confusion(n_classes, std::vector<std::size_t>(n_classes, 0));
  std::size_t correct = 0;
  for (std::size_t i = 0; i < n; ++i) {
    ++confusion[truth[i]][pred[i]];
    if (truth[i] == pred[i]) ++correct;
  }

  std::vector<double> per_class_recall(n_classes), per_class_precision(n_classes),
      per_class_specificity(n_classes), per_class_f1(n_classes);
  for (std::size_t k = 0; k < n_classes; ++k) {
    double tp = double(confusion[k][k]);
    double fn = double(support[k]) - tp;
    double fp = 0, tn = 0;
    for (std::size_t c = 0; c < n_classes; ++c) {
      if (c == k) continue;
      fp += double(confusion[c][k]);
      tn += double(support[c]) - double(confusion[c][k]);
    }
    per_class_recall[k] = safe_ratio(tp, tp + fn);
    per_class_precision[k] = safe_ratio(tp, tp + fp);
    per_class_specificity[k] = safe_ratio(tn, tn + fp);
    double pr = per_class_precision[k], rc = per_class_recall[k];
    per_class_f1[k] = (pr + rc) > 0 ? 2 * pr * rc / (pr + rc) : 0.0;
  }

  MetricsReport report;
  report.accuracy = double(correct) / double(n);
  report.balanced_accuracy =
      std::accumulate(per_class_recall.begin(), per_class_recall.end(), 0.0) / double(n_classes);

  if (n_classes == 2) {
    std::size_t pos = positive_class.empty() ? 1 : class_position(classes, positive_class);
    std::size_t neg = 1 - pos;
    report.sensitivity = per_class_recall[pos];
    report.specificity = per_class_recall[neg];
    report.precision = per_class_precision[pos];
    report.recall = per_class_recall[pos];
    report.f1 = per_class_f1[pos];
    std::vector<double> scores(n);
    std::vector<std::uint8_t> is_pos(n);
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = y_prob[i][pos];
      is_pos[i] = truth[i] == pos;
    }
    report.auc = rank_auc(scores, is_pos);
  } else {
    if (!positive_class.empty())
      throw std::invalid_argument("compute_metrics: positive_class applies to binary tasks only");
    report.sensitivity =
        std::accumulate(per_class_recall.begin(), per_class_recall.end(), 0.0) / double(n_classes);
    report.specificity = std::accumulate(per_class_specificity.begin(), per_class_specificity.end(), 0.0) /
                         double(n_classes);
    report.precision = std::accumulate(per_class_precision.begin(), per_class_precision.end(), 0.0) /
                       double(n_classes);
    report.recall = report.sensitivity;
    report.f1 = std::accumulate(per_class_f1.begin(), per_class_f1.end(), 0.0) / double(n_classes);
    double auc_sum = 0;
    std::vector<double> scores(n);
    std::vector<std::uint8_t> is_pos(n);
    for (std::size_t k = 0; k < n_classes; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        scores[i] = y_prob[i][k];
        is_pos[i] = truth[i] == k;
      }
      auc_sum += rank_auc(scores, is_pos);
    }
    report.auc = auc_sum / double(n_classes);
  }
  return report;
}

nlohmann::json metrics_to_json(const MetricsReport& report) {
  return nlohmann::json{{"accuracy", report.accuracy},
                        {"balanced_accuracy", report.balanced_accuracy},
                        {"sensitivity", report.sensitivity},
                        {"specificity", report.specificity},
                        {"auc", report.auc},
                        {"precision", report.precision},
                        {"recall", report.recall},
                        {"f1", report.f1}};
}

}  // namespace cubetti
