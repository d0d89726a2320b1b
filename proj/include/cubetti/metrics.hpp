#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "cubetti/matrix.hpp"

namespace cubetti {

struct MetricsReport {
  double accuracy = 0;
  double balanced_accuracy = 0;  // unweighted mean of per-class recall
  double sensitivity = 0;        // binary: recall of the positive class; multiclass: macro recall
  double specificity = 0;        // binary: recall of the negative class; multiclass: macro one-vs-rest
  double auc = 0;                // rank-based (Mann-Whitney); multiclass: macro one-vs-rest
  double precision = 0;          // binary: positive class; multiclass: macro
  double recall = 0;
  double f1 = 0;
};

// y_prob rows follow the order of `classes`. For binary tasks the positive
// class defaults to classes[1]. Every class must appear in y_true.
MetricsReport compute_metrics(const std::vector<std::string>& y_true, const Matrix& y_prob,
                              const std::vector<std::string>& classes,
                              const std::string& positive_class = "");

// Mann-Whitney AUC with mid-rank tie handling.
double rank_auc(const std::vector<double>& scores, const std::vector<std::uint8_t>& is_positive);

nlohmann::json metrics_to_json(const MetricsReport& report);

}  // namespace cubetti
