#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

// Loss functions shared by boosting (leaf fitting uses these exact gradients
// and hessians) and by the finite-difference checks in the test suite.
namespace cubetti {

inline double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

// Negative log-likelihood of label y in {0, 1} under logit `margin`:
// softplus(margin) - y * margin.
inline double logistic_loss(double margin, double y) {
  double softplus = std::max(margin, 0.0) + std::log1p(std::exp(-std::abs(margin)));
  return softplus - y * margin;
}

inline double logistic_gradient(double margin, double y) { return sigmoid(margin) - y; }

inline double logistic_hessian(double margin) {
  double p = sigmoid(margin);
  return p * (1.0 - p);
}

inline void softmax_probs(const std::vector<double>& logits, std::vector<double>& p) {
  p.resize(logits.size());
  double max_logit = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (std::size_t k = 0; k < logits.size(); ++k) {
    p[k] = std::exp(logits[k] - max_logit);
    sum += p[k];
  }
  for (double& v : p) v /= sum;
}

// Cross-entropy -log p_y with the log-sum-exp evaluated stably.
inline double softmax_loss(const std::vector<double>& logits, int y) {
  double max_logit = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double z : logits) sum += std::exp(z - max_logit);
  return max_logit + std::log(sum) - logits[static_cast<std::size_t>(y)];
}

// Diagonal derivatives per logit: g_k = p_k - [y = k], h_k = p_k (1 - p_k).
inline void softmax_gradient_hessian(const std::vector<double>& logits, int y,
                                     std::vector<double>& g, std::vector<double>& h) {
  std::vector<double> p;
  softmax_probs(logits, p);
  g.resize(p.size());
  h.resize(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    g[k] = p[k] - (static_cast<int>(k) == y ? 1.0 : 0.0);
    h[k] = p[k] * (1.0 - p[k]);
  }
}

}  // namespace cubetti
