#include "cubetti/betti.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace cubetti {

BettiVector betti_vector(const PersistenceDiagram& pd, const std::vector<int>& grid, Channel channel) {
  if (grid.empty()) throw std::invalid_argument("betti_vector: empty threshold grid");
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (grid[k] <= grid[k - 1]) throw std::invalid_argument("betti_vector: grid must be strictly increasing");
  BettiVector out;
  out.channel = channel;
  out.dim = pd.dim;
  out.thresholds = grid;
  out.values.reserve(grid.size());
  for (int t : grid) out.values.push_back(bars_alive_at(pd, t));
  return out;
}

int feature_index(Channel channel, int dim, int slot) {
  if (dim < 0 || dim > 1) throw std::invalid_argument("feature_index: dim must be 0 or 1");
  if (slot < 0 || slot >= kThresholdCount) throw std::invalid_argument("feature_index: slot out of range");
  int c = 0;
  while (kChannelOrder[c] != channel) ++c;
  return c * 2 * kThresholdCount + dim * kThresholdCount + slot;
}

Channel feature_channel(int index) { return kChannelOrder[index / (2 * kThresholdCount)]; }

int feature_dim(int index) { return (index / kThresholdCount) % 2; }

int feature_threshold_slot(int index) { return index % kThresholdCount; }

std::string feature_name(int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "f%03d", index);
  return buf;
}

TopoFeatureVector topo_feature_vector(const RgbImage& img, Direction direction) {
  if (img.rows < 1 || img.cols < 1) throw std::invalid_argument("topo_feature_vector: empty image");
  const std::vector<int> grid = threshold_grid(kThresholdCount);
  TopoFeatureVector out;
  out.values.reserve(kFeatureCount);
  for (Channel channel : kChannelOrder) {
    FiltrationField field = build_filtration(extract_channel(img, channel), direction);
    DiagramPair pd = compute_pd(field);
    for (const PersistenceDiagram* diagram : {&pd.dim0, &pd.dim1})
      for (int t : grid) out.values.push_back(bars_alive_at(*diagram, t));
  }
  return out;
}

double empirical_quantile(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("empirical_quantile: empty sample");
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("empirical_quantile: p outside [0, 1]");
  std::sort(values.begin(), values.end());
  long long m = static_cast<long long>(values.size());
  long long idx = static_cast<long long>(std::ceil(p * double(m))) - 1;
  idx = std::clamp(idx, 0LL, m - 1);
  return values[static_cast<std::size_t>(idx)];
}

BandCurves class_band_curves(const std::vector<std::vector<double>>& features,
                             const std::vector<std::string>& labels, Channel channel, int dim,
                             double band) {
  if (features.empty()) throw std::invalid_argument("class_band_curves: no samples");
  if (features.size() != labels.size())
    throw std::invalid_argument("class_band_curves: labels/features size mismatch");
  if (!(band > 0.0 && band < 1.0)) throw std::invalid_argument("class_band_curves: band outside (0, 1)");
  if (dim < 0 || dim > 1) throw std::invalid_argument("class_band_curves: dim must be 0 or 1");

  const int block = feature_index(channel, dim, 0);
  for (const auto& row : features)
    if (row.size() < static_cast<std::size_t>(block + kThresholdCount))
      throw std::invalid_argument("class_band_curves: feature row too short");

  std::map<std::string, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].empty()) throw std::invalid_argument("class_band_curves: empty class label");
    by_class[labels[i]].push_back(i);
  }

  BandCurves out;
  out.channel = channel;
  out.dim = dim;
  out.band = band;
  out.thresholds = threshold_grid(kThresholdCount);
  const double p_lo = (1.0 - band) / 2.0;
  const double p_hi = (1.0 + band) / 2.0;
  for (const auto& [name, rows] : by_class) {
    out.class_names.push_back(name);
    std::vector<double> lo(kThresholdCount), med(kThresholdCount), hi(kThresholdCount);
    std::vector<double> column(rows.size());
    for (int k = 0; k < kThresholdCount; ++k) {
      for (std::size_t s = 0; s < rows.size(); ++s) column[s] = features[rows[s]][block + k];
      lo[k] = empirical_quantile(column, p_lo);
      med[k] = empirical_quantile(column, 0.5);
      hi[k] = empirical_quantile(column, p_hi);
    }
    out.lower.push_back(std::move(lo));
    out.median.push_back(std::move(med));
    out.upper.push_back(std::move(hi));
  }
  return out;
}

}  // namespace cubetti
