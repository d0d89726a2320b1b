#pragma once

#include <array>
#include <string>
#include <vector>

#include "cubetti/filtration.hpp"
#include "cubetti/image.hpp"
#include "cubetti/persistence.hpp"

namespace cubetti {

inline constexpr int kThresholdCount = 50;
inline constexpr std::array<Channel, 4> kChannelOrder{Channel::Red, Channel::Green, Channel::Blue,
                                                      Channel::Gray};
// 4 channels x 2 dimensions x 50 thresholds, laid out as
// [R b0, R b1, G b0, G b1, B b0, B b1, Gray b0, Gray b1].
inline constexpr int kFeatureCount = 400;

struct BettiVector {
  Channel channel = Channel::Gray;
  int dim = 0;
  std::vector<int> thresholds;
  std::vector<int> values;  // values[k] = bars alive at thresholds[k]
};

BettiVector betti_vector(const PersistenceDiagram& pd, const std::vector<int>& grid,
                         Channel channel = Channel::Gray);

struct TopoFeatureVector {
  std::vector<int> values;  // length kFeatureCount
};

TopoFeatureVector topo_feature_vector(const RgbImage& img, Direction direction = Direction::Sublevel);

// Fixed-layout index helpers.
int feature_index(Channel channel, int dim, int slot);
Channel feature_channel(int index);
int feature_dim(int index);
int feature_threshold_slot(int index);
std::string feature_name(int index);  // e.g. "f137"

// Inverse empirical CDF ("lower interpolation"): the ceil(p*m)-th smallest,
// clamped to the first element for p = 0.
double empirical_quantile(std::vector<double> values, double p);

struct BandCurves {
  Channel channel = Channel::Gray;
  int dim = 0;
  double band = 0.40;
  std::vector<int> thresholds;
  std::vector<std::string> class_names;               // sorted
  std::vector<std::vector<double>> lower;             // per class, per threshold
  std::vector<std::vector<double>> median;
  std::vector<std::vector<double>> upper;
};

// Per-class median and [(1-band)/2, (1+band)/2] quantile curves of the
// (channel, dim) block of each feature row.
BandCurves class_band_curves(const std::vector<std::vector<double>>& features,
                             const std::vector<std::string>& labels, Channel channel, int dim,
                             double band = 0.40);

}  // namespace cubetti
