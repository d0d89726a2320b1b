#include "cubetti/filtration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cubetti {

const char* direction_name(Direction d) {
  return d == Direction::Sublevel ? "sublevel" : "superlevel";
}

std::size_t BinaryImage::active_count() const {
  std::size_t n = 0;
  for (auto v : active) n += (v != 0);
  return n;
}

FiltrationField build_filtration(const ChannelMatrix& ch, Direction direction) {
  if (ch.rows < 1 || ch.cols < 1) throw std::invalid_argument("build_filtration: empty channel");
  FiltrationField f;
  f.rows = ch.rows;
  f.cols = ch.cols;
  f.direction = direction;
  f.channel = ch.channel;
  f.activation.resize(ch.values.size());
  for (std::size_t p = 0; p < ch.values.size(); ++p) {
    int v = ch.values[p];
    if (v < 0 || v > kMaxScaledValue) throw std::invalid_argument("build_filtration: channel value out of range");
    f.activation[p] = direction == Direction::Sublevel ? v : kMaxScaledValue - v;
  }
  return f;
}

FiltrationField field_from_values(int rows, int cols, std::vector<int> activation,
                                  Direction direction, Channel channel) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("field_from_values: dimensions must be >= 1");
  if (activation.size() != static_cast<std::size_t>(rows) * cols)
    throw std::invalid_argument("field_from_values: size mismatch");
  for (int v : activation)
    if (v < 0 || v > kMaxScaledValue) throw std::invalid_argument("field_from_values: activation out of range");
  FiltrationField f;
  f.rows = rows;
  f.cols = cols;
  f.direction = direction;
  f.channel = channel;
  f.activation = std::move(activation);
  return f;
}

BinaryImage binary_slice(const FiltrationField& f, int threshold) {
  if (threshold < 0 || threshold > kMaxScaledValue)
    throw std::invalid_argument("binary_slice: threshold out of range [0, 765]");
  BinaryImage b;
  b.rows = f.rows;
  b.cols = f.cols;
  b.active.resize(f.activation.size());
  for (std::size_t p = 0; p < f.activation.size(); ++p)
    b.active[p] = f.activation[p] <= threshold ? 1 : 0;
  return b;
}

std::vector<int> threshold_grid(int n) {
  if (n < 2) throw std::invalid_argument("threshold_grid: need at least 2 thresholds");
  if (n > kMaxScaledValue + 1)
    throw std::invalid_argument("threshold_grid: more thresholds than distinct scaled values");
  std::vector<int> grid(n);
  for (int k = 0; k < n; ++k)
    grid[k] = static_cast<int>(std::llround(double(kMaxScaledValue) * k / (n - 1)));
  for (int k = 1; k < n; ++k)
    if (grid[k] <= grid[k - 1]) throw std::logic_error("threshold_grid: grid not strictly increasing");
  return grid;
}

}  // namespace cubetti
