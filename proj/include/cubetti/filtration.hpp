#pragma once

#include <vector>

#include "cubetti/image.hpp"

namespace cubetti {

enum class Direction { Sublevel, Superlevel };

const char* direction_name(Direction d);

// Per-pixel activation values, always consumed in ascending order. Sublevel
// keeps the channel values; superlevel stores 765 - value, so a single
// ascending engine serves both directions.
struct FiltrationField {
  int rows = 0;
  int cols = 0;
  Direction direction = Direction::Sublevel;
  Channel channel = Channel::Gray;
  std::vector<int> activation;  // each in [0, 765]

  int at(int i, int j) const { return activation[static_cast<std::size_t>(i) * cols + j]; }
};

struct BinaryImage {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> active;

  bool at(int i, int j) const { return active[static_cast<std::size_t>(i) * cols + j] != 0; }
  std::size_t active_count() const;
};

FiltrationField build_filtration(const ChannelMatrix& ch, Direction direction);

// Builds a field directly from raw activation values (validated to [0, 765]).
FiltrationField field_from_values(int rows, int cols, std::vector<int> activation,
                                  Direction direction = Direction::Sublevel,
                                  Channel channel = Channel::Gray);

// Pixel active iff activation <= threshold; slices nest as the threshold grows.
BinaryImage binary_slice(const FiltrationField& f, int threshold);

// n evenly spaced scaled thresholds over [0, 765], both endpoints included:
// t_k = round(765 * (k-1) / (n-1)). Strictly increasing, so n <= 766.
std::vector<int> threshold_grid(int n = 50);

}  // namespace cubetti
