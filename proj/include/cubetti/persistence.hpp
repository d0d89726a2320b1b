#pragma once

#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "cubetti/filtration.hpp"

namespace cubetti {

// Death value of an essential bar.
inline constexpr int kInfiniteDeath = std::numeric_limits<int>::max();

struct Bar {
  int birth = 0;
  int death = kInfiniteDeath;

  bool essential() const { return death == kInfiniteDeath; }
  friend bool operator==(const Bar& a, const Bar& b) = default;
};

struct PersistenceDiagram {
  int dim = 0;
  std::vector<Bar> bars;
};

struct DiagramPair {
  PersistenceDiagram dim0;
  PersistenceDiagram dim1;
};

// Canonical (birth, death) order, for multiset comparison.
void sort_bars(PersistenceDiagram& pd);

// Persistence of the cubical complex in which every pixel is a closed unit
// square (edges and vertices shared with its 8 neighbours); a vertex or edge
// activates with its earliest incident pixel. Dimension 0 is paired by
// union-find with the elder rule, dimension 1 by column reduction of the
// 2-cell boundary columns.
DiagramPair compute_pd(const FiltrationField& f);

// #{(b, d) in bars : b <= t < d}, with an infinite death above every t.
int bars_alive_at(const PersistenceDiagram& pd, int t);

// Scaled value rendered in unscaled [0, 255] units as an exact string:
// "34" when divisible by 3, otherwise the rational "100/3".
std::string exact_value_string(int scaled);

// JSON array of {dim, birth, death, birth_exact, death_exact}; death is null
// for essential bars; birth/death are floats in unscaled [0, 255] units.
nlohmann::json diagrams_to_json(const DiagramPair& pd);

}  // namespace cubetti
