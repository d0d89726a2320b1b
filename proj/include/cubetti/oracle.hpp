#pragma once

#include <utility>

#include "cubetti/filtration.hpp"
#include "cubetti/persistence.hpp"

// Brute-force oracles: simple, obviously-correct reference computations used
// to validate the persistence engine (and exposed behind the CLI --oracle
// flag for cross-checks).
namespace cubetti::oracle {

struct CubicalComplexCounts {
  long long vertices = 0;
  long long edges = 0;
  long long faces = 0;
};

// Connected components of active pixels under 8-connectivity (diagonally
// adjacent closed squares share a vertex).
int label_components(const BinaryImage& b);

// Distinct vertices/edges/faces in the closure of the active squares.
CubicalComplexCounts cell_counts(const BinaryImage& b);

// V - E + F over the closure of the active squares.
long long euler_characteristic(const BinaryImage& b);

// (beta0, beta1) with beta1 = beta0 - chi; valid for 2-complexes, which
// carry no 2-cycles.
std::pair<int, int> betti_by_counting(const BinaryImage& b);

// Standard left-to-right column reduction over Z/2 of the full cubical
// boundary matrix, cells ordered by (activation, dimension, row-major id).
// Dense and deliberately simple; guarded to rows*cols <= 4096.
DiagramPair reduce_boundary_matrix(const FiltrationField& f);

}  // namespace cubetti::oracle
