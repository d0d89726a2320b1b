#pragma once

#include <vector>

namespace cubetti {

// Row-major sample matrix: rows are samples, columns are features (or class
// probabilities, depending on context).
using Matrix = std::vector<std::vector<double>>;

}  // namespace cubetti
