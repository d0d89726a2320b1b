#include "cubetti/oracle.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace cubetti::oracle {

namespace {

constexpr long long kMaxOraclePixels = 4096;

}  // namespace

int label_components(const BinaryImage& b) {
  const int rows = b.rows, cols = b.cols;
  std::vector<std::uint8_t> seen(b.active.size(), 0);
  std::vector<int> stack;
  int components = 0;
  for (int start = 0; start < rows * cols; ++start) {
    if (!b.active[start] || seen[start]) continue;
    ++components;
    seen[start] = 1;
    stack.assign(1, start);
    while (!stack.empty()) {
      int p = stack.back();
      stack.pop_back();
      int i = p / cols, j = p % cols;
      for (int di = -1; di <= 1; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          int ni = i + di, nj = j + dj;
          if (ni < 0 || ni >= rows || nj < 0 || nj >= cols) continue;
          int q = ni * cols + nj;
          if (b.active[q] && !seen[q]) {
            seen[q] = 1;
            stack.push_back(q);
          }
        }
    }
  }
  return components;
}

CubicalComplexCounts cell_counts(const BinaryImage& b) {
  const int rows = b.rows, cols = b.cols;
  const int vcols = cols + 1;
  std::vector<std::uint8_t> vert((rows + 1) * (cols + 1), 0);
  std::vector<std::uint8_t> hedge((rows + 1) * cols, 0);
  std::vector<std::uint8_t> vedge(rows * (cols + 1), 0);
  CubicalComplexCounts counts;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      if (!b.at(i, j)) continue;
      ++counts.faces;
      vert[i * vcols + j] = vert[i * vcols + j + 1] = 1;
      vert[(i + 1) * vcols + j] = vert[(i + 1) * vcols + j + 1] = 1;
      hedge[i * cols + j] = hedge[(i + 1) * cols + j] = 1;
      vedge[i * vcols + j] = vedge[i * vcols + j + 1] = 1;
    }
  for (auto v : vert) counts.vertices += v;
  for (auto e : hedge) counts.edges += e;
  for (auto e : vedge) counts.edges += e;
  return counts;
}

long long euler_characteristic(const BinaryImage& b) {
  CubicalComplexCounts c = cell_counts(b);
  return c.vertices - c.edges + c.faces;
}

std::pair<int, int> betti_by_counting(const BinaryImage& b) {
  int beta0 = label_components(b);
  long long chi = euler_characteristic(b);
  return {beta0, static_cast<int>(beta0 - chi)};
}

DiagramPair reduce_boundary_matrix(const FiltrationField& f) {
  if (f.rows < 1 || f.cols < 1) throw std::invalid_argument("reduce_boundary_matrix: empty field");
  if (static_cast<long long>(f.rows) * f.cols > kMaxOraclePixels)
    throw std::invalid_argument("reduce_boundary_matrix: complex too large for the dense oracle");

  const int rows = f.rows, cols = f.cols;
  const int vcols = cols + 1;
  const int n_vertices = (rows + 1) * (cols + 1);
  const int n_hedges = (rows + 1) * cols;
  const int n_vedges = rows * (cols + 1);
  const int n_edges = n_hedges + n_vedges;
  const int n_faces = rows * cols;
  const int n_cells = n_vertices + n_edges + n_faces;

  auto pixel = [&](int i, int j) { return f.activation[std::size_t(i) * cols + j]; };
  auto min_incident = [&](int i0, int i1, int j0, int j1) {
    int v = kInfiniteDeath;
    for (int i = i0; i <= i1; ++i)
      for (int j = j0; j <= j1; ++j)
        if (i >= 0 && i < rows && j >= 0 && j < cols) v = std::min(v, pixel(i, j));
    return v;
  };

  // Global cell index: vertices, then horizontal edges, then vertical edges,
  // then faces, each block row-major.
  std::vector<int> value(n_cells);
  std::vector<int> dim(n_cells);
  for (int i = 0; i <= rows; ++i)
    for (int j = 0; j <= cols; ++j) {
      value[i * vcols + j] = min_incident(i - 1, i, j - 1, j);
      dim[i * vcols + j] = 0;
    }
  const int he0 = n_vertices;
  for (int i = 0; i <= rows; ++i)
    for (int j = 0; j < cols; ++j) {
      value[he0 + i * cols + j] = min_incident(i - 1, i, j, j);
      dim[he0 + i * cols + j] = 1;
    }
  const int ve0 = n_vertices + n_hedges;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j <= cols; ++j) {
      value[ve0 + i * vcols + j] = min_incident(i, i, j - 1, j);
      dim[ve0 + i * vcols + j] = 1;
    }
  const int fc0 = n_vertices + n_edges;
  for (int p = 0; p < n_faces; ++p) {
    value[fc0 + p] = f.activation[p];
    dim[fc0 + p] = 2;
  }

  // Per-dimension row-major id for the (value, dimension, id) cell order.
  std::vector<int> within_dim_id(n_cells);
  for (int c = 0; c < n_cells; ++c) {
    if (c < he0) within_dim_id[c] = c;
    else if (c < fc0) within_dim_id[c] = c - he0;  // edges: h-edges then v-edges
    else within_dim_id[c] = c - fc0;
  }

  std::vector<int> order(n_cells);
  for (int c = 0; c < n_cells; ++c) order[c] = c;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::tuple(value[a], dim[a], within_dim_id[a]) < std::tuple(value[b], dim[b], within_dim_id[b]);
  });
  std::vector<int> position(n_cells);
  for (int p = 0; p < n_cells; ++p) position[order[p]] = p;

  auto boundary = [&](int cell) -> std::vector<int> {
    std::vector<int> faces;
    if (dim[cell] == 1) {
      if (cell < ve0) {  // horizontal edge
        int r = cell - he0;
        int i = r / cols, j = r % cols;
        faces = {position[i * vcols + j], position[i * vcols + j + 1]};
      } else {  // vertical edge
        int r = cell - ve0;
        int i = r / vcols, j = r % vcols;
        faces = {position[i * vcols + j], position[(i + 1) * vcols + j]};
      }
    } else if (dim[cell] == 2) {
      int p = cell - fc0;
      int i = p / cols, j = p % cols;
      faces = {position[he0 + i * cols + j], position[he0 + (i + 1) * cols + j],
               position[ve0 + i * vcols + j], position[ve0 + i * vcols + j + 1]};
    }
    std::sort(faces.begin(), faces.end());
    return faces;
  };

  // Left-to-right reduction; columns hold sorted row positions over Z/2.
  std::vector<std::vector<int>> columns(n_cells);
  for (int p = 0; p < n_cells; ++p) columns[p] = boundary(order[p]);

  std::vector<int> pivot_owner(n_cells, -1);
  std::vector<int> paired_with(n_cells, -1);
  std::vector<int> scratch;
  for (int j = 0; j < n_cells; ++j) {
    std::vector<int>& col = columns[j];
    while (!col.empty()) {
      int low = col.back();
      int owner = pivot_owner[low];
      if (owner < 0) {
        pivot_owner[low] = j;
        paired_with[low] = j;
        paired_with[j] = low;
        break;
      }
      scratch.clear();
      std::set_symmetric_difference(col.begin(), col.end(), columns[owner].begin(), columns[owner].end(),
                                    std::back_inserter(scratch));
      col.swap(scratch);
    }
  }

  DiagramPair pd;
  pd.dim0.dim = 0;
  pd.dim1.dim = 1;
  for (int p = 0; p < n_cells; ++p) {
    if (paired_with[p] >= 0) continue;  // paired cells are handled in the pair loop
    // Unpaired creator: essential class (none can occur in dimension 2).
    int cell = order[p];
    Bar bar{value[cell], kInfiniteDeath};
    if (dim[cell] == 0) pd.dim0.bars.push_back(bar);
    else if (dim[cell] == 1) pd.dim1.bars.push_back(bar);
  }
  for (int p = 0; p < n_cells; ++p) {
    int partner_pos = paired_with[p];
    if (partner_pos <= p) continue;  // look at creator -> destroyer pairs once
    int creator = order[p];
    int destroyer = order[partner_pos];
    if (value[creator] == value[destroyer]) continue;  // zero-length bar
    Bar bar{value[creator], value[destroyer]};
    if (dim[creator] == 0) pd.dim0.bars.push_back(bar);
    else if (dim[creator] == 1) pd.dim1.bars.push_back(bar);
  }
  sort_bars(pd.dim0);
  sort_bars(pd.dim1);
  return pd;
}

}  // namespace cubetti::oracle
