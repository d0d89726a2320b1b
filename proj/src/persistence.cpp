#include "cubetti/persistence.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <stdexcept>

namespace cubetti {

namespace {

// Cell grid of an R x C pixel image under the top-cell construction:
//   vertices (R+1)(C+1), horizontal edges (R+1)C, vertical edges R(C+1),
//   faces RC. A vertex/edge takes the min activation of its incident pixels.
struct CellGrid {
  int rows, cols;            // pixels
  int vrows, vcols;          // vertices
  int n_hedges, n_vedges;
  const FiltrationField& f;

  explicit CellGrid(const FiltrationField& field)
      : rows(field.rows), cols(field.cols), vrows(field.rows + 1), vcols(field.cols + 1),
        n_hedges((field.rows + 1) * field.cols), n_vedges(field.rows * (field.cols + 1)), f(field) {}

  int n_vertices() const { return vrows * vcols; }
  int n_edges() const { return n_hedges + n_vedges; }
  int n_faces() const { return rows * cols; }

  int pixel(int i, int j) const { return f.activation[std::size_t(i) * cols + j]; }

  int vertex_value(int i, int j) const {
    int v = kInfiniteDeath;
    for (int pi = i - 1; pi <= i; ++pi)
      for (int pj = j - 1; pj <= j; ++pj)
        if (pi >= 0 && pi < rows && pj >= 0 && pj < cols) v = std::min(v, pixel(pi, pj));
    return v;
  }

  // Horizontal edge e = (i, j): vertices (i,j)-(i,j+1); pixels above/below.
  int hedge_value(int i, int j) const {
    int v = kInfiniteDeath;
    if (i - 1 >= 0) v = std::min(v, pixel(i - 1, j));
    if (i < rows) v = std::min(v, pixel(i, j));
    return v;
  }

  // Vertical edge e = (i, j): vertices (i,j)-(i+1,j); pixels left/right.
  int vedge_value(int i, int j) const {
    int v = kInfiniteDeath;
    if (j - 1 >= 0) v = std::min(v, pixel(i, j - 1));
    if (j < cols) v = std::min(v, pixel(i, j));
    return v;
  }

  int edge_value(int e) const {
    if (e < n_hedges) return hedge_value(e / cols, e % cols);
    int r = e - n_hedges;
    return vedge_value(r / vcols, r % vcols);
  }

  void edge_endpoints(int e, int& u, int& v) const {
    if (e < n_hedges) {
      int i = e / cols, j = e % cols;
      u = i * vcols + j;
      v = i * vcols + j + 1;
    } else {
      int r = e - n_hedges;
      int i = r / vcols, j = r % vcols;
      u = i * vcols + j;
      v = (i + 1) * vcols + j;
    }
  }

  // The four boundary edges of face (i, j), as global edge ids.
  void face_edges(int i, int j, int out[4]) const {
    out[0] = i * cols + j;              // top h-edge
    out[1] = (i + 1) * cols + j;        // bottom h-edge
    out[2] = n_hedges + i * vcols + j;      // left v-edge
    out[3] = n_hedges + i * vcols + j + 1;  // right v-edge
  }
};

struct UnionFind {
  std::vector<int> parent;
  std::vector<int> birth;  // valid at roots: min vertex value in the component

  explicit UnionFind(int n) : parent(n), birth(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }

  int find(int x) {
    int root = x;
    while (parent[root] != root) root = parent[root];
    while (parent[x] != root) {
      int next = parent[x];
      parent[x] = root;
      x = next;
    }
    return root;
  }
};

void compute_dim0(const CellGrid& g, PersistenceDiagram& pd0) {
  const int nv = g.n_vertices();
  UnionFind uf(nv);
  int min_value = kInfiniteDeath;
  for (int i = 0; i < g.vrows; ++i)
    for (int j = 0; j < g.vcols; ++j) {
      int v = g.vertex_value(i, j);
      uf.birth[i * g.vcols + j] = v;
      min_value = std::min(min_value, v);
    }

  std::vector<std::pair<int, int>> edges;  // (value, edge id), ascending
  edges.reserve(g.n_edges());
  for (int e = 0; e < g.n_edges(); ++e) edges.emplace_back(g.edge_value(e), e);
  std::sort(edges.begin(), edges.end());

  for (const auto& [value, e] : edges) {
    int u, v;
    g.edge_endpoints(e, u, v);
    int ru = uf.find(u), rv = uf.find(v);
    if (ru == rv) continue;  // cycle edge; handled in dim 1
    // Elder rule: the component with the smaller (birth, root) survives.
    if (std::pair(uf.birth[ru], ru) > std::pair(uf.birth[rv], rv)) std::swap(ru, rv);
    if (uf.birth[rv] < value) pd0.bars.push_back({uf.birth[rv], value});
    uf.parent[rv] = ru;
  }
  pd0.bars.push_back({min_value, kInfiniteDeath});
}

void compute_dim1(const CellGrid& g, PersistenceDiagram& pd1) {
  const int ne = g.n_edges();
  const int nf = g.n_faces();
  if (nf == 0) return;

  // Rank edges and faces by (value, id); reduction works on edge ranks so the
  // column pivot is simply the largest entry.
  std::vector<int> edge_order(ne);
  std::iota(edge_order.begin(), edge_order.end(), 0);
  std::vector<int> edge_values(ne);
  for (int e = 0; e < ne; ++e) edge_values[e] = g.edge_value(e);
  std::sort(edge_order.begin(), edge_order.end(),
            [&](int a, int b) { return std::pair(edge_values[a], a) < std::pair(edge_values[b], b); });
  std::vector<int> edge_rank(ne);
  for (int r = 0; r < ne; ++r) edge_rank[edge_order[r]] = r;

  std::vector<int> face_order(nf);
  std::iota(face_order.begin(), face_order.end(), 0);
  std::sort(face_order.begin(), face_order.end(), [&](int a, int b) {
    return std::pair(g.f.activation[a], a) < std::pair(g.f.activation[b], b);
  });

  std::vector<std::vector<int>> reduced;  // stored reduced columns
  reduced.reserve(nf);
  std::vector<int> pivot_owner(ne, -1);   // edge rank -> index into `reduced`

  std::vector<int> column, scratch;
  for (int face : face_order) {
    int fe[4];
    g.face_edges(face / g.cols, face % g.cols, fe);
    column.assign({edge_rank[fe[0]], edge_rank[fe[1]], edge_rank[fe[2]], edge_rank[fe[3]]});
    std::sort(column.begin(), column.end());

    while (!column.empty()) {
      int pivot = column.back();
      int owner = pivot_owner[pivot];
      if (owner < 0) {
        int birth = edge_values[edge_order[pivot]];
        int death = g.f.activation[face];
        assert(birth <= death);
        if (birth < death) pd1.bars.push_back({birth, death});
        pivot_owner[pivot] = static_cast<int>(reduced.size());
        reduced.push_back(column);
        break;
      }
      // Symmetric difference with the stored column owning this pivot.
      const std::vector<int>& other = reduced[owner];
      scratch.clear();
      std::set_symmetric_difference(column.begin(), column.end(), other.begin(), other.end(),
                                    std::back_inserter(scratch));
      column.swap(scratch);
    }
    assert(!column.empty() && "a 2-cell column cannot reduce to zero on a planar grid");
  }
}

}  // namespace

void sort_bars(PersistenceDiagram& pd) {
  std::sort(pd.bars.begin(), pd.bars.end(),
            [](const Bar& a, const Bar& b) { return std::pair(a.birth, a.death) < std::pair(b.birth, b.death); });
}

DiagramPair compute_pd(const FiltrationField& f) {
  if (f.rows < 1 || f.cols < 1) throw std::invalid_argument("compute_pd: empty field");
  CellGrid grid(f);
  DiagramPair pd;
  pd.dim0.dim = 0;
  pd.dim1.dim = 1;
  compute_dim0(grid, pd.dim0);
  compute_dim1(grid, pd.dim1);
  sort_bars(pd.dim0);
  sort_bars(pd.dim1);
  return pd;
}

int bars_alive_at(const PersistenceDiagram& pd, int t) {
  int alive = 0;
  for (const Bar& bar : pd.bars)
    if (bar.birth <= t && (bar.essential() || t < bar.death)) ++alive;
  return alive;
}

std::string exact_value_string(int scaled) {
  if (scaled % kScale == 0) return std::to_string(scaled / kScale);
  return std::to_string(scaled) + "/3";
}

nlohmann::json diagrams_to_json(const DiagramPair& pd) {
  nlohmann::json arr = nlohmann::json::array();
  for (const PersistenceDiagram* diagram : {&pd.dim0, &pd.dim1}) {
    for (const Bar& bar : diagram->bars) {
      nlohmann::json obj;
      obj["dim"] = diagram->dim;
      obj["birth"] = bar.birth / double(kScale);
      obj["birth_exact"] = exact_value_string(bar.birth);
      if (bar.essential()) {
        obj["death"] = nullptr;
        obj["death_exact"] = nullptr;
      } else {
        obj["death"] = bar.death / double(kScale);
        obj["death_exact"] = exact_value_string(bar.death);
      }
      arr.push_back(std::move(obj));
    }
  }
  return arr;
}

}  // namespace cubetti
