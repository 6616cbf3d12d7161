#pragma once

#include <algorithm>
#include <cstdint>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fusionwalk/grid.hpp"
#include "fusionwalk/tensor_core.hpp"

namespace fusionwalk {

// 0/1 summand-multiplicity table on states 1..p-1: entry (i, j) records
// whether the simple of dimension j is a summand of V_i tensor V_n.
class AdjacencyMatrix {
 public:
  AdjacencyMatrix(Prime p, int n, Grid<std::uint8_t> entries)
      : p_(p), n_(n), entries_(std::move(entries)) {}

  int at(int i, int j) const { return entries_.at(i, j); }
  int size() const { return p_.value() - 1; }
  const Prime& prime() const { return p_; }
  int n() const { return n_; }
  const Grid<std::uint8_t>& entries() const { return entries_; }

 private:
  Prime p_;
  int n_;
  Grid<std::uint8_t> entries_;
};

inline void check_fixed_factor(const Prime& p, int n, const char* what) {
  if (n < 1 || n > p.value() - 1)
    throw std::invalid_argument(std::string(what) + ": n must lie in [1, p-1]");
}

inline AdjacencyMatrix build_adjacency(const Prime& p, int n) {
  p.require_odd("build_adjacency");
  check_fixed_factor(p, n, "build_adjacency");
  const int sz = p.value() - 1;
  Grid<std::uint8_t> g(sz, sz);
  for (int i = 1; i <= sz; ++i)
    for (int j = 1; j <= sz; ++j) g.at(i, j) = divides(p, j, i, n) ? 1 : 0;
  return AdjacencyMatrix(p, n, std::move(g));
}

// Vertex degree, a loop counting once: min{i, p-i, n, p-n}.
inline int degree(const Prime& p, int n, int i) {
  check_fixed_factor(p, n, "degree");
  if (i < 1 || i > p.value() - 1) throw std::invalid_argument("degree: i must lie in [1, p-1]");
  const int pv = p.value();
  return std::min(std::min(i, pv - i), std::min(n, pv - n));
}

// The permutation matrix with ones on the antidiagonal, entry (i, j) being
// [i + j = p]. Self-inverse; multiplying on the left reverses the row
// order, on the right the column order (see reflect_rows / reflect_cols).
inline Grid<std::uint8_t> antidiagonal_matrix(const Prime& p) {
  p.require_odd("antidiagonal_matrix");
  const int sz = p.value() - 1;
  Grid<std::uint8_t> t(sz, sz);
  for (int i = 1; i <= sz; ++i) t.at(i, p.value() - i) = 1;
  return t;
}

// The ordering 1, 3, ..., p-2, p-1, p-3, ..., 4, 2: odd vertices ascending,
// then even vertices descending. Under it the adjacency matrix becomes
// block diagonal (n odd) or block antidiagonal (n even).
inline std::vector<int> reorder_permutation(const Prime& p) {
  p.require_odd("reorder_permutation");
  std::vector<int> order;
  order.reserve(p.value() - 1);
  for (int i = 1; i <= p.value() - 2; i += 2) order.push_back(i);
  for (int i = p.value() - 1; i >= 2; i -= 2) order.push_back(i);
  return order;
}

// The (p-1)/2-square block that carries all the information of the full
// table. r = n for odd n and p-n for even n; the nonzero entries fill the
// rectangle 2|i-j| < r < 2(i+j-1) < 2p-r.
class ReducedMatrix {
 public:
  ReducedMatrix(Prime p, int n, int r, Grid<std::uint8_t> entries)
      : p_(p), n_(n), r_(r), entries_(std::move(entries)) {}

  int at(int i, int j) const { return entries_.at(i, j); }
  int size() const { return (p_.value() - 1) / 2; }
  const Prime& prime() const { return p_; }
  int n() const { return n_; }
  int r() const { return r_; }
  const Grid<std::uint8_t>& entries() const { return entries_; }

 private:
  Prime p_;
  int n_;
  int r_;
  Grid<std::uint8_t> entries_;
};

inline ReducedMatrix build_reduced(const Prime& p, int n) {
  p.require_odd("build_reduced");
  check_fixed_factor(p, n, "build_reduced");
  const auto a = build_adjacency(p, n);
  const int pv = p.value();
  const int half = (pv - 1) / 2;
  const bool odd = n % 2 == 1;
  Grid<std::uint8_t> g(half, half);
  for (int i = 1; i <= half; ++i)
    for (int j = 1; j <= half; ++j)
      g.at(i, j) = odd ? a.at(2 * i - 1, 2 * j - 1) : a.at(2 * i - 1, pv + 1 - 2 * j);
  return ReducedMatrix(p, n, odd ? n : pv - n, std::move(g));
}

// Rebuilds a full (reordered) table from a half-size block: two diagonal
// copies for odd n, two antidiagonal copies for even n, zeros elsewhere.
template <typename T>
Grid<T> parity_block_expand(const Grid<T>& half_block, bool odd_n) {
  const int half = half_block.rows();
  Grid<T> g(2 * half, 2 * half);
  for (int i = 1; i <= half; ++i)
    for (int j = 1; j <= half; ++j) {
      const T& v = half_block.at(i, j);
      if (odd_n) {
        g.at(i, j) = v;
        g.at(half + i, half + j) = v;
      } else {
        g.at(i, half + j) = v;
        g.at(half + i, j) = v;
      }
    }
  return g;
}

inline Grid<std::uint8_t> expand_reduced(const ReducedMatrix& r) {
  return parity_block_expand(r.entries(), r.n() % 2 == 1);
}

struct GraphClassification {
  std::vector<std::vector<int>> components;  // sorted vertices, ordered by least vertex
  bool bipartite = false;
  std::vector<int> loops;  // ascending
};

// Component and bipartiteness analysis by breadth-first search and
// 2-colouring. Results are canonical: vertices sorted within components,
// components ordered by least vertex.
inline GraphClassification classify_adjacency(const AdjacencyMatrix& a) {
  const int sz = a.size();
  GraphClassification out;
  std::vector<int> colour(sz + 1, -1);
  bool two_colourable = true;

  for (int start = 1; start <= sz; ++start) {
    if (colour[start] != -1) continue;
    std::vector<int> comp;
    std::queue<int> q;
    colour[start] = 0;
    q.push(start);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      comp.push_back(u);
      for (int v = 1; v <= sz; ++v) {
        if (!a.at(u, v)) continue;
        if (colour[v] == -1) {
          colour[v] = colour[u] ^ 1;
          q.push(v);
        } else if (colour[v] == colour[u]) {
          two_colourable = false;  // covers loops: u == v shares its colour
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.components.push_back(std::move(comp));
  }
  std::sort(out.components.begin(), out.components.end(),
            [](const auto& x, const auto& y) { return x.front() < y.front(); });

  for (int v = 1; v <= sz; ++v)
    if (a.at(v, v)) out.loops.push_back(v);
  out.bipartite = two_colourable && out.loops.empty();
  return out;
}

inline GraphClassification classify_graph(const Prime& p, int n) {
  p.require_odd("classify_graph");
  if (n == 1 || n == p.value() - 1)
    throw std::invalid_argument(
        "classify_graph: n = 1 and n = p-1 are trivial cases (fixed point / two-cycle)");
  check_fixed_factor(p, n, "classify_graph");
  return classify_adjacency(build_adjacency(p, n));
}

// DOT rendering, undirected, loops as self-edges, each edge once.
inline std::string to_dot(const AdjacencyMatrix& a, bool dim_labels = false) {
  std::ostringstream os;
  os << "graph G {\n";
  os << "  // p = " << a.prime().value() << ", n = " << a.n() << "\n";
  for (int v = 1; v <= a.size(); ++v) {
    os << "  " << v;
    if (dim_labels) os << " [label=\"V" << v << " (dim " << v << ")\"]";
    os << ";\n";
  }
  for (int i = 1; i <= a.size(); ++i)
    for (int j = i; j <= a.size(); ++j)
      if (a.at(i, j)) os << "  " << i << " -- " << j << ";\n";
  os << "}\n";
  return os.str();
}

namespace detail {
inline std::string grid01_to_csv(const Grid<std::uint8_t>& g) {
  std::ostringstream os;
  os << "i\\j";
  for (int j = 1; j <= g.cols(); ++j) os << "," << j;
  os << "\n";
  for (int i = 1; i <= g.rows(); ++i) {
    os << i;
    for (int j = 1; j <= g.cols(); ++j) os << "," << int(g.at(i, j));
    os << "\n";
  }
  return os.str();
}
}  // namespace detail

// CSV dump: header row `i\j`, 0/1 entries, LF line endings, no trailing comma.
inline std::string to_csv(const AdjacencyMatrix& a) { return detail::grid01_to_csv(a.entries()); }
inline std::string to_csv(const ReducedMatrix& r) { return detail::grid01_to_csv(r.entries()); }

}  // namespace fusionwalk
