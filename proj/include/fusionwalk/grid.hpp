#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace fusionwalk {

// Dense row-major matrix with 1-based indexing. All public interfaces in
// this library index states and vertices from 1; the 0-based storage never
// leaks out.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int rows, int cols, T fill = T{})
      : rows_(rows), cols_(cols), cells_(static_cast<std::size_t>(rows) * cols, fill) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("negative grid dimensions");
  }

  T& at(int i, int j) { return cells_[index(i, j)]; }
  const T& at(int i, int j) const { return cells_[index(i, j)]; }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t index(int i, int j) const {
    if (i < 1 || i > rows_ || j < 1 || j > cols_)
      throw std::out_of_range("grid index out of range");
    return static_cast<std::size_t>(i - 1) * cols_ + (j - 1);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> cells_;
};

// Reverses the row order: the effect of left-multiplying by the
// antidiagonal permutation matrix.
template <typename T>
Grid<T> reflect_rows(const Grid<T>& g) {
  Grid<T> out(g.rows(), g.cols());
  for (int i = 1; i <= g.rows(); ++i)
    for (int j = 1; j <= g.cols(); ++j) out.at(i, j) = g.at(g.rows() + 1 - i, j);
  return out;
}

// Reverses the column order: right-multiplication by the antidiagonal.
template <typename T>
Grid<T> reflect_cols(const Grid<T>& g) {
  Grid<T> out(g.rows(), g.cols());
  for (int i = 1; i <= g.rows(); ++i)
    for (int j = 1; j <= g.cols(); ++j) out.at(i, j) = g.at(i, g.cols() + 1 - j);
  return out;
}

// Conjugation by the antidiagonal: rotates the matrix by 180 degrees.
template <typename T>
Grid<T> rotate_180(const Grid<T>& g) {
  return reflect_rows(reflect_cols(g));
}

// Simultaneous row/column relabelling of a square matrix:
// out[i][j] = g[order[i-1]][order[j-1]].
template <typename T>
Grid<T> permute(const Grid<T>& g, const std::vector<int>& order) {
  if (g.rows() != g.cols() || static_cast<int>(order.size()) != g.rows())
    throw std::invalid_argument("permute requires a square grid and a full ordering");
  Grid<T> out(g.rows(), g.cols());
  for (int i = 1; i <= g.rows(); ++i)
    for (int j = 1; j <= g.cols(); ++j) out.at(i, j) = g.at(order[i - 1], order[j - 1]);
  return out;
}

}  // namespace fusionwalk
