#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace fusionwalk {

struct SymmetricEigen {
  std::vector<double> values;                // descending
  std::vector<std::vector<double>> vectors;  // vectors[k] pairs with values[k], unit length
};

// Cyclic Jacobi eigensolver for a dense symmetric matrix (row-major, n x n).
// Sweeps rotations over all upper-triangle positions until the off-diagonal
// Frobenius norm drops below `off_tol`; refuses to return un-converged
// output. Plenty at the few-hundred-state sizes this library works with.
inline SymmetricEigen jacobi_eigensolver(std::vector<double> a, int n, double off_tol = 1e-12,
                                         int max_sweeps = 100) {
  if (n < 0 || static_cast<std::size_t>(n) * n != a.size())
    throw std::invalid_argument("jacobi_eigensolver: matrix size mismatch");

  std::vector<double> v(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i) * n + i] = 1.0;

  const auto off_norm = [&] {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double x = a[static_cast<std::size_t>(i) * n + j];
        s += 2.0 * x * x;
      }
    return std::sqrt(s);
  };

  bool converged = n <= 1 || off_norm() < off_tol;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    for (int pi = 0; pi < n - 1; ++pi) {
      for (int qi = pi + 1; qi < n; ++qi) {
        const double apq = a[static_cast<std::size_t>(pi) * n + qi];
        if (apq == 0.0) continue;
        const double app = a[static_cast<std::size_t>(pi) * n + pi];
        const double aqq = a[static_cast<std::size_t>(qi) * n + qi];
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        for (int k = 0; k < n; ++k) {
          const double akp = a[static_cast<std::size_t>(k) * n + pi];
          const double akq = a[static_cast<std::size_t>(k) * n + qi];
          a[static_cast<std::size_t>(k) * n + pi] = c * akp - s * akq;
          a[static_cast<std::size_t>(k) * n + qi] = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a[static_cast<std::size_t>(pi) * n + k];
          const double aqk = a[static_cast<std::size_t>(qi) * n + k];
          a[static_cast<std::size_t>(pi) * n + k] = c * apk - s * aqk;
          a[static_cast<std::size_t>(qi) * n + k] = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v[static_cast<std::size_t>(k) * n + pi];
          const double vkq = v[static_cast<std::size_t>(k) * n + qi];
          v[static_cast<std::size_t>(k) * n + pi] = c * vkp - s * vkq;
          v[static_cast<std::size_t>(k) * n + qi] = s * vkp + c * vkq;
        }
      }
    }
    converged = off_norm() < off_tol;
  }
  if (!converged)
    throw std::runtime_error("jacobi_eigensolver: no convergence within the sweep budget");

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), [&](int x, int y) {
    return a[static_cast<std::size_t>(x) * n + x] > a[static_cast<std::size_t>(y) * n + y];
  });

  SymmetricEigen out;
  out.values.reserve(n);
  out.vectors.reserve(n);
  for (int k : perm) {
    out.values.push_back(a[static_cast<std::size_t>(k) * n + k]);
    std::vector<double> col(n);
    for (int i = 0; i < n; ++i) col[i] = v[static_cast<std::size_t>(i) * n + k];
    out.vectors.push_back(std::move(col));
  }
  return out;
}

}  // namespace fusionwalk
