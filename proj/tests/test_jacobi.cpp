#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "fusionwalk/jacobi.hpp"
#include "fusionwalk/rng.hpp"

using namespace fusionwalk;

TEST_CASE("diagonal and tiny matrices", "[jacobi]") {
  SECTION("empty") {
    const auto e = jacobi_eigensolver({}, 0);
    CHECK(e.values.empty());
  }

  SECTION("1x1") {
    const auto e = jacobi_eigensolver({3.5}, 1);
    REQUIRE(e.values.size() == 1);
    CHECK(e.values[0] == Catch::Approx(3.5));
  }

  SECTION("already diagonal") {
    const auto e = jacobi_eigensolver({2, 0, 0, 0, -1, 0, 0, 0, 5}, 3);
    CHECK(e.values[0] == Catch::Approx(5));
    CHECK(e.values[1] == Catch::Approx(2));
    CHECK(e.values[2] == Catch::Approx(-1));
  }

  SECTION("2x2 with known closed form") {
    // [[0, 1], [1, 0]] has eigenvalues +-1
    const auto e = jacobi_eigensolver({0, 1, 1, 0}, 2);
    CHECK(e.values[0] == Catch::Approx(1.0));
    CHECK(e.values[1] == Catch::Approx(-1.0));
  }

  SECTION("size mismatch") {
    CHECK_THROWS_AS(jacobi_eigensolver({1, 2, 3}, 2), std::invalid_argument);
  }
}

TEST_CASE("random symmetric matrices: residuals, trace, orthogonality", "[jacobi]") {
  Xoshiro256StarStar rng(20240811);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + static_cast<int>(rng.next() % 14);
    std::vector<double> a(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const double x = (static_cast<double>(rng.next53()) / 9007199254740992.0) * 2.0 - 1.0;
        a[static_cast<std::size_t>(i) * n + j] = x;
        a[static_cast<std::size_t>(j) * n + i] = x;
      }

    const auto e = jacobi_eigensolver(a, n);
    REQUIRE(static_cast<int>(e.values.size()) == n);

    // eigenvalue sum matches the trace, squares match the Frobenius norm
    double trace = 0.0, frob = 0.0;
    for (int i = 0; i < n; ++i) trace += a[static_cast<std::size_t>(i) * n + i];
    for (double x : a) frob += x * x;
    double sum = 0.0, sum_sq = 0.0;
    for (double v : e.values) {
      sum += v;
      sum_sq += v * v;
    }
    CHECK(sum == Catch::Approx(trace).margin(1e-9));
    CHECK(sum_sq == Catch::Approx(frob).margin(1e-9));

    // residuals ||Av - lambda v||_inf and orthonormality
    for (int k = 0; k < n; ++k) {
      const auto& v = e.vectors[k];
      double norm = 0.0;
      for (int i = 0; i < n; ++i) {
        double image = 0.0;
        for (int j = 0; j < n; ++j) image += a[static_cast<std::size_t>(i) * n + j] * v[j];
        REQUIRE(std::abs(image - e.values[k] * v[i]) < 1e-8);
        norm += v[i] * v[i];
      }
      CHECK(norm == Catch::Approx(1.0).margin(1e-10));
      for (int k2 = k + 1; k2 < n; ++k2) {
        double dot = 0.0;
        for (int i = 0; i < n; ++i) dot += v[i] * e.vectors[k2][i];
        REQUIRE(std::abs(dot) < 1e-9);
      }
    }

    // descending order
    for (std::size_t k = 1; k < e.values.size(); ++k) REQUIRE(e.values[k - 1] >= e.values[k]);
  }
}
