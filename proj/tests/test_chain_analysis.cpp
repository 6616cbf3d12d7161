#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <vector>

#include "fusionwalk/chain_analysis.hpp"
#include "fusionwalk/json_report.hpp"

using namespace fusionwalk;

namespace {

const std::vector<int> kChainPrimes{5, 7, 11, 13, 17, 19, 23, 29, 31};

Rational rat(long long n, long long d) { return Rational(n, d); }

void require_detailed_balance(const Prime& p, int n, const WeightFunction& w) {
  const auto q = build_transition(p, n, w);
  const auto pi = whole_space_stationary(p, n, w);
  for (int i = 1; i <= q.size(); ++i)
    for (int j = 1; j <= q.size(); ++j)
      REQUIRE(pi.probs[i - 1] * q.at(i, j) == pi.probs[j - 1] * q.at(j, i));
}

}  // namespace

TEST_CASE("weight functions", "[chain]") {
  const Prime p(7);
  const auto u = WeightFunction::uniform(p);
  CHECK(u.name() == "uniform");
  CHECK(u.symmetric());
  for (int i = 1; i <= 6; ++i) CHECK(u.at(i) == 1);

  const auto d = WeightFunction::dimension(p);
  CHECK(d.name() == "dimension");
  CHECK_FALSE(d.symmetric());
  CHECK(d.at(5) == 5);

  CHECK_THROWS_AS(WeightFunction::custom(p, {rat(1, 2), rat(1, 2)}), std::invalid_argument);
  CHECK_THROWS_AS(
      WeightFunction::custom(p, {rat(1, 1), rat(1, 1), rat(0, 1), rat(1, 1), rat(1, 1), rat(1, 1)}),
      std::invalid_argument);

  const auto r1 = seeded_random_weights(p, 99);
  const auto r2 = seeded_random_weights(p, 99);
  for (int i = 1; i <= 6; ++i) {
    CHECK(r1.at(i) == r2.at(i));
    CHECK(r1.at(i) > 0);
  }
}

TEST_CASE("weights files", "[chain]") {
  const Prime p(5);
  std::istringstream in("1 1/2\n2 3\n# comment\n3 3/4\n4 7/2\n");
  const auto w = parse_weights_file(in, p);
  CHECK(w.at(1) == rat(1, 2));
  CHECK(w.at(2) == 3);
  CHECK(w.at(3) == rat(3, 4));
  CHECK(w.at(4) == rat(7, 2));

  std::istringstream missing("1 1\n2 1\n3 1\n");
  CHECK_THROWS_AS(parse_weights_file(missing, p), std::invalid_argument);
  std::istringstream dup("1 1\n1 2\n2 1\n3 1\n4 1\n");
  CHECK_THROWS_AS(parse_weights_file(dup, p), std::invalid_argument);
  std::istringstream negative("1 -1\n2 1\n3 1\n4 1\n");
  CHECK_THROWS_AS(parse_weights_file(negative, p), std::invalid_argument);
}

TEST_CASE("transition matrix of the reflecting path", "[chain]") {
  const Prime p(7);
  const auto q = build_transition(p, 2, WeightFunction::uniform(p));

  // boundary rows are forced moves
  CHECK(q.at(1, 2) == 1);
  CHECK(q.at(6, 5) == 1);
  for (int i = 2; i <= 5; ++i) {
    CHECK(q.at(i, i - 1) == rat(1, 2));
    CHECK(q.at(i, i + 1) == rat(1, 2));
  }
  Rational off_path = 0;
  for (int i = 1; i <= 6; ++i)
    for (int j = 1; j <= 6; ++j)
      if (std::abs(i - j) != 1) off_path += q.at(i, j);
  CHECK(off_path == 0);
}

TEST_CASE("transition matrix respects destination weights", "[chain]") {
  const Prime p(7);
  const auto q = build_transition(p, 2, WeightFunction::dimension(p));
  CHECK(q.at(2, 1) == rat(1, 4));
  CHECK(q.at(2, 3) == rat(3, 4));

  // closed form j/(i*n) on rows with i + n <= p
  for (int i = 2; i <= 5; ++i)
    for (int j = 1; j <= 6; ++j)
      if (q.at(i, j) != 0 && i + 2 <= 7) CHECK(q.at(i, j) == Rational(j, 2 * i));
}

TEST_CASE("transition matrices are row-stochastic with graph support", "[chain]") {
  for (int pv : kChainPrimes) {
    const Prime p(pv);
    for (int n = 2; n <= pv - 2; ++n) {
      const auto a = build_adjacency(p, n);
      for (const auto& w : {WeightFunction::uniform(p), WeightFunction::dimension(p)}) {
        const auto q = build_transition(p, n, w);
        for (int i = 1; i <= q.size(); ++i) {
          Rational row = 0;
          for (int j = 1; j <= q.size(); ++j) {
            row += q.at(i, j);
            REQUIRE((q.at(i, j) != 0) == (a.at(i, j) == 1));
          }
          REQUIRE(row == 1);
        }
      }
    }
  }
}

TEST_CASE("trivial chains and bad inputs are refused", "[chain]") {
  const Prime p(7);
  const auto w = WeightFunction::uniform(p);
  CHECK_THROWS_WITH(build_transition(p, 1, w), Catch::Matchers::ContainsSubstring("trivial"));
  CHECK_THROWS_WITH(build_transition(p, 6, w), Catch::Matchers::ContainsSubstring("trivial"));
  CHECK_THROWS_AS(build_transition(p, 0, w), std::invalid_argument);
  const Prime p3(3);
  CHECK_THROWS_AS(build_transition(p3, 2, WeightFunction::uniform(p3)), std::invalid_argument);
}

TEST_CASE("stationary distributions", "[chain]") {
  SECTION("uniform weights on the reflecting path") {
    for (int pv : {5, 7, 11, 13, 31}) {
      const Prime p(pv);
      const auto dists = stationary(p, 2, WeightFunction::uniform(p));
      REQUIRE(dists.size() == 1);
      CHECK(dists[0].component == Support::All);
      CHECK(dists[0].probs.front() == Rational(1, 2 * (pv - 2)));
      CHECK(dists[0].probs.back() == Rational(1, 2 * (pv - 2)));
      for (int i = 2; i <= pv - 2; ++i)
        CHECK(dists[0].probs[i - 1] == Rational(2, 2 * (pv - 2)));
    }
  }

  SECTION("p = 7, n = 3, uniform: two component distributions") {
    const Prime p(7);
    const auto dists = stationary(p, 3, WeightFunction::uniform(p));
    REQUIRE(dists.size() == 2);
    REQUIRE(dists[0].component == Support::Odds);
    CHECK(dists[0].probs[0] == rat(1, 6));
    CHECK(dists[0].probs[2] == rat(1, 2));
    CHECK(dists[0].probs[4] == rat(1, 3));
    CHECK(dists[0].probs[1] == 0);
    REQUIRE(dists[1].component == Support::Evens);
    Rational even_total = 0;
    for (const auto& x : dists[1].probs) even_total += x;
    CHECK(even_total == 1);
  }

  SECTION("p = 7, n = 2, dimension weights") {
    const Prime p(7);
    const auto pi = whole_space_stationary(p, 2, WeightFunction::dimension(p));
    const std::vector<long long> numerators{1, 4, 9, 16, 25, 15};
    for (int i = 1; i <= 6; ++i) CHECK(pi.probs[i - 1] == Rational(numerators[i - 1], 70));
    require_detailed_balance(p, 2, WeightFunction::dimension(p));
  }
}

TEST_CASE("detailed balance holds exactly for every weighting tried", "[chain]") {
  for (int pv : {5, 7, 11, 13}) {
    const Prime p(pv);
    for (int n = 2; n <= pv - 2; ++n) {
      require_detailed_balance(p, n, WeightFunction::uniform(p));
      require_detailed_balance(p, n, WeightFunction::dimension(p));
      for (int k = 0; k < 20; ++k)
        require_detailed_balance(p, n, seeded_random_weights(p, 1000 * pv + 10 * n + k));
    }
  }
}

TEST_CASE("stationarity is exact", "[chain]") {
  for (int pv : {5, 7, 13}) {
    const Prime p(pv);
    for (int n = 2; n <= pv - 2; ++n) {
      const auto w = seeded_random_weights(p, 7 * pv + n);
      const auto q = build_transition(p, n, w);
      const auto pi = whole_space_stationary(p, n, w);
      for (int j = 1; j <= q.size(); ++j) {
        Rational image = 0;
        for (int i = 1; i <= q.size(); ++i) image += pi.probs[i - 1] * q.at(i, j);
        REQUIRE(image == pi.probs[j - 1]);
      }
    }
  }
}

TEST_CASE("uniform closed form", "[chain]") {
  const Prime p(7);
  CHECK(uniform_stationary_closed_form(p, 2, 3) == rat(1, 5));
  CHECK(uniform_stationary_closed_form(p, 3, 3) == rat(1, 4));

  for (int pv : kChainPrimes) {
    const Prime q(pv);
    for (int n = 2; n <= pv - 2; ++n) {
      const auto pi = whole_space_stationary(q, n, WeightFunction::uniform(q));
      Rational odd_total = 0, even_total = 0;
      for (int i = 1; i <= pv - 1; ++i) {
        REQUIRE(pi.probs[i - 1] == uniform_stationary_closed_form(q, n, i));
        (i % 2 == 1 ? odd_total : even_total) += pi.probs[i - 1];
      }
      REQUIRE(odd_total == rat(1, 2));
      REQUIRE(even_total == rat(1, 2));

      if (n % 2 == 1) {
        // the closed form is the equal mixture of the two component laws
        for (const auto& d : stationary(q, n, WeightFunction::uniform(q)))
          for (int i = 1; i <= pv - 1; ++i)
            if (d.probs[i - 1] != 0)
              REQUIRE(uniform_stationary_closed_form(q, n, i) == d.probs[i - 1] / 2);
      }
    }
  }
}

TEST_CASE("dimension closed form", "[chain]") {
  const Prime p(7);
  CHECK(dimension_stationary_closed_form(p, 2, 1) == rat(1, 70));
  CHECK(dimension_stationary_closed_form(p, 2, 6) == rat(3, 14));

  for (int pv : kChainPrimes) {
    const Prime q(pv);
    for (int n = 2; n <= pv - 2; ++n) {
      const auto pi = whole_space_stationary(q, n, WeightFunction::dimension(q));
      Rational total = 0;
      for (int i = 1; i <= pv - 1; ++i) {
        REQUIRE(pi.probs[i - 1] == dimension_stationary_closed_form(q, n, i));
        total += pi.probs[i - 1];
      }
      REQUIRE(total == 1);
    }
  }
}

TEST_CASE("chain classification", "[chain]") {
  CHECK(classify_chain(Prime(7), 3) == ChainClassification::TwoComponentsAperiodic);
  CHECK(classify_chain(Prime(7), 4) == ChainClassification::IrreduciblePeriod2);
  CHECK(classify_chain(Prime(11), 6) == ChainClassification::IrreduciblePeriod2);
  CHECK_THROWS_AS(classify_chain(Prime(7), 1), std::invalid_argument);
}

TEST_CASE("rotational structure for symmetric weightings", "[chain]") {
  for (int pv : {5, 7, 11, 13}) {
    const Prime p(pv);
    const auto order = reorder_permutation(p);
    for (int n = 2; n <= pv - 2; ++n) {
      const auto w = WeightFunction::uniform(p);
      const auto q = build_transition(p, n, w).entries();
      REQUIRE(rotate_180(q) == q);
      const auto other = build_transition(p, pv - n, w).entries();
      REQUIRE(q == reflect_rows(other));
      REQUIRE(q == reflect_cols(other));
      REQUIRE(permute(q, order) ==
              parity_block_expand(reduced_transition(p, n, w), n % 2 == 1));
    }
  }
}

TEST_CASE("lazy transition", "[chain]") {
  const Prime p(7);
  const auto q = build_transition(p, 4, WeightFunction::uniform(p));
  const auto lazy = lazy_transition(q);
  for (int i = 1; i <= q.size(); ++i) {
    Rational row = 0;
    for (int j = 1; j <= q.size(); ++j) {
      row += lazy.at(i, j);
      if (i == j)
        REQUIRE(lazy.at(i, j) == q.at(i, j) / 2 + rat(1, 2));
      else
        REQUIRE(lazy.at(i, j) == q.at(i, j) / 2);
    }
    REQUIRE(row == 1);
  }
}

TEST_CASE("spectra", "[chain]") {
  const Prime p(7);

  SECTION("p = 7, n = 3, uniform: reduced walk spectrum and doubling") {
    const auto reduced = reduced_spectrum(p, 3, WeightFunction::uniform(p));
    REQUIRE(reduced.size() == 3);
    CHECK(reduced[0] == Catch::Approx(1.0).margin(1e-9));
    CHECK(reduced[1] == Catch::Approx(1.0 / 3.0).margin(1e-9));
    CHECK(reduced[2] == Catch::Approx(-0.5).margin(1e-9));

    const auto full = spectrum(p, 3, WeightFunction::uniform(p));
    REQUIRE(full.size() == 6);
    const std::vector<double> expected{1.0, 1.0, 1.0 / 3.0, 1.0 / 3.0, -0.5, -0.5};
    for (int k = 0; k < 6; ++k) CHECK(full[k] == Catch::Approx(expected[k]).margin(1e-9));
  }

  SECTION("p = 7, n = 4, uniform: signed pairs") {
    const auto full = spectrum(p, 4, WeightFunction::uniform(p));
    const std::vector<double> expected{1.0, 0.5, 1.0 / 3.0, -1.0 / 3.0, -0.5, -1.0};
    REQUIRE(full.size() == 6);
    for (int k = 0; k < 6; ++k) CHECK(full[k] == Catch::Approx(expected[k]).margin(1e-9));
  }

  SECTION("even n: spectrum closed under negation for arbitrary weights") {
    for (int pv : {5, 7, 11, 13, 17}) {
      const Prime q(pv);
      for (int n = 2; n <= pv - 2; n += 2) {
        for (int k = 0; k < 3; ++k) {
          const auto vals = spectrum(q, n, seeded_random_weights(q, 55 * pv + 5 * n + k));
          for (std::size_t t = 0; t < vals.size(); ++t)
            REQUIRE(std::abs(vals[t] + vals[vals.size() - 1 - t]) < 1e-9);
        }
      }
    }
  }

  SECTION("odd n, symmetric weights: every eigenvalue has even multiplicity") {
    for (int pv : {5, 7, 11, 13}) {
      const Prime q(pv);
      for (int n = 3; n <= pv - 2; n += 2) {
        auto vals = spectrum(q, n, WeightFunction::uniform(q));
        REQUIRE(vals.size() % 2 == 0);
        for (std::size_t t = 0; t + 1 < vals.size(); t += 2)
          REQUIRE(std::abs(vals[t] - vals[t + 1]) < 1e-9);
      }
    }
  }

  SECTION("eigenvalues stay inside [-1, 1]") {
    for (int pv : {5, 7, 11}) {
      const Prime q(pv);
      for (int n = 2; n <= pv - 2; ++n)
        for (double v : spectrum(q, n, WeightFunction::dimension(q))) {
          REQUIRE(v <= 1.0 + 1e-9);
          REQUIRE(v >= -1.0 - 1e-9);
        }
    }
  }
}

TEST_CASE("convergence rate", "[chain]") {
  const Prime p(7);
  CHECK(lambda_star(p, 3, WeightFunction::uniform(p)) == Catch::Approx(0.5).margin(1e-9));
  CHECK(lambda_star(p, 4, WeightFunction::uniform(p)) == Catch::Approx(0.5).margin(1e-9));

  // consistent with the full spectrum after dropping the two unit eigenvalues
  for (int pv : {5, 7, 11, 13}) {
    const Prime q(pv);
    for (int n = 2; n <= pv - 2; ++n) {
      const auto w = WeightFunction::uniform(q);
      CHECK(lambda_star(q, n, w) ==
            Catch::Approx(lambda_star_from_spectrum(spectrum(q, n, w))).margin(1e-9));
    }
  }
}

TEST_CASE("mixing-time bound", "[chain]") {
  SECTION("closed form at the middle fixed factors") {
    for (int pv : kChainPrimes) {
      const Prime p(pv);
      for (int n : {(pv - 1) / 2, (pv + 1) / 2}) {
        for (double eps : {0.01, 0.1, 0.25}) {
          const double bound = mixing_bound(p, n, WeightFunction::uniform(p), eps);
          const double closed = 2.0 * std::log((pv * pv - 1.0) / (4.0 * eps));
          REQUIRE(bound == Catch::Approx(closed).margin(1e-9));
        }
      }
    }
  }

  SECTION("monotone in eps and positive as eps approaches 1") {
    const Prime p(7);
    const auto w = WeightFunction::uniform(p);
    const double tight = mixing_bound(p, 3, w, 0.01);
    const double loose = mixing_bound(p, 3, w, 0.9);
    CHECK(loose > 0.0);
    CHECK(tight > loose);
  }

  SECTION("asymmetric weightings are rejected with guidance") {
    const Prime p(7);
    CHECK_THROWS_WITH(mixing_bound(p, 3, WeightFunction::dimension(p), 0.1),
                      Catch::Matchers::ContainsSubstring("simulator"));
  }

  SECTION("eps out of range") {
    const Prime p(7);
    CHECK_THROWS_AS(mixing_bound(p, 3, WeightFunction::uniform(p), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(mixing_bound(p, 3, WeightFunction::uniform(p), 1.0), std::invalid_argument);
  }
}

TEST_CASE("chain report and its JSON form", "[chain]") {
  const Prime p(7);

  SECTION("uniform weights, n = 3") {
    const auto r = analyze_chain(p, 3, WeightFunction::uniform(p), 0.01);
    CHECK(r.classification == ChainClassification::TwoComponentsAperiodic);
    REQUIRE(r.components.size() == 2);
    REQUIRE(r.stationary_distributions.size() == 2);
    CHECK(r.lambda_star == Catch::Approx(0.5).margin(1e-9));
    REQUIRE(r.mixing_bound.has_value());
    CHECK(*r.mixing_bound == Catch::Approx(2.0 * std::log(1200.0)).margin(1e-9));

    const auto j = to_json(r);
    CHECK(j["classification"] == "TwoComponentsAperiodic");
    CHECK(j["stationary"][0]["support"] == "Odds");
    CHECK(j["stationary"][0]["probs"][0] == "1/6");
    CHECK(j["mixing_bound_at"]["eps"] == 0.01);
  }

  SECTION("dimension weights: no symmetric-weight bound, rate still reported") {
    const auto r = analyze_chain(p, 4, WeightFunction::dimension(p), 0.05);
    CHECK(r.classification == ChainClassification::IrreduciblePeriod2);
    CHECK_FALSE(r.mixing_bound.has_value());
    CHECK(r.lambda_star > 0.0);
    CHECK(r.lambda_star < 1.0);

    const auto j = to_json(r);
    CHECK(j["mixing_bound_at"]["value"].is_null());
    CHECK(j["weighting"] == "dimension");
  }
}
