#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fusionwalk/grid.hpp"
#include "fusionwalk/jacobi.hpp"
#include "fusionwalk/multiplicity_graph.hpp"
#include "fusionwalk/rational.hpp"
#include "fusionwalk/rng.hpp"
#include "fusionwalk/tensor_core.hpp"

namespace fusionwalk {

// Positive weight per state 1..p-1. The walk moves to a neighbouring state
// with probability proportional to the destination's weight.
class WeightFunction {
 public:
  static WeightFunction uniform(const Prime& p) {
    return WeightFunction(p, std::vector<Rational>(p.value() - 1, Rational(1)), "uniform");
  }

  static WeightFunction dimension(const Prime& p) {
    std::vector<Rational> w;
    w.reserve(p.value() - 1);
    for (int i = 1; i <= p.value() - 1; ++i) w.emplace_back(i);
    return WeightFunction(p, std::move(w), "dimension");
  }

  static WeightFunction custom(const Prime& p, std::vector<Rational> w,
                               std::string name = "custom") {
    return WeightFunction(p, std::move(w), std::move(name));
  }

  const Rational& at(int i) const {
    if (i < 1 || i > static_cast<int>(w_.size()))
      throw std::invalid_argument("weight index out of [1, p-1]");
    return w_[i - 1];
  }

  // Whether w(i) = w(p-i) for every state; computed, never assumed.
  bool symmetric() const {
    const int pv = p_.value();
    for (int i = 1; i <= pv - 1; ++i)
      if (at(i) != at(pv - i)) return false;
    return true;
  }

  const std::string& name() const { return name_; }
  const Prime& prime() const { return p_; }

 private:
  WeightFunction(Prime p, std::vector<Rational> w, std::string name)
      : p_(p), w_(std::move(w)), name_(std::move(name)) {
    if (static_cast<int>(w_.size()) != p_.value() - 1)
      throw std::invalid_argument("weight function needs exactly p-1 entries");
    for (const auto& x : w_)
      if (x <= 0) throw std::invalid_argument("weights must be positive");
  }

  Prime p_;
  std::vector<Rational> w_;
  std::string name_;
};

// Small positive rationals, reproducible from the seed. Used by the
// verification suites to probe detailed balance away from the named
// weightings.
inline WeightFunction seeded_random_weights(const Prime& p, std::uint64_t seed) {
  Xoshiro256StarStar rng(seed);
  std::vector<Rational> w;
  w.reserve(p.value() - 1);
  for (int i = 1; i <= p.value() - 1; ++i) {
    const long long num = 1 + static_cast<long long>(rng.next() % 24);
    const long long den = 1 + static_cast<long long>(rng.next() % 24);
    w.emplace_back(num, den);
  }
  return WeightFunction::custom(p, std::move(w));
}

// One line per state: `i num/den` (or a plain integer weight). Every state
// 1..p-1 must appear exactly once; blank lines and #-comments are skipped.
inline WeightFunction parse_weights_file(std::istream& in, const Prime& p) {
  std::vector<Rational> w(p.value() - 1);
  std::vector<bool> seen(p.value() - 1, false);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    int i = 0;
    std::string frac;
    if (!(row >> i >> frac)) throw std::invalid_argument("malformed weights line: " + line);
    if (i < 1 || i > p.value() - 1)
      throw std::invalid_argument("weights line for state out of [1, p-1]: " + line);
    if (seen[i - 1]) throw std::invalid_argument("duplicate weight for state " + std::to_string(i));
    seen[i - 1] = true;
    w[i - 1] = parse_rational(frac);
  }
  for (int i = 1; i <= p.value() - 1; ++i)
    if (!seen[i - 1]) throw std::invalid_argument("missing weight for state " + std::to_string(i));
  return WeightFunction::custom(p, std::move(w));
}

inline void check_chain_args(const Prime& p, int n, const char* what) {
  p.require_odd(what);
  if (p.value() < 5)
    throw std::invalid_argument(std::string(what) + ": no non-trivial chain exists below p = 5");
  if (n == 1 || n == p.value() - 1)
    throw std::invalid_argument(std::string(what) +
                                ": trivial chain (n = 1 never moves; n = p-1 only swaps i and "
                                "p-i); choose 2 <= n <= p-2");
  if (n < 2 || n > p.value() - 2)
    throw std::invalid_argument(std::string(what) + ": n must lie in [2, p-2]");
}

namespace detail {

// Row denominator of the walk at each vertex: the weight mass of its
// neighbourhood. Entry k corresponds to vertex k+1.
inline std::vector<Rational> neighbour_weight_sums(const Grid<std::uint8_t>& adj,
                                                   const std::vector<Rational>& u) {
  const int sz = adj.rows();
  std::vector<Rational> sums(sz);
  for (int i = 1; i <= sz; ++i) {
    Rational s = 0;
    for (int j = 1; j <= sz; ++j)
      if (adj.at(i, j)) s += u[j - 1];
    sums[i - 1] = s;
  }
  return sums;
}

// Unnormalised stationary mass u(i) * sum of neighbour weights. Detailed
// balance is an algebraic identity for this vector: mass_i * Q_ij equals
// u(i)u(j) whenever i~j, which is symmetric.
inline std::vector<Rational> stationary_mass(const Grid<std::uint8_t>& adj,
                                             const std::vector<Rational>& u) {
  auto mass = neighbour_weight_sums(adj, u);
  for (std::size_t k = 0; k < mass.size(); ++k) mass[k] *= u[k];
  return mass;
}

inline Grid<Rational> walk_transition_grid(const Grid<std::uint8_t>& adj,
                                           const std::vector<Rational>& u) {
  const int sz = adj.rows();
  const auto sums = neighbour_weight_sums(adj, u);
  Grid<Rational> q(sz, sz);
  for (int i = 1; i <= sz; ++i) {
    if (sums[i - 1] == 0) throw std::logic_error("isolated vertex in walk graph");
    for (int j = 1; j <= sz; ++j)
      if (adj.at(i, j)) q.at(i, j) = u[j - 1] / sums[i - 1];
  }
  return q;
}

// Symmetrise a reversible transition grid restricted to `states` using the
// stationary mass, and diagonalise. The off-diagonal entries are
// flow/sqrt(mass_i * mass_j) with flow_ij = mass_i * Q_ij exactly symmetric
// as a rational, so the double matrix is symmetric bit-for-bit.
inline SymmetricEigen symmetrized_eigen(const Grid<Rational>& q, const std::vector<Rational>& mass,
                                        const std::vector<int>& states,
                                        std::vector<double>* sym_out = nullptr) {
  const int m = static_cast<int>(states.size());
  std::vector<double> sym(static_cast<std::size_t>(m) * m, 0.0);
  std::vector<double> root(m);
  for (int r = 0; r < m; ++r) root[r] = std::sqrt(to_double(mass[states[r] - 1]));
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) {
      const int i = states[r], j = states[c];
      if (r == c) {
        sym[static_cast<std::size_t>(r) * m + c] = to_double(q.at(i, i));
      } else {
        const Rational flow = mass[i - 1] * q.at(i, j);
        if (flow != 0)
          sym[static_cast<std::size_t>(r) * m + c] = to_double(flow) / (root[r] * root[c]);
      }
    }
  }
  if (sym_out) *sym_out = sym;
  return jacobi_eigensolver(std::move(sym), m);
}

}  // namespace detail

// Row-stochastic matrix of exact rationals on states 1..p-1; support equals
// the multiplicity graph's edge set.
class TransitionMatrix {
 public:
  TransitionMatrix(Prime p, int n, Grid<Rational> entries)
      : p_(p), n_(n), entries_(std::move(entries)) {}

  const Rational& at(int i, int j) const { return entries_.at(i, j); }
  int size() const { return p_.value() - 1; }
  const Prime& prime() const { return p_; }
  int n() const { return n_; }
  const Grid<Rational>& entries() const { return entries_; }

 private:
  Prime p_;
  int n_;
  Grid<Rational> entries_;
};

inline TransitionMatrix build_transition(const Prime& p, int n, const WeightFunction& w) {
  check_chain_args(p, n, "build_transition");
  const auto a = build_adjacency(p, n);
  std::vector<Rational> u;
  u.reserve(a.size());
  for (int i = 1; i <= a.size(); ++i) u.push_back(w.at(i));
  return TransitionMatrix(p, n, detail::walk_transition_grid(a.entries(), u));
}

// (I + Q)/2: same stationary behaviour, periodicity removed.
inline TransitionMatrix lazy_transition(const TransitionMatrix& q) {
  const int sz = q.size();
  Grid<Rational> g(sz, sz);
  const Rational half(1, 2);
  for (int i = 1; i <= sz; ++i) {
    for (int j = 1; j <= sz; ++j) g.at(i, j) = q.at(i, j) * half;
    g.at(i, i) += half;
  }
  return TransitionMatrix(q.prime(), q.n(), std::move(g));
}

enum class Support { All, Odds, Evens };

inline std::string support_name(Support s) {
  switch (s) {
    case Support::All: return "All";
    case Support::Odds: return "Odds";
    default: return "Evens";
  }
}

// Exact distribution over states 1..p-1; entries off the support are zero.
struct StationaryDistribution {
  Support component = Support::All;
  std::vector<Rational> probs;  // entry k corresponds to state k+1
};

namespace detail {
inline std::vector<Rational> weights_vector(const WeightFunction& w) {
  std::vector<Rational> u;
  u.reserve(w.prime().value() - 1);
  for (int i = 1; i <= w.prime().value() - 1; ++i) u.push_back(w.at(i));
  return u;
}
}  // namespace detail

// The canonical stationary distribution of the whole walk: mass_i / total.
// For even n it is the unique stationary distribution; for odd n it is the
// particular mixture of the two component distributions induced by the
// weighting.
inline StationaryDistribution whole_space_stationary(const Prime& p, int n,
                                                     const WeightFunction& w) {
  check_chain_args(p, n, "whole_space_stationary");
  const auto a = build_adjacency(p, n);
  auto mass = detail::stationary_mass(a.entries(), detail::weights_vector(w));
  Rational total = 0;
  for (const auto& m : mass) total += m;
  for (auto& m : mass) m /= total;
  return {Support::All, std::move(mass)};
}

// Stationary distribution per irreducible piece: one distribution over the
// whole space for even n, one per parity class for odd n (each summing
// to 1 on its own support).
inline std::vector<StationaryDistribution> stationary(const Prime& p, int n,
                                                      const WeightFunction& w) {
  check_chain_args(p, n, "stationary");
  if (n % 2 == 0) return {whole_space_stationary(p, n, w)};

  const auto a = build_adjacency(p, n);
  const auto mass = detail::stationary_mass(a.entries(), detail::weights_vector(w));
  std::vector<StationaryDistribution> out;
  for (const Support comp : {Support::Odds, Support::Evens}) {
    const int parity = comp == Support::Odds ? 1 : 0;
    Rational total = 0;
    for (int i = 1; i <= a.size(); ++i)
      if (i % 2 == parity) total += mass[i - 1];
    StationaryDistribution d{comp, std::vector<Rational>(a.size())};
    for (int i = 1; i <= a.size(); ++i)
      if (i % 2 == parity) d.probs[i - 1] = mass[i - 1] / total;
    out.push_back(std::move(d));
  }
  return out;
}

// min{i, p-i, n, p-n} / n(p-n): the uniform-weight stationary distribution
// over the whole space (for odd n, the equal mixture of the two component
// distributions).
inline Rational uniform_stationary_closed_form(const Prime& p, int n, int i) {
  check_chain_args(p, n, "uniform_stationary_closed_form");
  return Rational(degree(p, n, i), static_cast<long long>(n) * (p.value() - n));
}

// Stationary distribution when states are weighted by their dimension.
// The two branches agree on the overlap i + n = p.
inline Rational dimension_stationary_closed_form(const Prime& p, int n, int i) {
  check_chain_args(p, n, "dimension_stationary_closed_form");
  const long long pv = p.value();
  if (i < 1 || i > pv - 1) throw std::invalid_argument("state out of [1, p-1]");
  if (i + n <= pv) return Rational(6LL * i * i, pv * (pv - n) * (2 * pv - n));
  return Rational(6LL * i * (pv - i), static_cast<long long>(n) * pv * (2 * pv - n));
}

enum class ChainClassification { TwoComponentsAperiodic, IrreduciblePeriod2 };

inline std::string classification_name(ChainClassification c) {
  return c == ChainClassification::TwoComponentsAperiodic ? "TwoComponentsAperiodic"
                                                          : "IrreduciblePeriod2";
}

// Classification out of the computed graph structure (components,
// 2-colouring, loops), not out of the parity of n.
inline ChainClassification classify_chain(const Prime& p, int n) {
  check_chain_args(p, n, "classify_chain");
  const auto g = classify_graph(p, n);
  if (g.components.size() == 2) {
    for (const auto& comp : g.components) {
      const bool has_loop = std::any_of(comp.begin(), comp.end(), [&](int v) {
        return std::binary_search(g.loops.begin(), g.loops.end(), v);
      });
      if (!has_loop) throw std::logic_error("two-component chain without a loop per component");
    }
    return ChainClassification::TwoComponentsAperiodic;
  }
  if (g.components.size() == 1 && g.bipartite) return ChainClassification::IrreduciblePeriod2;
  throw std::logic_error("chain structure matches neither known classification");
}

// One irreducible block of the symmetrised chain, with its eigensystem.
struct SpectralBlock {
  std::vector<int> states;  // 1-based states in this block
  std::vector<double> sym;  // row-major symmetrised matrix over the block
  SymmetricEigen eigen;
};

inline std::vector<SpectralBlock> spectral_blocks(const Prime& p, int n,
                                                  const WeightFunction& w) {
  check_chain_args(p, n, "spectral_blocks");
  const auto a = build_adjacency(p, n);
  const auto u = detail::weights_vector(w);
  const auto q = detail::walk_transition_grid(a.entries(), u);
  const auto mass = detail::stationary_mass(a.entries(), u);

  std::vector<std::vector<int>> blocks;
  if (n % 2 == 1) {
    blocks = classify_adjacency(a).components;
  } else {
    std::vector<int> all(a.size());
    for (int i = 1; i <= a.size(); ++i) all[i - 1] = i;
    blocks.push_back(std::move(all));
  }

  std::vector<SpectralBlock> out;
  for (auto& states : blocks) {
    SpectralBlock b;
    b.states = std::move(states);
    b.eigen = detail::symmetrized_eigen(q, mass, b.states, &b.sym);
    out.push_back(std::move(b));
  }
  return out;
}

// All p-1 eigenvalues of the transition matrix, descending. Reversibility
// makes the spectrum real; each irreducible block is symmetrised against
// its stationary mass and diagonalised.
inline std::vector<double> spectrum(const Prime& p, int n, const WeightFunction& w) {
  std::vector<double> values;
  for (const auto& b : spectral_blocks(p, n, w))
    values.insert(values.end(), b.eigen.values.begin(), b.eigen.values.end());
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

// Transition matrix of the half-size walk: the odd-state block for odd n,
// the antidiagonal fold for even n. Rows are again stochastic.
inline Grid<Rational> reduced_transition(const Prime& p, int n, const WeightFunction& w) {
  check_chain_args(p, n, "reduced_transition");
  const auto q = build_transition(p, n, w);
  const int pv = p.value();
  const int half = (pv - 1) / 2;
  const bool odd = n % 2 == 1;
  Grid<Rational> g(half, half);
  for (int i = 1; i <= half; ++i)
    for (int j = 1; j <= half; ++j)
      g.at(i, j) = odd ? q.at(2 * i - 1, 2 * j - 1) : q.at(2 * i - 1, pv + 1 - 2 * j);
  return g;
}

// Eigenvalues of the reduced walk, descending. The reduced walk is itself a
// weighted walk on the reduced graph (destination weights follow the column
// relabelling), so the same symmetrisation applies.
inline std::vector<double> reduced_spectrum(const Prime& p, int n, const WeightFunction& w) {
  check_chain_args(p, n, "reduced_spectrum");
  const auto rbar = build_reduced(p, n);
  const int pv = p.value();
  const int half = rbar.size();
  const bool odd = n % 2 == 1;
  std::vector<Rational> u(half);
  for (int j = 1; j <= half; ++j) u[j - 1] = odd ? w.at(2 * j - 1) : w.at(pv + 1 - 2 * j);

  const auto q = detail::walk_transition_grid(rbar.entries(), u);
  const auto mass = detail::stationary_mass(rbar.entries(), u);
  std::vector<int> states(half);
  for (int i = 1; i <= half; ++i) states[i - 1] = i;
  auto eigen = detail::symmetrized_eigen(q, mass, states);
  return eigen.values;
}

// Largest absolute eigenvalue of the reduced walk other than its single
// unit eigenvalue; controls the convergence rate.
inline double lambda_star(const Prime& p, int n, const WeightFunction& w) {
  const auto values = reduced_spectrum(p, n, w);
  if (values.empty() || std::abs(values.front() - 1.0) > 1e-9)
    throw std::runtime_error("reduced walk: leading eigenvalue is not 1");
  double best = 0.0;
  for (std::size_t k = 1; k < values.size(); ++k) best = std::max(best, std::abs(values[k]));
  return best;
}

// Drops the two unit-modulus eigenvalues the full chain always carries
// (one 1 per aperiodic component for odd n, the +-1 pair for even n) and
// returns the next largest magnitude.
inline double lambda_star_from_spectrum(const std::vector<double>& spectrum_values) {
  if (spectrum_values.size() < 3)
    throw std::invalid_argument("full spectrum too small for a convergence rate");
  std::vector<double> mags;
  mags.reserve(spectrum_values.size());
  for (double v : spectrum_values) mags.push_back(std::abs(v));
  std::sort(mags.begin(), mags.end(), std::greater<>());
  return mags[2];
}

// Upper bound log(1 / (eps * min_i pi_i)) / (1 - lambda_star) on the
// eps-mixing time, with pi the canonical whole-space stationary
// distribution. Stated for symmetric weightings only; for even n the bound
// covers the walk through its lazy variant.
inline double mixing_bound(const Prime& p, int n, const WeightFunction& w, double eps) {
  check_chain_args(p, n, "mixing_bound");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
  if (!w.symmetric())
    throw std::invalid_argument(
        "mixing_bound requires w(i) = w(p-i) for all i; for asymmetric weightings measure "
        "convergence empirically with the simulator");
  const double ls = lambda_star(p, n, w);
  const auto pi = whole_space_stationary(p, n, w);
  const Rational pi_min = *std::min_element(pi.probs.begin(), pi.probs.end());
  return std::log(1.0 / (eps * to_double(pi_min))) / (1.0 - ls);
}

struct ChainReport {
  int p = 0;
  int n = 0;
  std::string weighting;
  ChainClassification classification = ChainClassification::IrreduciblePeriod2;
  std::vector<std::vector<int>> components;
  std::vector<StationaryDistribution> stationary_distributions;
  std::vector<double> spectrum;
  double lambda_star = 0.0;
  double eps = 0.0;
  std::optional<double> mixing_bound;  // absent for asymmetric weightings
};

inline ChainReport analyze_chain(const Prime& p, int n, const WeightFunction& w, double eps) {
  check_chain_args(p, n, "analyze_chain");
  ChainReport r;
  r.p = p.value();
  r.n = n;
  r.weighting = w.name();
  r.classification = classify_chain(p, n);
  r.components = classify_graph(p, n).components;
  r.stationary_distributions = stationary(p, n, w);
  r.spectrum = spectrum(p, n, w);
  r.eps = eps;
  if (w.symmetric()) {
    r.lambda_star = lambda_star(p, n, w);
    r.mixing_bound = mixing_bound(p, n, w, eps);
  } else {
    r.lambda_star = lambda_star_from_spectrum(r.spectrum);
  }
  return r;
}

}  // namespace fusionwalk
