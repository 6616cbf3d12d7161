#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fusionwalk/chain_analysis.hpp"
#include "fusionwalk/rational.hpp"
#include "fusionwalk/rng.hpp"

namespace fusionwalk {

// Half the L1 distance between two distributions on the same state set.
inline double tv_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("tv_distance requires a common support universe");
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += std::abs(a[k] - b[k]);
  return s / 2.0;
}

inline Rational tv_distance(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("tv_distance requires a common support universe");
  Rational s = 0;
  for (std::size_t k = 0; k < a.size(); ++k) s += abs(a[k] - b[k]);
  return s / 2;
}

namespace detail {

// Exact categorical sampler row: cumulative thresholds c_t scaled to
// integers K_t = floor(c_t * 2^53). A 53-bit variate u = m/2^53 satisfies
// u <= c_t exactly when m <= K_t, so sampling never touches floating
// point, and a variate landing exactly on a boundary resolves to the
// lower-indexed state.
struct SamplingRow {
  std::vector<std::uint64_t> cutoffs;
  std::vector<int> states;

  int sample(std::uint64_t u53) const {
    for (std::size_t t = 0; t < cutoffs.size(); ++t)
      if (u53 <= cutoffs[t]) return states[t];
    return states.back();  // unreachable: the last cutoff is 2^53
  }
};

inline SamplingRow make_sampling_row(const std::vector<std::pair<int, Rational>>& entries) {
  SamplingRow row;
  Rational cum = 0;
  for (const auto& [state, prob] : entries) {
    if (prob == 0) continue;
    cum += prob;
    const Int scaled = (numerator(cum) << 53) / denominator(cum);
    row.cutoffs.push_back(scaled.convert_to<std::uint64_t>());
    row.states.push_back(state);
  }
  if (row.states.empty() || cum != 1)
    throw std::invalid_argument("sampling row probabilities must sum to 1");
  return row;
}

}  // namespace detail

// Exact-threshold sampler for every row of a transition matrix.
class SamplingTable {
 public:
  explicit SamplingTable(const TransitionMatrix& q) {
    rows_.reserve(q.size());
    for (int i = 1; i <= q.size(); ++i) {
      std::vector<std::pair<int, Rational>> entries;
      for (int j = 1; j <= q.size(); ++j)
        if (q.at(i, j) != 0) entries.emplace_back(j, q.at(i, j));
      rows_.push_back(detail::make_sampling_row(entries));
    }
  }

  int next_state(int state, std::uint64_t u53) const {
    return rows_[static_cast<std::size_t>(state) - 1].sample(u53);
  }

  int size() const { return static_cast<int>(rows_.size()); }

 private:
  std::vector<detail::SamplingRow> rows_;
};

// One transition of the walk. Distribution of the output is row `state`.
inline int step(const TransitionMatrix& q, int state, Xoshiro256StarStar& rng) {
  if (state < 1 || state > q.size()) throw std::invalid_argument("state out of [1, p-1]");
  std::vector<std::pair<int, Rational>> entries;
  for (int j = 1; j <= q.size(); ++j)
    if (q.at(state, j) != 0) entries.emplace_back(j, q.at(state, j));
  return detail::make_sampling_row(entries).sample(rng.next53());
}

struct InitialDistribution {
  enum class Kind { PointMass, Uniform, Explicit };

  Kind kind = Kind::PointMass;
  int state = 1;
  std::vector<Rational> probs;  // Explicit only; entry k is state k+1

  static InitialDistribution point(int s) { return {Kind::PointMass, s, {}}; }
  static InitialDistribution uniform() { return {Kind::Uniform, 0, {}}; }
  static InitialDistribution explicit_dist(std::vector<Rational> probs) {
    return {Kind::Explicit, 0, std::move(probs)};
  }

  // Full probability vector over 1..p-1, validated to sum to 1.
  std::vector<Rational> resolve(const Prime& p) const {
    const int sz = p.value() - 1;
    std::vector<Rational> out(sz);
    switch (kind) {
      case Kind::PointMass:
        if (state < 1 || state > sz)
          throw std::invalid_argument("initial state out of [1, p-1]");
        out[state - 1] = 1;
        break;
      case Kind::Uniform:
        for (auto& x : out) x = Rational(1, sz);
        break;
      case Kind::Explicit: {
        if (static_cast<int>(probs.size()) != sz)
          throw std::invalid_argument("explicit initial distribution needs p-1 entries");
        Rational total = 0;
        for (const auto& x : probs) {
          if (x < 0) throw std::invalid_argument("initial distribution entries must be >= 0");
          total += x;
        }
        if (total != 1) throw std::invalid_argument("initial distribution must sum to 1");
        out = probs;
        break;
      }
    }
    return out;
  }
};

struct SimulationConfig {
  SimulationConfig(Prime prime, int fixed_factor, WeightFunction weight_fn)
      : p(prime), n(fixed_factor), weights(std::move(weight_fn)) {}

  Prime p;
  int n;
  WeightFunction weights;
  InitialDistribution initial = InitialDistribution::point(1);
  long long steps = 0;
  long long trajectories = 1;
  std::uint64_t seed = 0;
  bool lazy = false;
  bool record_occupancy = false;  // per-step state counts across all trajectories
};

struct EmpiricalResult {
  std::vector<long long> counts;  // terminal states; entry k is state k+1
  std::vector<double> empirical;
  double tv_to_target = 0.0;
  long long steps = 0;
  long long trajectories = 0;
  std::uint64_t seed = 0;
  std::vector<long long> occupancy;  // empty unless requested
};

namespace detail {

// Target of convergence: the component distribution matching the start
// parity for odd n, the unique stationary distribution for even n.
inline std::vector<Rational> convergence_target(const SimulationConfig& cfg,
                                                const std::vector<Rational>& nu) {
  if (cfg.n % 2 == 0) return whole_space_stationary(cfg.p, cfg.n, cfg.weights).probs;

  int parity = -1;
  for (std::size_t k = 0; k < nu.size(); ++k) {
    if (nu[k] == 0) continue;
    const int state_parity = static_cast<int>(k + 1) % 2;
    if (parity == -1) parity = state_parity;
    if (parity != state_parity)
      throw std::invalid_argument(
          "initial distribution mixes parities while n is odd; the walk never crosses between "
          "the parity classes, so analyse each class separately");
  }
  const Support want = parity == 1 ? Support::Odds : Support::Evens;
  for (auto& d : stationary(cfg.p, cfg.n, cfg.weights))
    if (d.component == want) return std::move(d.probs);
  throw std::logic_error("missing component stationary distribution");
}

}  // namespace detail

// Runs `trajectories` independent walks for `steps` steps each and collects
// terminal-state counts. Fully deterministic for a fixed seed: trajectory k
// always draws from its own stream regardless of execution order. The
// optional trace stream receives `trajectory,step,state` CSV rows
// (step 0 being the initial state).
inline EmpiricalResult run(const SimulationConfig& cfg, std::ostream* trace = nullptr) {
  check_chain_args(cfg.p, cfg.n, "run");
  classify_chain(cfg.p, cfg.n);
  if (cfg.steps < 0) throw std::invalid_argument("steps must be >= 0");
  if (cfg.trajectories < 1) throw std::invalid_argument("trajectories must be >= 1");

  const auto nu = cfg.initial.resolve(cfg.p);
  const auto target = detail::convergence_target(cfg, nu);

  auto q = build_transition(cfg.p, cfg.n, cfg.weights);
  if (cfg.lazy) q = lazy_transition(q);
  const SamplingTable table(q);

  std::vector<std::pair<int, Rational>> nu_entries;
  for (std::size_t k = 0; k < nu.size(); ++k)
    if (nu[k] != 0) nu_entries.emplace_back(static_cast<int>(k + 1), nu[k]);
  const auto nu_row = detail::make_sampling_row(nu_entries);

  EmpiricalResult res;
  res.counts.assign(nu.size(), 0);
  res.steps = cfg.steps;
  res.trajectories = cfg.trajectories;
  res.seed = cfg.seed;
  if (cfg.record_occupancy) res.occupancy.assign(nu.size(), 0);
  if (trace) *trace << "trajectory,step,state\n";

  for (long long k = 0; k < cfg.trajectories; ++k) {
    auto rng = trajectory_stream(cfg.seed, static_cast<std::uint64_t>(k));
    int state = nu_row.sample(rng.next53());
    if (trace) *trace << k << ",0," << state << "\n";
    for (long long s = 1; s <= cfg.steps; ++s) {
      state = table.next_state(state, rng.next53());
      if (trace) *trace << k << "," << s << "," << state << "\n";
      if (cfg.record_occupancy) ++res.occupancy[state - 1];
    }
    ++res.counts[state - 1];
  }

  res.empirical.resize(res.counts.size());
  std::vector<double> target_d(target.size());
  for (std::size_t k = 0; k < target.size(); ++k) target_d[k] = to_double(target[k]);
  for (std::size_t k = 0; k < res.counts.size(); ++k)
    res.empirical[k] = static_cast<double>(res.counts[k]) / static_cast<double>(cfg.trajectories);
  res.tv_to_target = tv_distance(res.empirical, target_d);
  return res;
}

}  // namespace fusionwalk
