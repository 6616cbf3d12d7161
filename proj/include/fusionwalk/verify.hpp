#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fusionwalk/chain_analysis.hpp"
#include "fusionwalk/multiplicity_graph.hpp"
#include "fusionwalk/tensor_core.hpp"

namespace fusionwalk {

struct CheckResult {
  std::string name;
  bool pass = true;
  long long cases = 0;
  std::string detail;  // first failing case, empty on success
};

namespace detail {

class Checker {
 public:
  explicit Checker(std::string name) : result_{std::move(name)} {}

  template <typename Context>
  void expect(bool ok, Context&& context) {
    ++result_.cases;
    if (!ok && result_.pass) {
      result_.pass = false;
      result_.detail = context();
    }
  }

  CheckResult take() { return std::move(result_); }

 private:
  CheckResult result_;
};

inline std::vector<int> primes_up_to(int max_p, int min_p) {
  std::vector<int> out;
  for (int p = min_p; p <= max_p; ++p) {
    bool prime = p >= 2;
    for (int d = 2; d * d <= p; ++d)
      if (p % d == 0) prime = false;
    if (prime) out.push_back(p);
  }
  return out;
}

inline std::string case_tag(int p, int extra1 = -1, int extra2 = -1, int extra3 = -1) {
  std::ostringstream os;
  os << "p=" << p;
  if (extra1 >= 0) os << " " << extra1;
  if (extra2 >= 0) os << " " << extra2;
  if (extra3 >= 0) os << " " << extra3;
  return os.str();
}

inline bool connected01(const Grid<std::uint8_t>& g) {
  const int sz = g.rows();
  if (sz == 0) return true;
  std::vector<bool> seen(sz + 1, false);
  std::vector<int> stack{1};
  seen[1] = true;
  int visited = 0;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    ++visited;
    for (int v = 1; v <= sz; ++v)
      if (g.at(u, v) && !seen[v]) {
        seen[v] = true;
        stack.push_back(v);
      }
  }
  return visited == sz;
}

// Mirror of the lower half: a symmetric weighting drawn from the seed.
inline WeightFunction seeded_symmetric_weights(const Prime& p, std::uint64_t seed) {
  Xoshiro256StarStar rng(seed);
  const int pv = p.value();
  std::vector<Rational> w(pv - 1);
  for (int i = 1; i <= (pv - 1) / 2; ++i) {
    const long long num = 1 + static_cast<long long>(rng.next() % 24);
    const long long den = 1 + static_cast<long long>(rng.next() % 24);
    w[i - 1] = Rational(num, den);
    w[pv - i - 1] = w[i - 1];
  }
  return WeightFunction::custom(p, std::move(w));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Decomposition suite
// ---------------------------------------------------------------------------

inline std::vector<CheckResult> verify_cg(int max_p) {
  using detail::Checker;
  Checker dims("cg.dimension_conservation");
  Checker comm("cg.commutativity");
  Checker mult("cg.multiplicity_structure");
  Checker agree("cg.divides_matches_decomposition");
  Checker sym("cg.divides_full_symmetry");
  Checker rot("cg.divides_rotational_symmetry");
  Checker routes("cg.factor_routes_agree");

  for (int pv : detail::primes_up_to(max_p, 2)) {
    const Prime p(pv);
    for (int a = 1; a <= pv; ++a) {
      for (int b = 1; b <= pv; ++b) {
        const auto d = clebsch_gordan(p, a, b);
        dims.expect(total_dimension(p, d) == static_cast<long long>(a) * b,
                    [&] { return detail::case_tag(pv, a, b); });
        comm.expect(d == clebsch_gordan(p, b, a), [&] { return detail::case_tag(pv, a, b); });

        bool distinct = true;
        for (std::size_t k = 1; k < d.summands.size(); ++k)
          if (d.summands[k] == d.summands[k - 1]) distinct = false;
        bool extreme_ok = true;
        if (a == pv && b == pv) {
          const bool has_simple_p =
              std::binary_search(d.summands.begin(), d.summands.end(), ModuleLabel::simple(pv));
          const bool has_proj_p = std::binary_search(d.summands.begin(), d.summands.end(),
                                                     ModuleLabel::projective(pv));
          // p itself sits in the (p,p)-string only when p is odd
          extreme_ok = has_simple_p && has_proj_p == (pv % 2 == 1);
        }
        mult.expect(distinct && extreme_ok, [&] { return detail::case_tag(pv, a, b); });
      }
    }

    for (int i = 1; i <= pv - 1; ++i) {
      for (int j = 1; j <= pv - 1; ++j) {
        const auto d = clebsch_gordan(p, i, j);
        for (int l = 1; l <= pv - 1; ++l) {
          const bool member =
              std::binary_search(d.summands.begin(), d.summands.end(), ModuleLabel::simple(l));
          agree.expect(divides(p, l, i, j) == member,
                       [&] { return detail::case_tag(pv, l, i, j); });
          const bool v = divides(p, l, i, j);
          sym.expect(v == divides(p, l, j, i) && v == divides(p, i, j, l) &&
                         v == divides(p, i, l, j) && v == divides(p, j, i, l) &&
                         v == divides(p, j, l, i),
                     [&] { return detail::case_tag(pv, l, i, j); });
          rot.expect(v == divides(p, l, pv - i, pv - j),
                     [&] { return detail::case_tag(pv, l, i, j); });
        }
      }
    }

    if (pv > 2) {
      for (int a = 1; a <= pv; ++a) {
        for (int b = 1; b <= pv; ++b) {
          const auto filt = tensor_composition_factors(p, a, b, FactorRoute::Filtration);
          const auto cg = tensor_composition_factors(p, a, b, FactorRoute::ClebschGordan);
          long long total = 0;
          for (ModuleLabel m : filt) total += dimension(p, m);
          routes.expect(filt == cg && total == static_cast<long long>(a) * b,
                        [&] { return detail::case_tag(pv, a, b); });
        }
      }
    }
  }

  return {dims.take(), comm.take(), mult.take(), agree.take(),
          sym.take(),  rot.take(),  routes.take()};
}

// ---------------------------------------------------------------------------
// Graph suite
// ---------------------------------------------------------------------------

inline std::vector<CheckResult> verify_graph(int max_p) {
  using detail::Checker;
  Checker symm("graph.adjacency_symmetric");
  Checker rot("graph.rotation_invariance");
  Checker refl("graph.fixed_factor_reflection");
  Checker block("graph.reduced_block_structure");
  Checker redeq("graph.reduced_fixed_factor_invariance");
  Checker degs("graph.degree_formula");
  Checker conn("graph.reduced_connectivity");
  Checker cls("graph.classification");
  Checker pfree("graph.projective_free_parts_match");

  for (int pv : detail::primes_up_to(max_p, 3)) {
    const Prime p(pv);
    const auto order = reorder_permutation(p);

    for (int n = 1; n <= pv - 1; ++n) {
      const auto a = build_adjacency(p, n);
      const auto& g = a.entries();

      bool is_symm = true;
      for (int i = 1; i <= a.size(); ++i)
        for (int j = i + 1; j <= a.size(); ++j)
          if (g.at(i, j) != g.at(j, i)) is_symm = false;
      symm.expect(is_symm, [&] { return detail::case_tag(pv, n); });

      rot.expect(rotate_180(g) == g, [&] { return detail::case_tag(pv, n); });

      const auto other = build_adjacency(p, pv - n).entries();
      refl.expect(g == reflect_rows(other) && g == reflect_cols(other),
                  [&] { return detail::case_tag(pv, n); });

      const auto reduced = build_reduced(p, n);
      block.expect(permute(g, order) == expand_reduced(reduced),
                   [&] { return detail::case_tag(pv, n); });
      redeq.expect(reduced.entries() == build_reduced(p, pv - n).entries(),
                   [&] { return detail::case_tag(pv, n); });

      long long total = 0;
      bool deg_ok = true;
      for (int i = 1; i <= a.size(); ++i) {
        int row = 0;
        for (int j = 1; j <= a.size(); ++j) row += g.at(i, j);
        if (row != degree(p, n, i)) deg_ok = false;
        total += row;
      }
      degs.expect(deg_ok && total == static_cast<long long>(n) * (pv - n),
                  [&] { return detail::case_tag(pv, n); });

      if (n > 1 && n < pv - 1)
        conn.expect(detail::connected01(reduced.entries()),
                    [&] { return detail::case_tag(pv, n); });
    }

    for (int n = 2; n <= pv - 2; ++n) {
      const auto a = build_adjacency(p, n);
      const auto c = classify_adjacency(a);
      bool ok = true;
      if (n % 2 == 1) {
        ok = c.components.size() == 2 && !c.bipartite;
        if (ok)
          for (int i = 1; i <= a.size(); ++i)
            if ((i % 2 == 1) != (std::binary_search(c.components[0].begin(),
                                                    c.components[0].end(), i)))
              ok = false;
        // relabelling i -> p-i must carry the edge set onto itself
        if (ok)
          for (int i = 1; i <= a.size() && ok; ++i)
            for (int j = 1; j <= a.size(); ++j)
              if (a.at(i, j) != a.at(pv - i, pv - j)) ok = false;
        if (ok) {
          bool loops_per_component = true;
          for (const auto& comp : c.components) {
            bool found = false;
            for (int v : comp)
              if (std::binary_search(c.loops.begin(), c.loops.end(), v)) found = true;
            if (!found) loops_per_component = false;
          }
          ok = loops_per_component;
        }
      } else {
        ok = c.components.size() == 1 && c.bipartite && c.loops.empty();
        if (ok)
          for (int i = 1; i <= a.size() && ok; ++i)
            for (int j = 1; j <= a.size(); ++j)
              if (a.at(i, j) && (i + j) % 2 == 0) ok = false;  // classes are odds/evens
      }
      cls.expect(ok, [&] { return detail::case_tag(pv, n); });
    }

    for (int i = 1; i <= pv - 1; ++i) {
      for (int j = 1; j <= pv - 1; ++j) {
        const auto simple_part = [&](int x, int y) {
          std::vector<int> out;
          for (ModuleLabel m : clebsch_gordan(p, x, y).summands)
            if (m.kind == ModuleKind::Simple) out.push_back(m.index);
          return out;
        };
        pfree.expect(simple_part(i, j) == simple_part(pv - i, pv - j),
                     [&] { return detail::case_tag(pv, i, j); });
      }
    }
  }

  return {symm.take(), rot.take(),  refl.take(), block.take(), redeq.take(),
          degs.take(), conn.take(), cls.take(),  pfree.take()};
}

// ---------------------------------------------------------------------------
// Chain suite
// ---------------------------------------------------------------------------

inline std::vector<CheckResult> verify_chain(int max_p) {
  using detail::Checker;
  Checker rows("chain.rows_stochastic");
  Checker supp("chain.support_matches_graph");
  Checker bal("chain.detailed_balance_exact");
  Checker fix("chain.stationarity_exact");
  Checker comp("chain.component_distributions_normalised");
  Checker cfu("chain.closed_form_uniform");
  Checker cfd("chain.closed_form_dimension");
  Checker symq("chain.symmetric_weight_structure");
  Checker pair("chain.spectrum_pairing");
  Checker resid("chain.eigen_residuals");
  Checker range("chain.eigen_range");
  Checker lam("chain.lambda_star_consistency");
  Checker mixf("chain.mixing_bound_uniform_midpoint");
  Checker mixrej("chain.mixing_bound_rejects_asymmetric");

  for (int pv : detail::primes_up_to(max_p, 5)) {
    const Prime p(pv);
    const auto order = reorder_permutation(p);

    for (int n = 2; n <= pv - 2; ++n) {
      const auto a = build_adjacency(p, n);

      std::vector<WeightFunction> weightings{WeightFunction::uniform(p),
                                             WeightFunction::dimension(p)};
      for (int k = 0; k < 20; ++k)
        weightings.push_back(seeded_random_weights(
            p, 0x5EEDULL + 1000003ULL * pv + 1009ULL * n + static_cast<std::uint64_t>(k)));

      for (const auto& w : weightings) {
        const auto q = build_transition(p, n, w);
        const auto pi = whole_space_stationary(p, n, w);

        bool rows_ok = true, supp_ok = true, bal_ok = true, fix_ok = true;
        for (int i = 1; i <= q.size(); ++i) {
          Rational row_sum = 0;
          for (int j = 1; j <= q.size(); ++j) {
            const auto& x = q.at(i, j);
            row_sum += x;
            if ((x != 0) != (a.at(i, j) == 1)) supp_ok = false;
            if (pi.probs[i - 1] * x != pi.probs[j - 1] * q.at(j, i)) bal_ok = false;
          }
          if (row_sum != 1) rows_ok = false;
        }
        for (int j = 1; j <= q.size(); ++j) {
          Rational img = 0;
          for (int i = 1; i <= q.size(); ++i) img += pi.probs[i - 1] * q.at(i, j);
          if (img != pi.probs[j - 1]) fix_ok = false;
        }
        const auto tag = [&] { return detail::case_tag(pv, n) + " w=" + w.name(); };
        rows.expect(rows_ok, tag);
        supp.expect(supp_ok, tag);
        bal.expect(bal_ok, tag);
        fix.expect(fix_ok, tag);

        bool comp_ok = true;
        for (const auto& d : stationary(p, n, w)) {
          Rational total = 0;
          for (int i = 1; i <= q.size(); ++i) {
            total += d.probs[i - 1];
            const bool on_support = d.component == Support::All ||
                                    (d.component == Support::Odds) == (i % 2 == 1);
            if (!on_support && d.probs[i - 1] != 0) comp_ok = false;
          }
          if (total != 1) comp_ok = false;
        }
        comp.expect(comp_ok, tag);
      }

      // closed forms for the two named weightings
      {
        const auto pi_u = whole_space_stationary(p, n, WeightFunction::uniform(p));
        bool u_ok = true;
        for (int i = 1; i <= pv - 1; ++i)
          if (pi_u.probs[i - 1] != uniform_stationary_closed_form(p, n, i)) u_ok = false;
        cfu.expect(u_ok, [&] { return detail::case_tag(pv, n); });

        const auto pi_d = whole_space_stationary(p, n, WeightFunction::dimension(p));
        Rational sum_d = 0;
        bool d_ok = true;
        for (int i = 1; i <= pv - 1; ++i) {
          const auto cf = dimension_stationary_closed_form(p, n, i);
          sum_d += cf;
          if (pi_d.probs[i - 1] != cf) d_ok = false;
        }
        cfd.expect(d_ok && sum_d == 1, [&] { return detail::case_tag(pv, n); });
      }

      // rotational structure under symmetric weightings
      for (const auto& w : {WeightFunction::uniform(p),
                            detail::seeded_symmetric_weights(p, 77ULL * pv + n)}) {
        const auto q = build_transition(p, n, w).entries();
        const auto q_other = build_transition(p, pv - n, w).entries();
        const auto qbar = reduced_transition(p, n, w);
        const bool ok = rotate_180(q) == q && q == reflect_rows(q_other) &&
                        q == reflect_cols(q_other) &&
                        permute(q, order) == parity_block_expand(qbar, n % 2 == 1);
        symq.expect(ok, [&] { return detail::case_tag(pv, n) + " w=" + w.name(); });
      }

      // numerical spectrum properties
      std::vector<WeightFunction> spectral_weights{
          WeightFunction::uniform(p), WeightFunction::dimension(p),
          seeded_random_weights(p, 31337ULL + 13ULL * pv + n),
          detail::seeded_symmetric_weights(p, 4242ULL + 17ULL * pv + n)};
      for (const auto& w : spectral_weights) {
        const auto tag = [&] { return detail::case_tag(pv, n) + " w=" + w.name(); };
        const auto blocks = spectral_blocks(p, n, w);

        bool resid_ok = true, range_ok = true;
        std::vector<double> values;
        for (const auto& b : blocks) {
          const int m = static_cast<int>(b.states.size());
          for (int k = 0; k < m; ++k) {
            const double lambda = b.eigen.values[k];
            values.push_back(lambda);
            if (lambda < -1.0 - 1e-9 || lambda > 1.0 + 1e-9) range_ok = false;
            const auto& vec = b.eigen.vectors[k];
            for (int r = 0; r < m; ++r) {
              double image = 0.0;
              for (int c = 0; c < m; ++c)
                image += b.sym[static_cast<std::size_t>(r) * m + c] * vec[c];
              if (std::abs(image - lambda * vec[r]) >= 1e-8) resid_ok = false;
            }
          }
        }
        resid.expect(resid_ok, tag);
        range.expect(range_ok, tag);

        std::sort(values.begin(), values.end());
        if (n % 2 == 0) {
          bool negation_ok = true;
          for (std::size_t k = 0; k < values.size(); ++k)
            if (std::abs(values[k] + values[values.size() - 1 - k]) > 1e-9) negation_ok = false;
          pair.expect(negation_ok, tag);
        } else if (w.symmetric()) {
          bool pairing_ok = values.size() % 2 == 0;
          for (std::size_t k = 0; k + 1 < values.size() && pairing_ok; k += 2)
            if (std::abs(values[k] - values[k + 1]) > 1e-9) pairing_ok = false;
          pair.expect(pairing_ok, tag);
        }

        if (w.symmetric()) {
          const double from_reduced = lambda_star(p, n, w);
          const double from_full = lambda_star_from_spectrum(spectrum(p, n, w));
          lam.expect(std::abs(from_reduced - from_full) < 1e-9, tag);
        }
      }

      bool rejected = false;
      try {
        mixing_bound(p, n, WeightFunction::dimension(p), 0.1);
      } catch (const std::invalid_argument&) {
        rejected = true;
      }
      mixrej.expect(rejected, [&] { return detail::case_tag(pv, n); });
    }

    for (int n : {(pv - 1) / 2, (pv + 1) / 2}) {
      for (double eps : {0.01, 0.25}) {
        const double bound = mixing_bound(p, n, WeightFunction::uniform(p), eps);
        const double closed =
            2.0 * std::log((static_cast<double>(pv) * pv - 1.0) / (4.0 * eps));
        mixf.expect(std::abs(bound - closed) < 1e-9,
                    [&] { return detail::case_tag(pv, n); });
      }
    }
  }

  return {rows.take(), supp.take(), bal.take(),   fix.take(),  comp.take(),
          cfu.take(),  cfd.take(),  symq.take(),  pair.take(), resid.take(),
          range.take(), lam.take(), mixf.take(),  mixrej.take()};
}

inline std::vector<CheckResult> verify_all(int max_p) {
  auto out = verify_cg(max_p);
  for (auto& r : verify_graph(max_p)) out.push_back(std::move(r));
  for (auto& r : verify_chain(max_p)) out.push_back(std::move(r));
  return out;
}

}  // namespace fusionwalk
