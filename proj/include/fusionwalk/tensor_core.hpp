#pragma once

#include <algorithm>
#include <compare>
#include <stdexcept>
#include <string>
#include <vector>

namespace fusionwalk {

// Validated prime characteristic. p = 2 is accepted so that raw
// tensor-decomposition queries work there, but every graph/chain
// construction requires an odd prime and says so when refused.
class Prime {
 public:
  explicit Prime(int p) : p_(p) {
    if (p < 2) throw std::invalid_argument("p must be a prime >= 2, got " + std::to_string(p));
    for (int d = 2; d * d <= p; ++d)
      if (p % d == 0)
        throw std::invalid_argument("p must be prime, got composite " + std::to_string(p));
  }

  int value() const { return p_; }

  void require_odd(const char* what) const {
    if (p_ == 2) throw std::invalid_argument(std::string(what) + " requires an odd prime");
  }

  friend bool operator==(const Prime&, const Prime&) = default;

 private:
  int p_;
};

enum class ModuleKind { Simple, Projective };

// Names one indecomposable module: the simple module of dimension `index`,
// or the projective cover of that simple. Ordering is kind-major so sorted
// vectors of labels are canonical multisets (simples first, ascending).
struct ModuleLabel {
  ModuleKind kind;
  int index;

  static ModuleLabel simple(int i) { return {ModuleKind::Simple, i}; }
  static ModuleLabel projective(int i) { return {ModuleKind::Projective, i}; }

  friend auto operator<=>(const ModuleLabel&, const ModuleLabel&) = default;
};

// "V7" / "P12"
inline std::string label_name(ModuleLabel m) {
  return (m.kind == ModuleKind::Simple ? "V" : "P") + std::to_string(m.index);
}

inline long long dimension(const Prime& p, ModuleLabel m) {
  if (m.index < 1 || m.index > p.value())
    throw std::invalid_argument("module index out of [1, p]: " + std::to_string(m.index));
  if (m.kind == ModuleKind::Simple) return m.index;
  // The first and last projective covers are p-dimensional, the rest 2p.
  return (m.index == 1 || m.index == p.value()) ? p.value() : 2LL * p.value();
}

// The arithmetic progression {n+m-1, n+m-3, ..., n-m+1}, in that order.
// Indexes the summands of a tensor product of simples; empty when m = 0.
inline std::vector<int> nm_string(int n, int m) {
  if (n < 1 || m < 0 || n < m)
    throw std::invalid_argument("nm_string requires n >= m >= 0 with n >= 1");
  std::vector<int> s;
  s.reserve(m);
  for (int k = 0; k < m; ++k) s.push_back(n + m - 1 - 2 * k);
  return s;
}

struct Decomposition {
  // Canonical order: Simple labels ascending, then Projective ascending.
  std::vector<ModuleLabel> summands;
  long long ambient_dim = 0;  // product of the tensor-factor dimensions

  friend bool operator==(const Decomposition&, const Decomposition&) = default;
};

inline long long total_dimension(const Prime& p, const Decomposition& d) {
  long long t = 0;
  for (ModuleLabel m : d.summands) t += dimension(p, m);
  return t;
}

// Decomposition of (simple a-dim) tensor (simple b-dim) into indecomposable
// summands. An element i of the string pairs with 2p-i also in the string
// exactly when the summand at i is a full projective cover; unpaired
// elements give simple summands. n = m = p contributes one extra simple
// summand of dimension p on top of that.
inline Decomposition clebsch_gordan(const Prime& p, int a, int b) {
  const int pv = p.value();
  if (a < 1 || a > pv || b < 1 || b > pv)
    throw std::invalid_argument("tensor factors must lie in [1, p]");
  const int n = std::max(a, b);
  const int m = std::min(a, b);

  const int hi = n + m - 1, lo = n - m + 1;
  const auto in_string = [&](int x) { return lo <= x && x <= hi && (hi - x) % 2 == 0; };

  Decomposition d;
  d.ambient_dim = static_cast<long long>(a) * b;
  for (int i : nm_string(n, m)) {
    if (i < 1 || i > pv) continue;
    d.summands.push_back(in_string(2 * pv - i) ? ModuleLabel::projective(i)
                                               : ModuleLabel::simple(i));
  }
  if (n == pv && m == pv) d.summands.push_back(ModuleLabel::simple(pv));
  std::sort(d.summands.begin(), d.summands.end());
  return d;
}

// Whether the simple module of dimension l is a summand of the tensor
// product of the simples of dimensions i and j. The condition is fully
// symmetric in (l, i, j): odd perimeter, perimeter below 2p, and the
// strict triangle inequalities.
inline bool divides(const Prime& p, int l, int i, int j) {
  const int pv = p.value();
  if (l < 1 || l >= pv || i < 1 || i >= pv || j < 1 || j >= pv)
    throw std::invalid_argument("divides arguments must lie in [1, p-1]");
  const int s = i + j + l;
  return s % 2 == 1 && s < 2 * pv && l < i + j && i < j + l && j < l + i;
}

// Middle Loewy layer of the i-th projective cover (odd p). Empty for i = p,
// where the projective cover is itself simple.
inline std::vector<ModuleLabel> projective_heart(const Prime& p, int i) {
  p.require_odd("projective_heart");
  const int pv = p.value();
  if (i < 1 || i > pv) throw std::invalid_argument("projective index out of [1, p]");
  if (i == pv) return {};
  if (i == 1) return {ModuleLabel::simple(pv - 2)};
  if (i == pv - 1) return {ModuleLabel::simple(2)};
  return {ModuleLabel::simple(pv - i - 1), ModuleLabel::simple(pv - i + 1)};
}

// Full composition-factor multiset of the i-th projective cover:
// head and socle around the heart, except that the last one is simple.
inline std::vector<ModuleLabel> projective_factors(const Prime& p, int i) {
  const int pv = p.value();
  if (i == pv) return {ModuleLabel::simple(pv)};
  auto f = projective_heart(p, i);
  f.push_back(ModuleLabel::simple(i));
  f.push_back(ModuleLabel::simple(i));
  std::sort(f.begin(), f.end());
  return f;
}

// Composition factors of the j-dimensional module of homogeneous
// polynomials, for 1 <= j <= 2p-1. Below p+1 these are simple; above,
// the module is the quotient of a projective cover by its socle (plus a
// p-dimensional simple in the extreme case).
inline std::vector<ModuleLabel> polynomial_module_factors(const Prime& p, int j) {
  const int pv = p.value();
  if (j < 1 || j > 2 * pv - 1)
    throw std::invalid_argument("polynomial module dimension out of [1, 2p-1]");
  if (j <= pv) return {ModuleLabel::simple(j)};
  p.require_odd("polynomial_module_factors beyond p");
  const int i = 2 * pv - j;  // 1 <= i <= p-1
  auto f = projective_heart(p, i);
  f.push_back(ModuleLabel::simple(i));
  if (i == 1) f.push_back(ModuleLabel::simple(pv));
  std::sort(f.begin(), f.end());
  return f;
}

enum class FactorRoute {
  Filtration,     // expand the layers V_{n+m-1-2i} of the standard filtration
  ClebschGordan,  // expand the summand decomposition
};

// Composition-factor multiset of the tensor product of two simples.
// The two routes are algebraically independent paths to the same multiset
// and are kept separate deliberately; tests compare them exhaustively.
inline std::vector<ModuleLabel> tensor_composition_factors(const Prime& p, int a, int b,
                                                           FactorRoute route) {
  p.require_odd("tensor_composition_factors");
  const int pv = p.value();
  if (a < 1 || a > pv || b < 1 || b > pv)
    throw std::invalid_argument("tensor factors must lie in [1, p]");

  std::vector<ModuleLabel> out;
  if (route == FactorRoute::Filtration) {
    const int n = std::max(a, b), m = std::min(a, b);
    for (int layer = 0; layer < m; ++layer) {
      auto f = polynomial_module_factors(p, n + m - 1 - 2 * layer);
      out.insert(out.end(), f.begin(), f.end());
    }
  } else {
    for (ModuleLabel s : clebsch_gordan(p, a, b).summands) {
      if (s.kind == ModuleKind::Simple) {
        out.push_back(s);
      } else {
        auto f = projective_factors(p, s.index);
        out.insert(out.end(), f.begin(), f.end());
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace fusionwalk
