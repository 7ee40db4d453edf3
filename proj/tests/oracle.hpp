#pragma once

// Root counting without Sturm sequences: interval bisection with exact
// interval bounds for p and p'.

#include <algorithm>
#include <random>
#include <utility>

#include "bmv/realroots.hpp"

namespace bmv::testing {

// Range of p over [l, r] by interval Horner evaluation (sound overestimate).
inline std::pair<Rational, Rational> interval_eval(const UniPoly& p, const Rational& l, const Rational& r) {
  Rational lo = 0, hi = 0;
  const auto& c = p.coefficients();
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    Rational cands[4] = {lo * l, lo * r, hi * l, hi * r};
    lo = *std::min_element(cands, cands + 4) + *it;
    hi = *std::max_element(cands, cands + 4) + *it;
  }
  return {lo, hi};
}

inline unsigned oracle_count(const UniPoly& p, const UniPoly& dp, const Rational& l, const Rational& r, int depth = 0) {
  auto [lo, hi] = interval_eval(p, l, r);
  if (lo > 0 || hi < 0) return 0;
  Rational mid = (l + r) / 2;
  auto [dlo, dhi] = interval_eval(dp, l, r);
  if (dlo > 0 || dhi < 0) {
    // Monotone: one root in (l, r) iff strict sign change across the open interval.
    int sl = p.sign_at(l), sr = p.sign_at(r);
    return (sl != 0 && sr != 0 && sl != sr) ? 1u : 0u;
  }
  if (depth > 200) throw std::runtime_error("oracle did not converge");
  unsigned mid_root = p.sign_at(mid) == 0 ? 1 : 0;
  return oracle_count(p, dp, l, mid, depth + 1) + mid_root + oracle_count(p, dp, mid, r, depth + 1);
}

/// Distinct real roots of p in the open interval (a, b).
inline unsigned grid_refinement_count(const UniPoly& p, const Rational& a, const Rational& b) {
  UniPoly q = squarefree_part(p);
  if (q.degree() <= 0) return 0;
  UniPoly dq = q.derivative();
  // Coarse rational grid first, then refine each cell.
  const int cells = 16;
  unsigned count = 0;
  for (int i = 0; i < cells; ++i) {
    Rational l = a + (b - a) * Rational(i, cells), r = a + (b - a) * Rational(i + 1, cells);
    l.canonicalize();
    r.canonicalize();
    count += oracle_count(q, dq, l, r);
    if (i + 1 < cells && q.sign_at(r) == 0) ++count;
  }
  return count;
}

inline UniPoly random_test_poly(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kind(0, 2), deg(1, 8), coef(-20, 20), num(-5, 15), den(1, 10);
  UniPoly p({1});
  if (kind(rng) == 0) {
    std::vector<Rational> c(deg(rng) + 1);
    for (auto& x : c) x = coef(rng);
    if (c.back() == 0) c.back() = 1;
    return UniPoly(c);
  }
  // Product of rational linear factors (often in (0,1)) and maybe a quadratic.
  const int d = deg(rng);
  for (int i = 0; i < d; ++i) {
    Rational root(num(rng), den(rng));
    root.canonicalize();
    p = p * UniPoly({-root, 1});
  }
  if (kind(rng) == 1 && p.degree() <= 6) p = p * UniPoly({Rational(coef(rng)), Rational(coef(rng)), 1});
  return p;
}

}  // namespace bmv::testing
