#pragma once

#include <random>

#include "bmv/polynomial.hpp"

namespace bmv::testing {

inline Rational random_rational(std::mt19937_64& rng, long span = 9, long max_den = 5) {
  std::uniform_int_distribution<long> num(-span, span), den(1, max_den);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

inline Polynomial random_polynomial(std::mt19937_64& rng, const RingPtr& ring, unsigned max_degree, unsigned max_terms) {
  std::uniform_int_distribution<unsigned> nterms(0, max_terms), deg(0, max_degree);
  std::uniform_int_distribution<std::size_t> var(0, ring->size() - 1);
  std::vector<Term> terms;
  const unsigned n = nterms(rng);
  for (unsigned t = 0; t < n; ++t) {
    Monomial m(ring->size());
    const unsigned d = deg(rng);
    for (unsigned k = 0; k < d; ++k) {
      auto v = var(rng);
      m.set(v, m[v] + 1);
    }
    terms.push_back({m, random_rational(rng)});
  }
  return Polynomial(ring, std::move(terms));
}

inline Monomial random_monomial(std::mt19937_64& rng, std::size_t nvars, unsigned max_exp) {
  std::uniform_int_distribution<unsigned> e(0, max_exp);
  Monomial m(nvars);
  for (std::size_t v = 0; v < nvars; ++v) m.set(v, e(rng));
  return m;
}

}  // namespace bmv::testing
