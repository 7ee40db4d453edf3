#include <doctest.h>

#include "bmv/matrix.hpp"
#include "support.hpp"

using namespace bmv;
using bmv::testing::random_rational;

namespace {

RingPtr example_ring() { return make_ring({"x1", "x2"}); }
PolyMatrix example_a() { return parse_matrix("1, 0, 0; 0, x1, 0; 0, 0, x2", example_ring()); }
PolyMatrix example_b() { return parse_matrix("-2, 1, 0; -1, 2, 3; 1, -1, 3", example_ring()); }

PolyMatrix random_matrix(std::mt19937_64& rng, const RingPtr& ring, std::size_t n) {
  std::vector<std::vector<Rational>> rows(n, std::vector<Rational>(n));
  for (auto& row : rows)
    for (auto& c : row) c = random_rational(rng);
  return PolyMatrix::constant(ring, rows);
}

unsigned long binom(unsigned m, unsigned k) {
  unsigned long r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (m - k + i) / i;
  return r;
}

}  // namespace

TEST_CASE("hurwitz examples") {
  auto ring = make_ring({});
  auto a = PolyMatrix::constant(ring, {{1, 0}, {0, 2}});
  auto b = PolyMatrix::constant(ring, {{0, 1}, {1, 0}});
  CHECK(hurwitz(a, b, 2, 1) == PolyMatrix::constant(ring, {{0, 3}, {3, 0}}));
  CHECK(hurwitz(a, b, 2, 1) == a * b + b * a);
  std::mt19937_64 rng(1);
  auto a3 = random_matrix(rng, ring, 3);
  CHECK(hurwitz(a3, random_matrix(rng, ring, 3), 5, 0) == a3 * a3 * a3 * a3 * a3);
  CHECK_THROWS(hurwitz(a, b, 2, 3));
  CHECK_THROWS_AS(hurwitz(a, a3, 2, 1), DimensionError);
}

TEST_CASE("brute force examples") {
  auto ring = make_ring(symbolic_names("a", 2));
  auto ring2 = extend_ring(ring, symbolic_names("b", 2));
  auto a = symbolic_matrix(ring2, "a", 2), b = symbolic_matrix(ring2, "b", 2);
  CHECK(hurwitz_bruteforce(a, b, 1, 0) == a);
  CHECK(hurwitz_bruteforce(a, b, 1, 1) == b);
  CHECK(hurwitz_bruteforce(a, b, 3, 1) == a * a * b + a * b * a + b * a * a);
  CHECK(hurwitz(a, b, 3, 1) == hurwitz_bruteforce(a, b, 3, 1));
}

TEST_CASE("recurrence equals word enumeration for m = 6, k = 3") {
  auto ring = make_ring({});
  std::mt19937_64 rng(6);
  for (int i = 0; i < 10; ++i) {
    auto a = random_matrix(rng, ring, 3), b = random_matrix(rng, ring, 3);
    CHECK(hurwitz(a, b, 6, 3) == hurwitz_bruteforce(a, b, 6, 3));
  }
}

TEST_CASE("hurwitz table invariants") {
  auto ring = make_ring({});
  std::mt19937_64 rng(2);
  auto a = random_matrix(rng, ring, 3), b = random_matrix(rng, ring, 3);
  HurwitzTable t(a, b, 5);
  PolyMatrix ap = PolyMatrix::identity(ring, 3), bp = ap;
  for (unsigned l = 1; l <= 5; ++l) {
    ap = ap * a;
    bp = bp * b;
    CHECK(t.at(l, 0) == ap);
    CHECK(t.at(l, l) == bp);
  }
  for (unsigned l = 0; l < 5; ++l)
    for (unsigned k = 0; k < l; ++k) CHECK(t.at(l + 1, k + 1) == t.at(l, k) * b + t.at(l, k + 1) * a);
}

TEST_CASE("trace coefficient examples") {
  auto ring = make_ring({});
  auto id = PolyMatrix::identity(ring, 3);
  auto c = trace_coefficients(id, id, 6);
  const int expected[] = {3, 18, 45, 60, 45, 18, 3};
  for (unsigned k = 0; k <= 6; ++k) CHECK(c[k] == Polynomial(ring, expected[k]));

  auto r = example_ring();
  auto c4 = trace_coefficients(example_a(), example_b(), 4);
  CHECK(c4[2] == parse_polynomial("20 - 4*x1 + 8*x1^2 - 12*x1*x2 + 42*x2^2", r));
  auto c3 = trace_coefficients(example_a(), example_b(), 3);
  CHECK(c3[2] == parse_polynomial("9 + 18*x2", r));
  CHECK(trace_coefficients_expanded(example_a(), example_b(), 4) == c4);
}

TEST_CASE("lemma 1 examples") {
  auto names = symbolic_names("a", 2);
  auto bn = symbolic_names("b", 2);
  names.insert(names.end(), bn.begin(), bn.end());
  auto ring = make_ring(names);
  CHECK(verify_lemma1(symbolic_matrix(ring, "a", 2), symbolic_matrix(ring, "b", 2), 4, 2));

  auto cring = make_ring({});
  std::mt19937_64 rng(3);
  auto b = random_matrix(rng, cring, 3);
  auto id = PolyMatrix::identity(cring, 3);
  CHECK(verify_lemma1(id, b, 5, 2));
  // With A = I the trace is C(m,k) Tr B^k.
  CHECK(hurwitz(id, b, 5, 2).trace() == (b * b).trace() * Rational(binom(5, 2)));

  CHECK(verify_lemma1(example_a(), example_b(), 4, 2));
  auto r = example_ring();
  CHECK(trace_coefficients(example_a(), example_b(), 4)[2] == (example_a() * hurwitz(example_a(), example_b(), 3, 2)).trace() * Rational(2));
  CHECK_THROWS(verify_lemma1(id, b, 3, 3));
}

TEST_CASE("theorem 2 examples") {
  auto ring = make_ring({});
  auto b = parse_matrix("-2, 1, 0; -1, 2, 3; 1, -1, 3", ring);
  auto a = PolyMatrix::constant(ring, {{1, 0, 0}, {0, Rational(7, 25), 0}, {0, 0, Rational(1, 25)}});
  auto d = PolyMatrix::identity(ring, 3);
  CHECK(verify_theorem2(a, b, d, 4, 2) == 0);
  CHECK(hurwitz(a, b, 4, 2).trace() == Polynomial(ring, Rational(486, 25)));
  CHECK(stationarity_mask(a) == d);

  std::mt19937_64 rng(4);
  auto rb = random_matrix(rng, ring, 3);
  CHECK(verify_theorem2(d, rb, d, 5, 2) == 0);

  auto half = PolyMatrix::constant(ring, {{1, 0, 0}, {0, Rational(1, 2), 0}, {0, 0, Rational(1, 2)}});
  Rational residual = verify_theorem2(half, b, d, 4, 2);
  CHECK(residual != 0);
  // Direct evaluation of the same expression.
  Rational lhs = hurwitz(half, b, 4, 2).trace().constant_term();
  Rational rhs = hurwitz(half, b, 3, 2).trace().constant_term() * 2;
  CHECK(residual == lhs - rhs);

  auto bad_d = PolyMatrix::constant(ring, {{1, 0, 0}, {0, 2, 0}, {0, 0, 1}});
  CHECK_THROWS(verify_theorem2(a, b, bad_d, 4, 2));
  auto zero_a = PolyMatrix::constant(ring, {{1, 0, 0}, {0, 0, 0}, {0, 0, Rational(1, 3)}});
  CHECK_THROWS(verify_theorem2(zero_a, b, d, 4, 2));
  CHECK_NOTHROW(verify_theorem2(zero_a, b, stationarity_mask(zero_a), 4, 2));
}

TEST_CASE("oracle equivalence for m <= 8 on random inputs") {
  auto ring = make_ring({});
  std::mt19937_64 rng(8);
  for (int i = 0; i < 3; ++i) {
    auto a = random_matrix(rng, ring, 3), b = random_matrix(rng, ring, 3);
    for (unsigned m = 1; m <= 8; ++m) {
      HurwitzTable t(a, b, m);
      for (unsigned k = 0; k <= m; ++k) CHECK(t.at(m, k) == hurwitz_bruteforce(a, b, m, k));
    }
  }
}

TEST_CASE("trace identities on random inputs") {
  auto ring = make_ring({});
  std::mt19937_64 rng(10);
  for (int i = 0; i < 10; ++i) {
    auto a = random_matrix(rng, ring, 3), b = random_matrix(rng, ring, 3);
    for (unsigned m = 1; m <= 6; ++m) {
      auto c = trace_coefficients(a, b, m);
      auto swapped = trace_coefficients(b, a, m);
      Polynomial sum(ring);
      for (unsigned k = 0; k <= m; ++k) {
        sum += c[k];
        CHECK(c[k] == swapped[m - k]);
      }
      PolyMatrix s = a + b, pw = PolyMatrix::identity(ring, 3);
      for (unsigned j = 0; j < m; ++j) pw = pw * s;
      CHECK(sum == pw.trace());
      CHECK(trace_coefficients_expanded(a, b, m) == c);
    }
  }
}

TEST_CASE("lemma 1 on symbolic 3x3 inputs for small m") {
  auto names = symbolic_names("a", 3, true);
  auto bn = symbolic_names("b", 3);
  names.insert(names.end(), bn.begin(), bn.end());
  auto ring = make_ring(names);
  auto a = symbolic_diagonal(ring, "a", 3), b = symbolic_matrix(ring, "b", 3);
  for (unsigned m = 1; m <= 4; ++m)
    for (unsigned k = 0; k < m; ++k) CHECK(verify_lemma1(a, b, m, k));
}

TEST_CASE("matrix text round trip and determinant") {
  auto m = parse_matrix("x, 1/2*y; -y, x^2 + 1");
  CHECK(m.size() == 2);
  CHECK(parse_matrix(m.to_string(), m.ring()) == m);
  CHECK(m.to_string() == "x, 1/2*y; -y, x^2 + 1");
  auto ring = make_ring({});
  CHECK(determinant(PolyMatrix::constant(ring, {{2, 1, -1}, {1, 1, 1}, {-1, 1, 5}})).is_zero());
  CHECK_THROWS_AS(parse_matrix("1, 2; 3"), ParseError);
  auto s = symbolic_matrix(make_ring(symbolic_names("p", 2)), "p", 2);
  CHECK(s(1, 0).to_string() == "p21");
}

TEST_CASE("words of length below six have positive trace for PD inputs") {
  // Random PD matrices with small integer entries: B = G G^T + I.
  auto ring = make_ring({});
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> e(-3, 3);
  auto pd = [&] {
    std::vector<std::vector<Rational>> g(3, std::vector<Rational>(3));
    for (auto& row : g)
      for (auto& c : row) c = e(rng);
    auto gm = PolyMatrix::constant(ring, g);
    return gm * gm.transpose() + PolyMatrix::identity(ring, 3);
  };
  for (int i = 0; i < 1000; ++i) {
    auto a = pd(), b = pd();
    for (unsigned m = 1; m < 6; ++m)
      for (std::uint32_t word = 0; word < (1u << m); ++word) {
        PolyMatrix prod = PolyMatrix::identity(ring, 3);
        for (unsigned pos = 0; pos < m; ++pos) prod = prod * ((word >> pos) & 1u ? b : a);
        CHECK(prod.trace().constant_term() > 0);
      }
  }
}
