#include <doctest.h>

#include "bmv/polynomial.hpp"
#include "support.hpp"

using namespace bmv;
using bmv::testing::random_monomial;
using bmv::testing::random_polynomial;
using bmv::testing::random_rational;

namespace {

RingPtr xy() { return make_ring({"x", "y"}); }
Polynomial P(std::string_view s, const RingPtr& r) { return parse_polynomial(s, r); }

}  // namespace

TEST_CASE("rational invariants come from gmp") {
  Rational q(6, -4);
  q.canonicalize();
  CHECK(q.get_num() == -3);
  CHECK(q.get_den() == 2);
  CHECK(Rational(0).get_den() == 1);
}

TEST_CASE("arith examples") {
  auto r = xy();
  CHECK(arith(P("x + y", r), P("x - y", r), ArithOp::add) == P("2*x", r));
  CHECK(arith(P("x + y", r), P("x - y", r), ArithOp::mul) == P("x^2 - y^2", r));
  auto zero = arith(P("x + y", r), Polynomial(r), ArithOp::mul);
  CHECK(zero.is_zero());
  CHECK(zero.terms().empty());
  CHECK_THROWS_AS(arith(P("x", r), parse_polynomial("x", make_ring({"x"})), ArithOp::add), VariableSetError);
}

TEST_CASE("power examples") {
  auto r = xy();
  CHECK(power(P("x + 1", r), 2) == P("x^2 + 2*x + 1", r));
  CHECK(power(P("x", r), 0) == Polynomial(r, Rational(1)));
  auto p6 = power(P("x + y", r), 6);
  REQUIRE(p6.term_count() == 7);
  const unsigned binom[] = {1, 6, 15, 20, 15, 6, 1};
  for (unsigned k = 0; k <= 6; ++k) CHECK(p6.coefficient(Monomial{6 - k, k}) == binom[k]);
}

TEST_CASE("differentiate examples") {
  auto r = xy();
  CHECK(differentiate(P("x^2*y", r), "x") == P("2*x*y", r));
  CHECK(differentiate(P("7", r), "x").is_zero());
  auto r2 = make_ring({"x1", "x2"});
  CHECK(differentiate(P("20 - 4*x1 + 8*x1^2 - 12*x1*x2 + 42*x2^2", r2), "x1") == P("-4 + 16*x1 - 12*x2", r2));
  CHECK_THROWS_AS(differentiate(P("x", r), "w"), VariableSetError);
}

TEST_CASE("substitute and evaluate examples") {
  auto r = xy();
  CHECK(substitute(P("x^2 + y", r), {{"x", Polynomial(r, Rational(1))}}) == P("1 + y", r));
  auto r2 = make_ring({"x1", "x2"});
  auto f = P("20 - 4*x1 + 8*x1^2 - 12*x1*x2 + 42*x2^2", r2);
  auto empty = make_ring({});
  auto value = substitute(f, {{"x1", Polynomial(empty, Rational(7, 25))}, {"x2", Polynomial(empty, Rational(1, 25))}}, empty);
  CHECK(value == Polynomial(empty, Rational(486, 25)));
  CHECK(evaluate(f, {{"x1", Rational(7, 25)}, {"x2", Rational(1, 25)}}) == Rational(486, 25));
  CHECK(evaluate(P("x^2 - y", r), {{"x", 2}, {"y", 3}}) == 1);
  CHECK_THROWS(evaluate(P("x^2 - y", r), {{"x", 2}}));

  auto R = make_ring({"r", "x", "y", "z", "u", "b"});
  auto neg = P("-12*b^3*u^2*x*y*z", R) * P("r^2 + r + 1", R);
  std::map<std::string, Rational> ones;
  for (auto& n : R->names()) ones[n] = 1;
  CHECK(evaluate(neg, ones) == -36);
}

TEST_CASE("compare examples") {
  auto lex = MonomialOrder::lex(2), grevlex = MonomialOrder::grevlex(2);
  Monomial x{1, 0}, y2{0, 2};
  CHECK(compare(lex, x, y2) == std::strong_ordering::greater);
  CHECK(compare(grevlex, x, y2) == std::strong_ordering::less);
  CHECK(compare(grevlex, x, x) == std::strong_ordering::equal);
  CHECK(compare(lex, y2, y2) == std::strong_ordering::equal);
}

TEST_CASE("grevlex breaks ties by the last variable") {
  auto g = MonomialOrder::grevlex(3);
  // x*z < y^2 in grevlex with x > y > z.
  CHECK(g.less(Monomial{1, 0, 1}, Monomial{0, 2, 0}));
  auto l = MonomialOrder::lex(std::vector<std::size_t>{2, 1, 0});
  CHECK(l.less(Monomial{5, 0, 0}, Monomial{0, 0, 1}));
}

TEST_CASE("text format round trip") {
  auto r = make_ring({"x", "y", "z"});
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    auto f = random_polynomial(rng, r, 5, 6);
    auto text = f.to_string();
    CHECK(parse_polynomial(text, r) == f);
    CHECK(parse_polynomial(text, r).to_string() == text);
  }
  CHECK(P("3*x^2*y - 7/2*y + 1", xy()).to_string() == "3*x^2*y - 7/2*y + 1");
  CHECK(P("  x  −  y ", xy()) == P("x - y", xy()));
  CHECK_THROWS_AS(P("x +* y", xy()), ParseError);
  CHECK_THROWS_AS(P("w", xy()), VariableSetError);
}

TEST_CASE("ring axioms on random polynomials") {
  auto r = make_ring({"a", "b", "c", "d"});
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 1000; ++i) {
    auto f = random_polynomial(rng, r, 5, 4), g = random_polynomial(rng, r, 5, 4), h = random_polynomial(rng, r, 5, 4);
    CHECK(f + g == g + f);
    CHECK(f * g == g * f);
    CHECK((f + g) + h == f + (g + h));
    CHECK((f * g) * h == f * (g * h));
    CHECK(f * (g + h) == f * g + f * h);
    CHECK((f - f).is_zero());
  }
}

TEST_CASE("product rule") {
  auto r = make_ring({"a", "b", "c"});
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    auto f = random_polynomial(rng, r, 4, 5), g = random_polynomial(rng, r, 4, 5);
    for (const char* v : {"a", "b", "c"})
      CHECK(differentiate(f * g, v) == differentiate(f, v) * g + f * differentiate(g, v));
  }
}

TEST_CASE("evaluation commutes with substitution") {
  auto r = make_ring({"a", "b", "c"});
  std::mt19937_64 rng(99);
  for (int i = 0; i < 200; ++i) {
    auto f = random_polynomial(rng, r, 4, 5);
    std::map<std::string, Polynomial> sigma{{"a", random_polynomial(rng, r, 2, 3)}, {"b", random_polynomial(rng, r, 2, 3)}};
    std::map<std::string, Rational> pt{{"a", random_rational(rng)}, {"b", random_rational(rng)}, {"c", random_rational(rng)}};
    std::map<std::string, Rational> image = pt;
    for (auto& [k, v] : sigma) image[k] = evaluate(v, pt);
    CHECK(evaluate(substitute(f, sigma), pt) == evaluate(f, image));
  }
}

TEST_CASE("monomial orders are total, antisymmetric, transitive and multiplicative") {
  std::mt19937_64 rng(5);
  const std::vector<MonomialOrder> orders = {MonomialOrder::lex(4), MonomialOrder::grevlex(4),
                                             MonomialOrder::grevlex(std::vector<std::size_t>{3, 1, 0, 2}),
                                             MonomialOrder::block({{0, 2}, {1, 3}})};
  for (const auto& order : orders) {
    CHECK(order.less(Monomial(4), Monomial{0, 0, 0, 1}));
    for (int i = 0; i < 500; ++i) {
      auto a = random_monomial(rng, 4, 3), b = random_monomial(rng, 4, 3), c = random_monomial(rng, 4, 3);
      auto ab = order.compare(a, b), ba = order.compare(b, a);
      CHECK((ab == std::strong_ordering::equal) == (a == b));
      CHECK((ab < 0) == (ba > 0));
      if (ab < 0 && order.compare(b, c) < 0) CHECK(order.compare(a, c) < 0);
      CHECK(order.compare(a * c, b * c) == ab);
    }
  }
}

TEST_CASE("weight rows realize the order") {
  std::mt19937_64 rng(8);
  for (const auto& order : {MonomialOrder::lex(3), MonomialOrder::grevlex(3), MonomialOrder::block({{2}, {0, 1}})}) {
    auto rows = order.weight_rows();
    for (int i = 0; i < 300; ++i) {
      auto a = random_monomial(rng, 3, 4), b = random_monomial(rng, 3, 4);
      std::vector<long> wa, wb;
      for (auto& row : rows) {
        long sa = 0, sb = 0;
        for (std::size_t v = 0; v < 3; ++v) {
          sa += long(row[v]) * a[v];
          sb += long(row[v]) * b[v];
        }
        wa.push_back(sa);
        wb.push_back(sb);
      }
      CHECK((wa <=> wb) == order.compare(a, b));
    }
  }
}

TEST_CASE("helpers") {
  auto r = xy();
  CHECK(primitive_part(P("2/3*x + 4/3", r)) == P("x + 2", r));
  CHECK(make_monic(P("3*x + 6", r), MonomialOrder::grevlex(2)) == P("x + 2", r));
  auto q = divide_exact(P("x^2 - y^2", r), P("x - y", r));
  REQUIRE(q);
  CHECK(*q == P("x + y", r));
  CHECK_FALSE(divide_exact(P("x^2 + y", r), P("x - y", r)));
  CHECK(scan_variables("b*a + a^2") == std::vector<std::string>{"b", "a"});
  auto ext = extend_ring(r, {"w"});
  CHECK(ext->size() == 3);
  CHECK_THROWS(extend_ring(r, {"x"}));
}
