#include <doctest.h>

#include <random>

#include "bmv/cert.hpp"
#include "bmv/lp.hpp"
#include "support.hpp"

using namespace bmv;

namespace {

// Best objective over all vertices of a 2-variable LP, by brute force.
std::optional<double> brute_force_2d(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
  std::optional<double> best;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = i + 1; j < a.rows(); ++j) {
      Eigen::Matrix2d m;
      m << a.row(i), a.row(j);
      if (std::abs(m.determinant()) < 1e-12) continue;
      const Eigen::Vector2d x = m.inverse() * (Eigen::Vector2d(b(i), b(j)));
      if (((a * x - b).array() > 1e-9).any()) continue;
      const double v = c.dot(x);
      if (!best || v > *best) best = v;
    }
  return best;
}

Rational bernstein_evaluate(const std::vector<Rational>& coeffs, const std::vector<unsigned>& degrees,
                            const std::vector<Rational>& point) {
  Rational total = 0;
  std::vector<unsigned> j(degrees.size(), 0);
  for (const auto& c : coeffs) {
    Rational basis = 1;
    for (std::size_t k = 0; k < degrees.size(); ++k) {
      Integer binom;
      mpz_bin_uiui(binom.get_mpz_t(), degrees[k], j[k]);
      Rational pw = 1;
      for (unsigned e = 0; e < j[k]; ++e) pw *= point[k];
      for (unsigned e = j[k]; e < degrees[k]; ++e) pw *= 1 - point[k];
      basis *= Rational(binom) * pw;
    }
    total += c * basis;
    for (std::size_t k = degrees.size(); k-- > 0;) {
      if (++j[k] <= degrees[k]) break;
      j[k] = 0;
    }
  }
  return total;
}

}  // namespace

TEST_CASE("maximize_lp on small problems") {
  Eigen::MatrixXd a(5, 2);
  a << 1, 0, 0, 1, 1, 1, -1, 0, 0, -1;
  Eigen::VectorXd b(5);
  b << 1, 2, 2.5, 0, 0;
  auto sol = maximize_lp(a, b, Eigen::Vector2d(1, 1));
  REQUIRE(sol);
  CHECK(sol->objective == doctest::Approx(2.5));
  CHECK(sol->active.size() == 2);
  for (auto r : sol->active) CHECK(a.row(static_cast<Eigen::Index>(r)).dot(sol->x) == doctest::Approx(b(r)));

  // Infeasible: x <= -1 and x >= 1.
  Eigen::MatrixXd inf(2, 1);
  inf << 1, -1;
  CHECK_FALSE(maximize_lp(inf, Eigen::Vector2d(-1, -1), Eigen::VectorXd::Ones(1)));
  // Unbounded: only x >= 0.
  Eigen::MatrixXd unb(1, 1);
  unb << -1;
  CHECK_FALSE(maximize_lp(unb, Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1)));
  CHECK_THROWS(maximize_lp(a, Eigen::VectorXd::Zero(2), Eigen::Vector2d(1, 1)));
}

TEST_CASE("maximize_lp matches vertex enumeration on random 2-variable problems") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0, 1);
  std::uniform_real_distribution<double> pos(0.1, 2);
  for (int trial = 0; trial < 200; ++trial) {
    const int extra = 3 + trial % 8;
    Eigen::MatrixXd a(4 + extra, 2);
    Eigen::VectorXd b(4 + extra);
    a.topRows(4) << 1, 0, -1, 0, 0, 1, 0, -1;
    b.head(4) << 3, 3, 3, 3;
    for (int i = 0; i < extra; ++i) {
      a.row(4 + i) << g(rng), g(rng);
      b(4 + i) = pos(rng);  // the origin stays feasible
    }
    const Eigen::Vector2d c(g(rng), g(rng));
    auto sol = maximize_lp(a, b, c);
    REQUIRE(sol);
    CHECK(((a * sol->x - b).array() <= 1e-9).all());
    auto best = brute_force_2d(a, b, c);
    REQUIRE(best);
    CHECK(sol->objective == doctest::Approx(*best).epsilon(1e-9));
  }
}

TEST_CASE("Bernstein coefficients reproduce the polynomial") {
  std::mt19937_64 rng(5);
  auto ring = make_ring({"x", "y", "z"});
  for (int trial = 0; trial < 40; ++trial) {
    auto f = testing::random_polynomial(rng, ring, 5, 6);
    std::vector<unsigned> degrees;
    for (std::size_t k = 0; k < 3; ++k) degrees.push_back(f.degree_in(k) + trial % 3);
    const auto coeffs = bernstein_coefficients(f, degrees);
    CHECK(coeffs.size() == (degrees[0] + 1) * (degrees[1] + 1) * (degrees[2] + 1));
    for (int s = 0; s < 3; ++s) {
      std::vector<Rational> pt;
      for (int k = 0; k < 3; ++k) pt.push_back(abs(testing::random_rational(rng, 4, 5)) / 4);
      CHECK(bernstein_evaluate(coeffs, degrees, pt) == evaluate(f, pt));
    }
    // Corner coefficients are the corner values.
    CHECK(coeffs.front() == evaluate(f, std::vector<Rational>{0, 0, 0}));
    CHECK(coeffs.back() == evaluate(f, std::vector<Rational>{1, 1, 1}));
    const auto [lo, hi] = std::minmax_element(coeffs.begin(), coeffs.end());
    for (int s = 0; s < 3; ++s) {
      std::vector<Rational> pt;
      for (int k = 0; k < 3; ++k) pt.push_back(abs(testing::random_rational(rng, 4, 5)) / 4);
      const Rational v = evaluate(f, pt);
      CHECK(*lo <= v);
      CHECK(v <= *hi);
    }
  }
  auto g = parse_polynomial("x^3*y", ring);
  CHECK_THROWS(bernstein_coefficients(g, {2, 1, 0}));
  CHECK_THROWS(bernstein_coefficients(g, {3, 1}));
}

TEST_CASE("ideal certificates") {
  auto ring = make_ring({"x"});
  auto q = parse_polynomial("x^2 - x + 1", ring);
  std::vector<Polynomial> gens{differentiate(q, 0)};
  auto cert = find_ideal_certificate(q, gens, 1);
  REQUIRE(cert);
  Rational least;
  CHECK(check_ideal_certificate(q, gens, cert->multipliers, cert->degrees, &least));
  CHECK(least == cert->minimum);
  CHECK(least >= 0);
  // A critical value of -1/4 at x = 1/2 rules out any certificate.
  auto bad = parse_polynomial("x^2 - x", ring);
  for (unsigned d = 0; d <= 2; ++d) CHECK_FALSE(find_ideal_certificate(bad, {differentiate(bad, 0)}, d));
  // Zero critical value: certificate with minimum 0.
  auto tight = parse_polynomial("x^2 - x + 1/4", ring);
  auto t = find_ideal_certificate(tight, {differentiate(tight, 0)}, 1);
  REQUIRE(t);
  CHECK(t->minimum == 0);
  CHECK_FALSE(check_ideal_certificate(q, gens, {parse_polynomial("-5", ring)}, {2}));
  CHECK_FALSE(check_ideal_certificate(q, gens, {}, {2}));

  // Two variables: a convex quadratic whose only critical point (1/9, 4/9)
  // has value 2/27.
  auto r2 = make_ring({"x", "y"});
  auto f = parse_polynomial("x^2 - 2/3*x + y^2 - y + x*y + 1/3", r2);
  auto c2 = find_ideal_certificate(f, {differentiate(f, 0), differentiate(f, 1)}, 1);
  REQUIRE(c2);
  CHECK(check_ideal_certificate(f, {differentiate(f, 0), differentiate(f, 1)}, c2->multipliers, c2->degrees));
}

TEST_CASE("ladder falls back to the ideal certificate") {
  auto ring = make_ring({"x"});
  LadderOptions opts;
  // Critical point 1/sqrt(2) in the box with value 1 + sqrt(2); the value
  // polynomial also has the negative root from -1/sqrt(2).
  auto outside = certify_critical_points("t", parse_polynomial("-2*x^3 + 3*x + 1", ring), {"x"}, opts);
  CHECK(outside.status == StepStatus::verified);
  CHECK(outside.certificate.find("rung: 3 (ideal certificate)") != std::string::npos);
  std::string why;
  CHECK(recheck_certificate(outside, &why));

  opts.max_multiplier_degree = 0;
  CHECK(certify_critical_points("t", parse_polynomial("-2*x^3 + 3*x + 1", ring), {"x"}, opts).status ==
        StepStatus::failed);

  // A saturation that runs out of budget still certifies.
  opts.max_multiplier_degree = 2;
  opts.budget.max_pairs = 1;
  auto r2 = make_ring({"x", "y"});
  auto f = parse_polynomial("x^4 + y^4 + x^2*y + x*y^2 - x - y + 1", r2);
  auto step = certify_critical_points("b", f, {"x", "y"}, opts);
  CHECK(step.status == StepStatus::verified);
  CHECK(step.summary.find("saturation stopped") != std::string::npos);
  CHECK(recheck_certificate(step, &why));

  // Tampering with a multiplier or the stated summary is caught.
  ProofStep tampered = step;
  const auto pos = tampered.certificate.find("multiplier 1: ");
  REQUIRE(pos != std::string::npos);
  tampered.certificate.insert(tampered.certificate.find('\n', pos), " + 7*x");
  CHECK_FALSE(recheck_certificate(tampered, &why));
  CHECK(why == "negative Bernstein coefficient");
  tampered = step;
  tampered.certificate.insert(pos + 14, "+ * ");
  CHECK_FALSE(recheck_certificate(tampered, &why));
  CHECK(why.find("malformed") == 0);
  tampered = step;
  const auto m = tampered.certificate.find("minimum ");
  tampered.certificate.insert(m + 8, "1");
  CHECK_FALSE(recheck_certificate(tampered, &why));
}
