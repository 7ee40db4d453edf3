#include <algorithm>
#include <cmath>

#include "bmv/cert.hpp"
#include "bmv/lp.hpp"

namespace bmv {

namespace {

Rational binomial(unsigned n, unsigned k) {
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return Rational(out);
}

std::size_t grid_size(const std::vector<unsigned>& degrees) {
  std::size_t g = 1;
  for (unsigned d : degrees) g *= d + 1;
  return g;
}

// Exact solution of a square system; nullopt when singular.
std::optional<std::vector<Rational>> solve_exact(std::vector<std::vector<Rational>> m, std::vector<Rational> rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col] == 0) continue;
      const Rational f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<Rational> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = rhs[i] / m[i][i];
  return out;
}

// Multiplier monomials of total degree <= d in n variables.
std::vector<Monomial> monomials_up_to(std::size_t n, unsigned d) {
  std::vector<Monomial> out{Monomial(n)};
  for (std::size_t begin = 0, deg = 0; deg < d; ++deg) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i) {
      // Extend only at or after the last variable used, so each monomial appears once.
      std::size_t last = 0;
      for (std::size_t v = 0; v < n; ++v)
        if (out[i][v]) last = v;
      for (std::size_t v = last; v < n; ++v) {
        Monomial m = out[i];
        m.set(v, m[v] + 1);
        out.push_back(m);
      }
    }
    begin = end;
  }
  return out;
}

Polynomial combine(const Polynomial& q, const std::vector<Polynomial>& generators,
                   const std::vector<Polynomial>& multipliers) {
  Polynomial h = q;
  for (std::size_t i = 0; i < generators.size(); ++i) h -= multipliers[i] * generators[i];
  return h;
}

}  // namespace

std::vector<Rational> bernstein_coefficients(const Polynomial& f, const std::vector<unsigned>& degrees) {
  const std::size_t n = degrees.size();
  if (f.ring()->size() != n) throw std::invalid_argument("bernstein_coefficients: one degree per variable");
  std::vector<std::size_t> stride(n, 1);
  for (std::size_t k = n; k-- > 1;) stride[k - 1] = stride[k] * (degrees[k] + 1);
  std::vector<Rational> c(grid_size(degrees));
  for (const auto& t : f.terms()) {
    std::size_t idx = 0;
    Rational scale = 1;
    for (std::size_t k = 0; k < n; ++k) {
      if (t.monomial[k] > degrees[k]) throw std::invalid_argument("bernstein_coefficients: degree too small");
      idx += t.monomial[k] * stride[k];
      scale *= binomial(degrees[k], t.monomial[k]);
    }
    c[idx] += t.coefficient / scale;
  }
  // Along each axis: b_j = sum_{i <= j} C(j, i) a_i, with a_i already divided by C(d, i).
  std::vector<Rational> line;
  for (std::size_t k = 0; k < n; ++k) {
    const unsigned d = degrees[k];
    if (d == 0) continue;
    std::vector<std::vector<Rational>> choose(d + 1);
    for (unsigned j = 0; j <= d; ++j)
      for (unsigned i = 0; i <= j; ++i) choose[j].push_back(binomial(j, i));
    line.assign(d + 1, 0);
    for (std::size_t base = 0; base < c.size(); ++base) {
      if ((base / stride[k]) % (d + 1) != 0) continue;
      bool zero = true;
      for (unsigned i = 0; i <= d; ++i) {
        line[i] = c[base + i * stride[k]];
        if (line[i] != 0) zero = false;
      }
      if (zero) continue;
      for (unsigned j = 0; j <= d; ++j) {
        Rational s = 0;
        for (unsigned i = 0; i <= j; ++i)
          if (line[i] != 0) s += choose[j][i] * line[i];
        c[base + j * stride[k]] = s;
      }
    }
  }
  return c;
}

std::optional<IdealCertificate> find_ideal_certificate(const Polynomial& q, const std::vector<Polynomial>& generators,
                                                       unsigned multiplier_degree) {
  const RingPtr& ring = q.ring();
  const std::size_t n = ring->size();
  const auto mons = monomials_up_to(n, multiplier_degree);
  struct Column {
    std::size_t generator;
    Monomial monomial;
    Polynomial poly;
  };
  std::vector<Column> columns;
  for (std::size_t i = 0; i < generators.size(); ++i)
    for (const auto& m : mons) columns.push_back({i, m, Polynomial::monomial(ring, m) * generators[i]});

  std::vector<unsigned> degrees(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    degrees[k] = q.degree_in(k);
    for (const auto& col : columns) degrees[k] = std::max(degrees[k], col.poly.degree_in(k));
  }
  const auto target = bernstein_coefficients(q, degrees);
  std::vector<std::vector<Rational>> bern;
  for (const auto& col : columns) bern.push_back(bernstein_coefficients(col.poly, degrees));

  // Rows of  sum_c lambda_c bern_c[j] + t <= target[j], each scaled by a power of two.
  const std::size_t vars = columns.size() + 1;
  std::vector<std::size_t> rows;
  std::vector<int> shift;
  for (std::size_t j = 0; j < target.size(); ++j) {
    double biggest = std::abs(target[j].get_d());
    bool structural = true;
    for (const auto& b : bern) {
      if (b[j] != 0) structural = false;
      biggest = std::max(biggest, std::abs(b[j].get_d()));
    }
    if (structural) {
      if (target[j] < 0) return std::nullopt;
      continue;
    }
    int e = 0;
    std::frexp(biggest, &e);
    rows.push_back(j);
    shift.push_back(e);
  }
  const double bound = 1e4;
  const std::size_t total = rows.size() + 2 * vars;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(vars));
  Eigen::VectorXd b(static_cast<Eigen::Index>(total));
  auto exact_row = [&](std::size_t r, std::vector<Rational>& coef, Rational& rhs) {
    coef.assign(vars, 0);
    if (r < rows.size()) {
      Rational scale = 1;
      if (shift[r] >= 0) mpq_div_2exp(scale.get_mpq_t(), scale.get_mpq_t(), static_cast<unsigned>(shift[r]));
      else mpq_mul_2exp(scale.get_mpq_t(), scale.get_mpq_t(), static_cast<unsigned>(-shift[r]));
      for (std::size_t c = 0; c < columns.size(); ++c) coef[c] = bern[c][rows[r]] * scale;
      coef[vars - 1] = 1;
      rhs = target[rows[r]] * scale;
    } else {
      const std::size_t v = (r - rows.size()) / 2;
      const bool upper = (r - rows.size()) % 2 == 0;
      coef[v] = upper ? 1 : -1;
      rhs = (upper && v == vars - 1) ? Rational(1) : Rational(bound);
    }
  };
  {
    std::vector<Rational> coef;
    Rational rhs;
    for (std::size_t r = 0; r < total; ++r) {
      exact_row(r, coef, rhs);
      for (std::size_t c = 0; c < vars; ++c) a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = coef[c].get_d();
      b(static_cast<Eigen::Index>(r)) = rhs.get_d();
    }
  }
  Eigen::VectorXd objective = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(vars));
  objective(static_cast<Eigen::Index>(vars) - 1) = 1;
  auto lp = maximize_lp(a, b, objective);
  if (!lp) return std::nullopt;

  auto attempt = [&](const std::vector<Rational>& lambda) -> std::optional<IdealCertificate> {
    IdealCertificate cert;
    cert.degrees = degrees;
    cert.multiplier_degree = multiplier_degree;
    cert.multipliers.assign(generators.size(), Polynomial(ring));
    for (std::size_t c = 0; c < columns.size(); ++c)
      if (lambda[c] != 0)
        cert.multipliers[columns[c].generator] += Polynomial::monomial(ring, columns[c].monomial, lambda[c]);
    const auto coeffs = bernstein_coefficients(combine(q, generators, cert.multipliers), degrees);
    cert.coefficient_count = coeffs.size();
    cert.minimum = *std::min_element(coeffs.begin(), coeffs.end());
    if (cert.minimum < 0) return std::nullopt;
    return cert;
  };

  // The optimal vertex solved exactly from its active rows.
  std::vector<std::vector<Rational>> m;
  std::vector<Rational> rhs;
  for (std::size_t r : lp->active) {
    m.emplace_back();
    rhs.emplace_back();
    exact_row(r, m.back(), rhs.back());
  }
  if (auto vertex = solve_exact(m, rhs))
    if (auto cert = attempt(*vertex)) return cert;
  // Fallback: the floating-point solution on a dyadic grid.
  std::vector<Rational> rounded(vars);
  for (std::size_t c = 0; c < vars; ++c) {
    rounded[c] = Rational(std::ldexp(std::round(std::ldexp(lp->x(static_cast<Eigen::Index>(c)), 40)), -40));
    rounded[c].canonicalize();
  }
  return attempt(rounded);
}

bool check_ideal_certificate(const Polynomial& q, const std::vector<Polynomial>& generators,
                             const std::vector<Polynomial>& multipliers, const std::vector<unsigned>& degrees,
                             Rational* minimum) {
  if (multipliers.size() != generators.size()) return false;
  const auto coeffs = bernstein_coefficients(combine(q, generators, multipliers), degrees);
  const Rational least = *std::min_element(coeffs.begin(), coeffs.end());
  if (minimum) *minimum = least;
  return least >= 0;
}

}  // namespace bmv
