#include "bmv/numsearch.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace bmv::num {

NumMatrix annotate(Eigen::MatrixXd m) {
  NumMatrix out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  out.min_eigenvalue = es.eigenvalues().minCoeff();
  out.spectral_norm = es.eigenvalues().cwiseAbs().maxCoeff();
  out.m = std::move(m);
  return out;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

double power_iteration(const Eigen::MatrixXd& m, double tol, int max_iter) {
  Eigen::VectorXd v = Eigen::VectorXd::Ones(m.rows()).normalized();
  double lambda = 0;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd w = m * v;
    double norm = w.norm();
    if (norm == 0) return 0;
    w /= norm;
    double next = w.dot(m * w);
    v = w;
    if (std::abs(next - lambda) <= tol * std::max(1.0, std::abs(next))) return next;
    lambda = next;
  }
  return lambda;
}

NumMatrix random_psd(std::size_t n, std::size_t rank, std::uint64_t seed) {
  if (n == 0 || rank == 0 || rank > n) throw std::invalid_argument("random_psd: need 1 <= rank <= n");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g(n, rank);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < rank; ++j) g(i, j) = normal(rng);
  Eigen::MatrixXd m = g * g.transpose();
  m = 0.5 * (m + m.transpose());
  m /= power_iteration(m);
  return annotate(std::move(m));
}

std::vector<std::vector<Eigen::MatrixXd>> hurwitz_table(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                                        unsigned m) {
  std::vector<std::vector<Eigen::MatrixXd>> cells(m + 1);
  cells[0].push_back(Eigen::MatrixXd::Identity(a.rows(), a.cols()));
  for (unsigned l = 0; l < m; ++l) {
    auto& next = cells[l + 1];
    next.push_back(cells[l][0] * a);
    for (unsigned k = 0; k < l; ++k) next.push_back(cells[l][k] * b + cells[l][k + 1] * a);
    next.push_back(cells[l][l] * b);
  }
  return cells;
}

std::vector<double> trace_coefficients(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, unsigned m) {
  auto cells = hurwitz_table(a, b, m);
  std::vector<double> out;
  for (const auto& c : cells[m]) out.push_back(c.trace());
  return out;
}

namespace {

double binomial(unsigned m, unsigned k) {
  double r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (m - k + i) / i;
  return r;
}

}  // namespace

ScanResult scan_coefficients(std::size_t n, unsigned m, std::uint64_t trials, std::uint64_t seed, std::size_t rank,
                             double tolerance) {
  ScanResult res;
  res.n = n;
  res.m = m;
  res.trials = trials;
  res.seed = seed;
  res.rank = rank == 0 ? n : rank;
  res.tolerance = tolerance;
  res.minima.assign(m + 1, std::numeric_limits<double>::infinity());
  res.argmin_trial.assign(m + 1, 0);
  res.argmin_seed.assign(m + 1, 0);
  for (std::uint64_t t = 0; t < trials; ++t) {
    const std::uint64_t s = derive_seed(seed, t);
    NumMatrix a = random_psd(n, res.rank, derive_seed(s, 0));
    NumMatrix b = random_psd(n, res.rank, derive_seed(s, 1));
    auto coeffs = trace_coefficients(a.m, b.m, m);
    for (unsigned k = 0; k <= m; ++k) {
      // |Tr S_{m,k}| <= n C(m,k) for norm-1 inputs.
      const double normalized = coeffs[k] / (static_cast<double>(n) * binomial(m, k));
      if (normalized < -tolerance) ++res.violations;
      if (normalized < res.minima[k]) {
        res.minima[k] = normalized;
        res.argmin_trial[k] = t;
        res.argmin_seed[k] = s;
      }
    }
  }
  return res;
}

std::string ScanResult::serialize() const {
  std::ostringstream os;
  os << "bmv-scan 1\n";
  os << "n: " << n << "\nm: " << m << "\nrank: " << rank << "\ntrials: " << trials << "\nseed: " << seed << "\n";
  os << std::setprecision(17);
  os << "tolerance: " << tolerance << "\nviolations: " << violations << "\n";
  for (unsigned k = 0; k < minima.size(); ++k)
    os << "k " << k << " min " << minima[k] << " trial " << argmin_trial[k] << " seed " << argmin_seed[k] << "\n";
  return os.str();
}

ScanResult ScanResult::parse(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string line, key;
  ScanResult r;
  std::getline(is, line);
  if (line != "bmv-scan 1") throw std::invalid_argument("scan result: bad header");
  auto field = [&](const char* name, auto& dest) {
    is >> key >> dest;
    if (key != std::string(name) + ":") throw std::invalid_argument(std::string("scan result: expected ") + name);
  };
  field("n", r.n);
  field("m", r.m);
  field("rank", r.rank);
  field("trials", r.trials);
  field("seed", r.seed);
  field("tolerance", r.tolerance);
  field("violations", r.violations);
  std::string kw, minw, trialw, seedw;
  unsigned k;
  double v;
  std::uint64_t t, s;
  while (is >> kw >> k >> minw >> v >> trialw >> t >> seedw >> s) {
    if (kw != "k" || k != r.minima.size()) throw std::invalid_argument("scan result: bad coefficient line");
    r.minima.push_back(v);
    r.argmin_trial.push_back(t);
    r.argmin_seed.push_back(s);
  }
  return r;
}

namespace {

Eigen::MatrixXd diag_with_one(const Eigen::VectorXd& x) {
  Eigen::VectorXd d(x.size() + 1);
  d(0) = 1;
  d.tail(x.size()) = x;
  return d.asDiagonal();
}

}  // namespace

double box_objective(const Eigen::VectorXd& x, const Eigen::MatrixXd& b, unsigned m, unsigned k) {
  return hurwitz_table(diag_with_one(x), b, m)[m][k].trace();
}

Eigen::VectorXd box_gradient(const Eigen::VectorXd& x, const Eigen::MatrixXd& b, unsigned m, unsigned k) {
  if (k >= m) return Eigen::VectorXd::Zero(x.size());
  auto cells = hurwitz_table(diag_with_one(x), b, m - 1);
  const Eigen::MatrixXd& s = cells[m - 1][k];
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) g(i) = static_cast<double>(m) * s(i + 1, i + 1);
  return g;
}

namespace {

// Newton steps on the coordinates strictly inside (0, 1), with the Hessian
// taken by central differences of the analytic gradient. Gradient descent
// alone stalls a few digits short on ill-conditioned problems.
void polish(Eigen::VectorXd& x, double& fx, std::vector<double>& history, const Eigen::MatrixXd& b, unsigned m,
            unsigned k) {
  const double h = 1e-6;
  for (int it = 0; it < 20; ++it) {
    std::vector<Eigen::Index> free;
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (x(i) > 0 && x(i) < 1) free.push_back(i);
    if (free.empty()) return;
    const auto nf = static_cast<Eigen::Index>(free.size());
    const Eigen::VectorXd g = box_gradient(x, b, m, k);
    Eigen::VectorXd gf(nf);
    Eigen::MatrixXd hess(nf, nf);
    for (Eigen::Index c = 0; c < nf; ++c) {
      gf(c) = g(free[c]);
      Eigen::VectorXd xp = x, xm = x;
      xp(free[c]) += h;
      xm(free[c]) -= h;
      const Eigen::VectorXd dg = (box_gradient(xp, b, m, k) - box_gradient(xm, b, m, k)) / (2 * h);
      for (Eigen::Index r = 0; r < nf; ++r) hess(r, c) = dg(free[r]);
    }
    hess = (hess + hess.transpose()) / 2;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) return;
    const Eigen::VectorXd d = ldlt.solve(-gf);
    Eigen::VectorXd xn = x;
    for (Eigen::Index c = 0; c < nf; ++c) xn(free[c]) = std::clamp(x(free[c]) + d(c), 0.0, 1.0);
    const double fn = box_objective(xn, b, m, k);
    // Near the optimum f is flat to rounding; accept on the gradient instead.
    const double slack = 1e-12 * std::max(1.0, std::abs(fx));
    Eigen::VectorXd gn = box_gradient(xn, b, m, k);
    double gnorm_new = 0, gnorm_old = gf.norm();
    for (Eigen::Index c = 0; c < nf; ++c) gnorm_new += gn(free[c]) * gn(free[c]);
    if (!(fn <= fx + slack) || std::sqrt(gnorm_new) >= gnorm_old || xn == x) return;
    x = xn;
    fx = fn;
    history.push_back(fx);
  }
}

}  // namespace

MinimizeResult minimize_box(const Eigen::MatrixXd& b, unsigned m, unsigned k, unsigned starts, std::uint64_t seed,
                            double tol, unsigned max_iter) {
  const Eigen::Index dim = b.rows() - 1;
  MinimizeResult best;
  best.value = std::numeric_limits<double>::infinity();
  auto project = [](Eigen::VectorXd v) { return v.cwiseMax(0.0).cwiseMin(1.0); };
  for (unsigned s = 0; s < std::max(1u, starts); ++s) {
    std::mt19937_64 rng(derive_seed(seed, s));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Eigen::VectorXd x(dim);
    for (Eigen::Index i = 0; i < dim; ++i) x(i) = unif(rng);
    double fx = box_objective(x, b, m, k);
    std::vector<double> history{fx};
    double step = 1.0;
    unsigned it = 0;
    for (; it < max_iter; ++it) {
      Eigen::VectorXd g = box_gradient(x, b, m, k);
      // Backtracking on the projected step until sufficient decrease.
      bool accepted = false;
      double t = std::min(1.0, step * 2);
      Eigen::VectorXd xn;
      double fn = fx;
      for (int bt = 0; bt < 60; ++bt, t *= 0.5) {
        xn = project(x - t * g);
        fn = box_objective(xn, b, m, k);
        const double decrease = g.dot(x - xn);
        if (fn <= fx - 1e-4 * decrease && fn <= fx) {
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
      const double moved = (xn - x).norm();
      step = t;
      x = xn;
      fx = fn;
      history.push_back(fx);
      if (moved < tol) break;
    }
    polish(x, fx, history, b, m, k);
    if (fx < best.value) {
      best.value = fx;
      best.point = x;
      best.iterations = it;
      best.history = std::move(history);
    }
  }
  return best;
}

double theorem2_residual(const Eigen::VectorXd& point, const Eigen::MatrixXd& b, unsigned m, unsigned k) {
  if (k >= m) throw std::domain_error("theorem2_residual needs k < m");
  Eigen::MatrixXd a = diag_with_one(point);
  Eigen::VectorXd d(point.size() + 1);
  d(0) = 1;
  for (Eigen::Index i = 0; i < point.size(); ++i) d(i + 1) = point(i) != 0 ? 1.0 : 0.0;
  auto cells = hurwitz_table(a, b, m);
  const double lhs = cells[m][k].trace();
  const double rhs = static_cast<double>(m) / (m - k) * (d.asDiagonal() * cells[m - 1][k]).trace();
  return std::abs(lhs - rhs);
}

}  // namespace bmv::num
