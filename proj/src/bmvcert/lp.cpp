#include "bmv/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bmv {

namespace {

// Dual in equality form: column j < N is s .* a.row(j), column N + i is the
// artificial unit vector e_i, right-hand side s .* c >= 0.
class DualSimplex {
 public:
  DualSimplex(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c)
      : a_(a), b_(b), c_(c), n_(a.cols()), rows_(a.rows()) {
    sign_ = Eigen::VectorXd::Ones(n_);
    for (Eigen::Index i = 0; i < n_; ++i)
      if (c(i) < 0) sign_(i) = -1;
    // A small deterministic perturbation of the dual right-hand side avoids
    // degenerate pivots. Feasibility of the primal vertex depends only on
    // the final basis, so it is unaffected.
    rhs_ = sign_.cwiseProduct(c);
    const double eps = 1e-7 * (1 + rhs_.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < n_; ++i) rhs_(i) += eps * (1 + static_cast<double>((i * 7919) % 1000) / 1000);
    for (Eigen::Index i = 0; i < n_; ++i) basis_.push_back(rows_ + i);
    refactor();
  }

  // Returns false when the phase ends unbounded or out of iterations.
  bool run(bool phase_one, unsigned& iterations, unsigned max_iterations) {
    unsigned stalled = 0;
    double last = std::numeric_limits<double>::infinity();
    bool bland = false;
    for (unsigned since_refactor = 0;; ++since_refactor) {
      if (iterations++ >= max_iterations) return false;
      if (since_refactor == 64) {
        refactor();
        since_refactor = 0;
      }
      const Eigen::VectorXd pi = binv_.transpose() * basic_costs(phase_one);
      const Eigen::VectorXd x = sign_.cwiseProduct(pi);
      // Reduced cost of column j: cost_j - a_j . x.
      const Eigen::VectorXd reduced = (phase_one ? Eigen::VectorXd::Zero(rows_) : b_) - a_ * x;
      const double tol = 1e-9 * (1 + reduced.cwiseAbs().maxCoeff());
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < rows_; ++j) {
        if (reduced(j) >= -tol || in_basis(j)) continue;
        if (enter < 0 || (!bland && reduced(j) < reduced(enter))) enter = j;
        if (bland) break;
      }
      if (enter < 0) return true;
      const Eigen::VectorXd w = binv_ * column(enter);
      Eigen::Index leave = -1;
      double best = 0;
      for (Eigen::Index i = 0; i < n_; ++i) {
        if (w(i) <= 1e-11) continue;
        const double ratio = xb_(i) / w(i);
        if (leave < 0 || ratio < best - 1e-12 || (ratio <= best + 1e-12 && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter, w);
      const double obj = objective(phase_one);
      if (obj < last - 1e-12 * (1 + std::abs(last))) {
        stalled = 0;
        last = obj;
      } else if (++stalled > 50) {
        bland = true;
      }
    }
  }

  // Replaces basic artificials by real columns; false when A lacks full rank.
  bool drive_out_artificials() {
    for (Eigen::Index i = 0; i < n_; ++i) {
      if (basis_[i] < rows_) continue;
      Eigen::Index enter = -1;
      Eigen::VectorXd w;
      double best = 1e-9;
      for (Eigen::Index j = 0; j < rows_; ++j) {
        if (in_basis(j)) continue;
        Eigen::VectorXd wj = binv_ * column(j);
        if (std::abs(wj(i)) > best) {
          best = std::abs(wj(i));
          enter = j;
          w = std::move(wj);
        }
      }
      if (enter < 0) return false;
      pivot(i, enter, w);
    }
    refactor();
    return true;
  }

  double objective(bool phase_one) const { return basic_costs(phase_one).dot(xb_); }

  LpSolution solution() const {
    LpSolution out;
    out.x = sign_.cwiseProduct(binv_.transpose() * basic_costs(false));
    out.objective = c_.dot(out.x);
    for (auto j : basis_) out.active.push_back(static_cast<std::size_t>(j));
    return out;
  }

 private:
  Eigen::VectorXd column(Eigen::Index j) const {
    if (j < rows_) return sign_.cwiseProduct(a_.row(j).transpose());
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n_);
    e(j - rows_) = 1;
    return e;
  }

  Eigen::VectorXd basic_costs(bool phase_one) const {
    Eigen::VectorXd out(n_);
    for (Eigen::Index i = 0; i < n_; ++i) {
      const bool artificial = basis_[i] >= rows_;
      out(i) = phase_one ? (artificial ? 1.0 : 0.0) : (artificial ? 0.0 : b_(basis_[i]));
    }
    return out;
  }

  bool in_basis(Eigen::Index j) const {
    for (auto k : basis_)
      if (k == j) return true;
    return false;
  }

  void pivot(Eigen::Index leave, Eigen::Index enter, const Eigen::VectorXd& w) {
    const double p = w(leave);
    binv_.row(leave) /= p;
    xb_(leave) /= p;
    for (Eigen::Index i = 0; i < n_; ++i) {
      if (i == leave || w(i) == 0) continue;
      binv_.row(i) -= w(i) * binv_.row(leave);
      xb_(i) -= w(i) * xb_(leave);
    }
    basis_[leave] = enter;
  }

  void refactor() {
    Eigen::MatrixXd basis(n_, n_);
    for (Eigen::Index i = 0; i < n_; ++i) basis.col(i) = column(basis_[i]);
    binv_ = basis.partialPivLu().inverse();
    xb_ = binv_ * rhs_;
  }

  const Eigen::MatrixXd& a_;
  const Eigen::VectorXd& b_;
  const Eigen::VectorXd& c_;
  Eigen::Index n_;
  Eigen::Index rows_;
  Eigen::VectorXd sign_;
  Eigen::VectorXd rhs_;
  std::vector<Eigen::Index> basis_;
  Eigen::MatrixXd binv_;
  Eigen::VectorXd xb_;
};

}  // namespace

std::optional<LpSolution> maximize_lp(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                                      unsigned max_iterations) {
  if (a.rows() != b.size() || a.cols() != c.size()) throw std::invalid_argument("maximize_lp: dimension mismatch");
  DualSimplex simplex(a, b, c);
  unsigned iterations = 0;
  if (!simplex.run(true, iterations, max_iterations)) return std::nullopt;
  if (simplex.objective(true) > 1e-7 * (1 + c.cwiseAbs().sum())) return std::nullopt;
  if (!simplex.drive_out_artificials()) return std::nullopt;
  if (!simplex.run(false, iterations, max_iterations)) return std::nullopt;
  LpSolution out = simplex.solution();
  out.iterations = iterations;
  return out;
}

}  // namespace bmv
