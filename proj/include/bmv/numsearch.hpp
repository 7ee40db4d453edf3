#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace bmv::num {

/// Dense real matrix with spectral metadata. Floating point lives only here.
struct NumMatrix {
  Eigen::MatrixXd m;
  double min_eigenvalue = 0;
  double spectral_norm = 0;

  std::size_t size() const { return static_cast<std::size_t>(m.rows()); }
};

/// Fills metadata from a symmetric eigen-decomposition.
NumMatrix annotate(Eigen::MatrixXd m);

/// Per-task seed derived from a master seed and a task index.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// G G^T with G an n x rank standard normal sample, scaled to spectral norm 1
/// (largest eigenvalue found by power iteration).
NumMatrix random_psd(std::size_t n, std::size_t rank, std::uint64_t seed);

/// Largest eigenvalue of a symmetric PSD matrix by power iteration.
double power_iteration(const Eigen::MatrixXd& m, double tol = 1e-12, int max_iter = 100000);

/// Tr S_{m,k}(A,B) for k = 0..m by the Hurwitz recurrence.
std::vector<double> trace_coefficients(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, unsigned m);
/// All S_{l,k}(A,B), cells[l][k].
std::vector<std::vector<Eigen::MatrixXd>> hurwitz_table(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                                        unsigned m);

struct ScanResult {
  std::size_t n = 0;
  unsigned m = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::size_t rank = 0;
  double tolerance = 1e-9;
  /// Per k: smallest observed Tr S_{m,k} / (n C(m,k)), the trial achieving it
  /// and that trial's derived seed.
  std::vector<double> minima;
  std::vector<std::uint64_t> argmin_trial;
  std::vector<std::uint64_t> argmin_seed;
  std::uint64_t violations = 0;

  std::string serialize() const;
  static ScanResult parse(std::string_view text);
};

/// Samples random pairs (A, B) of norm-1 PSD matrices of the given rank
/// (rank n gives PD samples) and records the smallest normalized trace
/// coefficients. A value below -tolerance counts as a violation.
ScanResult scan_coefficients(std::size_t n, unsigned m, std::uint64_t trials, std::uint64_t seed,
                             std::size_t rank = 0, double tolerance = 1e-9);

/// f(x) = Tr S_{m,k}(diag(1, x), B) on [0,1]^{n-1}.
double box_objective(const Eigen::VectorXd& x, const Eigen::MatrixXd& b, unsigned m, unsigned k);
/// df/dx_i = m [S_{m-1,k}(A,B)]_{ii} with A = diag(1, x).
Eigen::VectorXd box_gradient(const Eigen::VectorXd& x, const Eigen::MatrixXd& b, unsigned m, unsigned k);

struct MinimizeResult {
  Eigen::VectorXd point;
  double value = 0;
  unsigned iterations = 0;
  /// Objective after each accepted step of the winning start. The final
  /// Newton steps may raise it by rounding (at most 1e-12 relative).
  std::vector<double> history;
};

/// Multi-start projected gradient descent with backtracking line search,
/// finished by Newton steps on the coordinates inside (0, 1).
MinimizeResult minimize_box(const Eigen::MatrixXd& b, unsigned m, unsigned k, unsigned starts, std::uint64_t seed,
                            double tol = 1e-13, unsigned max_iter = 20000);

/// |Tr S_{m,k}(A',B) - m/(m-k) Tr[D S_{m-1,k}(A',B)]| with A' = diag(1, point)
/// and D = diag(1, [point_i != 0]).
double theorem2_residual(const Eigen::VectorXd& point, const Eigen::MatrixXd& b, unsigned m, unsigned k);

}  // namespace bmv::num
