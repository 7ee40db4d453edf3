#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace bmv {

struct LpSolution {
  Eigen::VectorXd x;
  double objective = 0;
  /// Rows of A tight at x that form a nonsingular square system A_S x = b_S.
  std::vector<std::size_t> active;
  unsigned iterations = 0;
};

/// Maximizes c^T x subject to A x <= b with x free, by the revised simplex
/// method on the dual (minimize b^T y, A^T y = c, y >= 0). A must have full
/// column rank. Returns nullopt when the problem is infeasible, unbounded, or
/// the iteration limit is reached.
std::optional<LpSolution> maximize_lp(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                                      unsigned max_iterations = 100000);

}  // namespace bmv
