#pragma once

#include <atomic>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bmv/ideal.hpp"
#include "bmv/matrix.hpp"
#include "bmv/polynomial.hpp"
#include "bmv/realroots.hpp"

namespace bmv {

enum class StepStatus { verified, failed, budget_exceeded, skipped };

std::string to_string(StepStatus s);
StepStatus parse_status(std::string_view s);

struct ProofStep {
  std::string name;
  StepStatus status = StepStatus::skipped;
  double seconds = 0;
  /// Engine counters, "key=value" separated by spaces.
  std::string counters;
  /// One-line human summary.
  std::string summary;
  /// Multi-line evidence that a verifier can re-check.
  std::string certificate;

  /// SHA-256 over name, status, summary and certificate.
  std::string content_hash() const;
};

struct CertificationReport {
  std::vector<ProofStep> steps;
  std::string p_hash;
  std::uint64_t budget_pairs = 0;
  double budget_seconds = 0;
  /// Include wall-clock seconds per step when serializing.
  bool timings = false;

  /// True iff no step failed or ran out of budget and at least one verified.
  bool certified() const;
  const ProofStep* find(std::string_view name) const;

  std::string serialize() const;
  static CertificationReport parse(std::string_view text);
};

std::string sha256_hex(std::string_view data);

/// A boundary face of the box: the listed variables are fixed to 1.
struct SliceSpec {
  std::vector<std::string> fixed;

  std::string name() const;
  /// The 31 nonempty subsets of {x, y, z, u, b}, by size then position.
  static std::vector<SliceSpec> all();
  /// "x", "x,u", ... ; "interior" is not a slice.
  static SliceSpec parse(std::string_view text);
};

/// A and B of the singular parameterization over r, x, y, z, u, b together with
/// two Laurent variables b_inv, u_inv standing for 1/b and 1/u.
struct Parameterization {
  RingPtr ring;
  PolyMatrix a;
  PolyMatrix b;
};

Parameterization build_parameterized_AB();
/// Cancels b*b_inv and u*u_inv in every term and moves the result to
/// Q[r,x,y,z,u,b]; throws when a Laurent variable survives.
Polynomial clear_laurent(const Polynomial& f);
/// b^3 u^2 Tr S_{6,3}(A, B) in Z[r,x,y,z,u,b].
Polynomial build_p();
/// The ring Q[r,x,y,z,u,b].
RingPtr p_ring();

ProofStep check_complex_reduction();
ProofStep check_b_zero_case();
ProofStep check_degenerate_cases();
ProofStep check_parameterization();
ProofStep build_p_step(const Polynomial& p);
ProofStep negative_terms(const Polynomial& p);

/// Tensor Bernstein coefficients of f on [0,1]^n at the given per-variable
/// degrees (each at least the degree of f in that variable). The last
/// variable varies fastest. f lies between their minimum and maximum on the box.
std::vector<Rational> bernstein_coefficients(const Polynomial& f, const std::vector<unsigned>& degrees);

/// Multipliers lambda_i with h = q - sum_i lambda_i g_i having nonnegative
/// Bernstein coefficients on [0,1]^n. At a common zero of the g_i in the box,
/// q = h >= 0.
struct IdealCertificate {
  std::vector<Polynomial> multipliers;
  std::vector<unsigned> degrees;
  unsigned multiplier_degree = 0;
  std::size_t coefficient_count = 0;
  Rational minimum;
};

/// Searches multipliers of total degree <= multiplier_degree by linear
/// programming, then confirms the candidate in exact arithmetic.
std::optional<IdealCertificate> find_ideal_certificate(const Polynomial& q, const std::vector<Polynomial>& generators,
                                                       unsigned multiplier_degree);
/// Exact check of a certificate; stores the least Bernstein coefficient.
bool check_ideal_certificate(const Polynomial& q, const std::vector<Polynomial>& generators,
                             const std::vector<Polynomial>& multipliers, const std::vector<unsigned>& degrees,
                             Rational* minimum = nullptr);

/// Ideal of the partial derivatives of p in the listed variables.
Ideal critical_ideal(const Polynomial& p, const std::vector<std::string>& free);

struct LadderOptions {
  Budget budget;
  /// Rung 2 tries these variables first (default: the free variables in order).
  std::vector<std::string> elimination_order;
  /// Bound on eliminant degree searched by linear algebra.
  unsigned max_eliminant_degree = 400;
  /// Set this variable to 1 before saturating. Only valid when q is
  /// homogeneous in `grading`, which must contain it; this is checked.
  std::string dehomogenize;
  std::vector<std::string> grading;
  /// Largest multiplier degree tried for the ideal certificate of rung 3
  /// (bounded boxes only); 0 disables it.
  unsigned max_multiplier_degree = 2;
};

/// Critical points of q in (0,1)^k: saturation, then eliminants with Sturm
/// counts, then exact evaluation at rational candidates or an ideal
/// certificate of q >= 0 on the critical set.
ProofStep certify_critical_points(const std::string& name, const Polynomial& q, const std::vector<std::string>& free,
                                  const LadderOptions& options);

/// Re-derives the checkable parts of a ladder certificate from its text: the
/// Sturm blocks and the exact values at listed critical points. The Gröbner
/// computation itself is not repeated.
bool recheck_certificate(const ProofStep& step, std::string* why = nullptr);

ProofStep certify_interior(const Polynomial& p, const LadderOptions& options);
ProofStep certify_slice(const SliceSpec& slice, const Polynomial& p, const LadderOptions& options);
/// Exact sign check of p at random rational points with r in {0, 1}.
ProofStep check_r_endpoints(const Polynomial& p, unsigned samples = 10000, std::uint64_t seed = 1);
/// Exact sign check of p at random rational points of (0,1)^6.
ProofStep check_interior_samples(const Polynomial& p, unsigned samples = 1000, std::uint64_t seed = 2);

struct CertifyOptions {
  std::uint64_t budget_pairs = 1000000;
  double budget_seconds = 3600;
  /// Step filter: "interior", slice names such as "x" or "x,y", or "all".
  std::vector<std::string> only;
  unsigned jobs = 1;
  const CertificationReport* resume = nullptr;
  bool timings = false;
  const std::atomic<bool>* cancel = nullptr;
  std::function<void(const ProofStep&)> on_step;
};

CertificationReport certify_m6n3(const CertifyOptions& options);

/// The same ladder on the 4 x 4 trace example with two variables: finds the
/// interior critical point and its exact value.
CertificationReport rehearse_example();

}  // namespace bmv
