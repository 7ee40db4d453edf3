#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bmv/polynomial.hpp"

namespace bmv {

/// Resource limits for one Gröbner computation. Zero means unlimited.
struct Budget {
  std::uint64_t max_pairs = 0;
  std::uint64_t max_terms = 0;
  double max_seconds = 0;
  const std::atomic<bool>* cancel = nullptr;

  static Budget unlimited() { return {}; }
};

/// Counters reported by every engine run.
struct EngineStats {
  std::uint64_t pairs_created = 0;
  std::uint64_t pairs_processed = 0;
  std::uint64_t product_criterion = 0;
  std::uint64_t chain_criterion = 0;
  std::uint64_t zero_reductions = 0;
  std::uint64_t reduction_steps = 0;
  std::uint64_t max_terms = 0;
  std::size_t max_basis = 0;
  unsigned max_degree = 0;
  double seconds = 0;

  std::string summary() const;
};

/// Thrown when a run hits its budget. Carries the state reached so far.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, EngineStats stats, std::vector<Polynomial> partial)
      : std::runtime_error(what), stats_(std::move(stats)), partial_(std::move(partial)) {}

  const EngineStats& stats() const { return stats_; }
  /// Basis elements found before the budget ran out (not a Gröbner basis).
  const std::vector<Polynomial>& partial_basis() const { return partial_; }

 private:
  EngineStats stats_;
  std::vector<Polynomial> partial_;
};

class Ideal {
 public:
  explicit Ideal(RingPtr ring) : ring_(std::move(ring)) {}
  Ideal(RingPtr ring, std::vector<Polynomial> generators);

  const RingPtr& ring() const { return ring_; }
  const std::vector<Polynomial>& generators() const { return generators_; }
  bool is_zero() const { return generators_.empty(); }

  void add(Polynomial f);

 private:
  RingPtr ring_;
  std::vector<Polynomial> generators_;
};

/// Reduced, monic Gröbner basis sorted by ascending leading monomial.
struct GroebnerBasis {
  RingPtr ring;
  MonomialOrder order = MonomialOrder::grevlex(0);
  std::vector<Polynomial> basis;
  EngineStats stats;

  bool is_unit() const;
  bool is_zero_ideal() const { return basis.empty(); }
  Ideal ideal() const { return Ideal(ring, basis); }
};

/// Remainder of multivariate division. The divisor applied at each step is the
/// first element of `divisors` whose leading term divides the current term.
Polynomial normal_form(const Polynomial& f, const std::vector<Polynomial>& divisors,
                       const MonomialOrder& order);

struct BuchbergerOptions {
  Budget budget;
  /// Reduce tails of new basis elements during the run.
  bool tail_reduce = true;
  /// Variables that are units modulo the ideal (for instance every factor of
  /// g once 1 - w*g is a generator). Monomial factors in these variables are
  /// divided out of each new element, which leaves the ideal unchanged.
  std::vector<std::size_t> invertible;
};

GroebnerBasis buchberger(const Ideal& ideal, const MonomialOrder& order, const BuchbergerOptions& options = {});

/// Default order for basis computations.
MonomialOrder default_order(const Ring& ring);

bool is_member(const Polynomial& f, const Ideal& ideal, const MonomialOrder& order,
               const BuchbergerOptions& options = {});
bool is_member(const Polynomial& f, const GroebnerBasis& gb);

/// (I : g) for a principal divisor.
Ideal ideal_quotient(const Ideal& ideal, const Polynomial& g, const BuchbergerOptions& options = {});

/// (I : g^inf) via an auxiliary variable: eliminate w from <I, 1 - w*g>.
Ideal saturate(const Ideal& ideal, const Polynomial& g, const BuchbergerOptions& options = {});
/// (I : g^inf) as the limit of I, (I:g), (I:g^2), ... Also returns the number
/// of quotient steps until stabilization.
Ideal saturate_iterated(const Ideal& ideal, const Polynomial& g, unsigned* steps = nullptr,
                        const BuchbergerOptions& options = {});
/// Saturation by a product of variables, one variable at a time.
Ideal saturate_by_variables(const Ideal& ideal, const std::vector<std::size_t>& vars,
                            const BuchbergerOptions& options = {});
/// Decides (I : g^inf) = <1> from a single basis of <I, 1 - w*g> under
/// grevlex, which is cheaper than forming the saturation. Fills `gb` with the
/// basis of the extended ideal when provided.
bool saturation_is_unit(const Ideal& ideal, const Polynomial& g, const BuchbergerOptions& options = {},
                        GroebnerBasis* gb = nullptr);

/// I intersected with Q[keep].
Ideal eliminate(const Ideal& ideal, const std::vector<std::string>& keep, const BuchbergerOptions& options = {});

bool is_unit_ideal(const Ideal& ideal, const BuchbergerOptions& options = {});
bool is_unit_ideal(const Ideal& ideal, const MonomialOrder& order, const BuchbergerOptions& options = {});

/// Returns (I : J^inf) for principal J. Every common zero of I that is not a
/// zero of J is a zero of the result.
Ideal contains_difference_variety(const Ideal& I, const Ideal& J, const BuchbergerOptions& options = {});

/// Both ideals share a ring; compares reduced bases.
bool ideals_equal(const Ideal& a, const Ideal& b, const BuchbergerOptions& options = {});

/// S-polynomial of two nonzero polynomials.
Polynomial s_polynomial(const Polynomial& f, const Polynomial& g, const MonomialOrder& order);

/// Buchberger criterion check: every S-polynomial reduces to zero.
bool satisfies_buchberger_criterion(const std::vector<Polynomial>& basis, const MonomialOrder& order);

/// Minimal polynomial of variable `var` modulo a zero-dimensional ideal given
/// by its Gröbner basis, found by linear algebra on normal forms of powers.
/// Returns std::nullopt when no relation exists up to `max_degree`.
std::optional<Polynomial> minimal_polynomial(const GroebnerBasis& gb, std::size_t var, unsigned max_degree);
/// Minimal polynomial of the class of f (coefficients low-first, monic). Its
/// roots are the values of f on the variety.
std::optional<std::vector<Rational>> minimal_polynomial_of(const GroebnerBasis& gb, const Polynomial& f,
                                                          unsigned max_degree);

/// True when the quotient ring is finite dimensional: every variable has a
/// pure power among the leading monomials.
bool is_zero_dimensional(const GroebnerBasis& gb);

// Ideal file format: one polynomial per line, '#' starts a comment.
std::vector<std::string> read_ideal_lines(std::string_view text);

}  // namespace bmv
