#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bmv/polynomial.hpp"

namespace bmv {

/// Dense univariate polynomial over Q, lowest degree first, no trailing zeros.
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<Rational> coefficients);

  /// Requires f to involve at most one variable.
  static UniPoly from_polynomial(const Polynomial& f);
  Polynomial to_polynomial(const RingPtr& ring, std::size_t var) const;

  bool is_zero() const { return c_.empty(); }
  /// Degree; -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Rational>& coefficients() const { return c_; }
  const Rational& leading() const { return c_.back(); }
  Rational operator[](std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }

  Rational operator()(const Rational& x) const;
  int sign_at(const Rational& x) const;
  double approx(double x) const;

  UniPoly derivative() const;
  UniPoly monic() const;

  friend UniPoly operator+(const UniPoly& a, const UniPoly& b);
  friend UniPoly operator-(const UniPoly& a, const UniPoly& b);
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b);
  friend UniPoly operator*(const Rational& c, const UniPoly& a);
  bool operator==(const UniPoly&) const = default;

  std::string to_string(std::string_view var = "x") const;

 private:
  void trim();
  std::vector<Rational> c_;
};

struct DivMod {
  UniPoly quotient;
  UniPoly remainder;
};

DivMod divmod(const UniPoly& a, const UniPoly& b);
UniPoly gcd(const UniPoly& a, const UniPoly& b);

/// p / gcd(p, p'), made monic.
UniPoly squarefree_part(const UniPoly& p);

/// p, p', -rem(p, p'), ... down to a nonzero constant (for square-free p).
/// Remainders are formed from primitive integer pseudo-remainders and scaled
/// back, so the stored chain is the classical one.
struct SturmChain {
  std::vector<UniPoly> sequence;
};

SturmChain sturm_sequence(const UniPoly& p);
/// Sign changes of the chain at x, zeros skipped.
unsigned sign_variations(const SturmChain& chain, const Rational& x);

/// Distinct real roots in the open interval (a, b).
unsigned count_roots_open(const UniPoly& p, const Rational& a, const Rational& b);

/// Audit record for a root count on (0, 1).
struct UnitIntervalCertificate {
  UniPoly input;
  UniPoly squarefree;
  bool root_at_zero = false;
  bool root_at_one = false;
  UniPoly deflated;
  SturmChain chain;
  std::vector<int> signs_at_zero;
  std::vector<int> signs_at_one;
  unsigned variations_zero = 0;
  unsigned variations_one = 0;
  unsigned roots = 0;

  bool no_roots() const { return roots == 0; }
  /// Recomputes the chain and the counts from `input`.
  bool recheck() const;
  std::string to_string(std::string_view var = "x") const;
};

UnitIntervalCertificate no_roots_in_unit_interval(const UniPoly& p);

/// Parses a one-variable polynomial such as "2*x - 1".
/// (1 - t)^d f(t / (1 - t)) with d = deg f: its roots in (0, 1) are the
/// images of the positive roots of f under v -> v / (1 + v).
UniPoly positive_to_unit(const UniPoly& f);

UniPoly parse_unipoly(std::string_view text);

}  // namespace bmv
