#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>
#include <gmpxx.h>

namespace bmv {

using Integer = mpz_class;
using Rational = mpq_class;

/// Raised when two operands live in different rings or a variable is unknown.
class VariableSetError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Ordered list of variable names. Rings are immutable and shared.
class Ring {
 public:
  explicit Ring(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<std::size_t> index_of(std::string_view name) const;
  std::size_t require(std::string_view name) const;

  bool operator==(const Ring& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
};

using RingPtr = std::shared_ptr<const Ring>;

RingPtr make_ring(std::vector<std::string> names);
/// Ring with the variables of `base` followed by `extra` (names must be new).
RingPtr extend_ring(const RingPtr& base, const std::vector<std::string>& extra);

bool same_ring(const RingPtr& a, const RingPtr& b);

/// Exponent vector, one slot per ring variable.
class Monomial {
 public:
  using Storage = boost::container::small_vector<std::uint16_t, 12>;

  Monomial() = default;
  explicit Monomial(std::size_t nvars) : exps_(nvars, 0) {}
  Monomial(std::initializer_list<unsigned> exps);
  explicit Monomial(std::span<const unsigned> exps);

  std::size_t size() const { return exps_.size(); }
  unsigned operator[](std::size_t i) const { return exps_[i]; }
  void set(std::size_t i, unsigned e);
  unsigned total_degree() const;
  bool is_one() const;

  bool divides(const Monomial& other) const;
  Monomial operator*(const Monomial& other) const;
  /// Exact quotient; requires divides(other, *this).
  Monomial operator/(const Monomial& other) const;
  Monomial lcm(const Monomial& other) const;
  Monomial gcd(const Monomial& other) const;

  bool operator==(const Monomial& other) const = default;
  /// Plain lexicographic comparison of exponent vectors, used for containers.
  std::strong_ordering operator<=>(const Monomial& other) const;

  std::size_t hash() const;

 private:
  Storage exps_;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

/// Total multiplicative order on monomials.
///
/// `rank` lists ring variable indices from most to least significant; lex and
/// grevlex are applied to the permuted exponent vector. A block order compares
/// grevlex on each block in turn and is the usual elimination order.
class MonomialOrder {
 public:
  enum class Kind { lex, grevlex, block };

  static MonomialOrder lex(std::size_t nvars);
  static MonomialOrder grevlex(std::size_t nvars);
  static MonomialOrder lex(std::vector<std::size_t> rank);
  static MonomialOrder grevlex(std::vector<std::size_t> rank);
  /// Blocks of ring indices, earliest block most significant; grevlex inside.
  static MonomialOrder block(std::vector<std::vector<std::size_t>> blocks);

  Kind kind() const { return kind_; }
  std::size_t size() const { return rank_.size(); }
  const std::vector<std::size_t>& rank() const { return rank_; }
  const std::vector<std::size_t>& block_sizes() const { return block_sizes_; }

  std::strong_ordering compare(const Monomial& a, const Monomial& b) const;
  bool less(const Monomial& a, const Monomial& b) const { return compare(a, b) < 0; }

  /// Rows of a nonnegative integer weight matrix realizing this order: the
  /// order compares the row-wise dot products lexicographically.
  std::vector<std::vector<unsigned>> weight_rows() const;

  std::string describe(const Ring& ring) const;

  bool operator==(const MonomialOrder&) const = default;

 private:
  MonomialOrder(Kind kind, std::vector<std::size_t> rank, std::vector<std::size_t> blocks);

  Kind kind_;
  std::vector<std::size_t> rank_;
  std::vector<std::size_t> block_sizes_;
};

struct Term {
  Monomial monomial;
  Rational coefficient;
};

/// Sparse polynomial over the rationals.
///
/// Terms are kept sorted in descending grevlex order on the ring's variable
/// order, with no zero coefficients, so structural equality is mathematical
/// equality and printing is canonical.
class Polynomial {
 public:
  explicit Polynomial(RingPtr ring) : ring_(std::move(ring)) {}
  Polynomial(RingPtr ring, const Rational& constant);
  /// Builds from arbitrary (possibly repeated, possibly zero) terms.
  Polynomial(RingPtr ring, std::vector<Term> terms);

  static Polynomial variable(const RingPtr& ring, std::string_view name);
  static Polynomial variable(const RingPtr& ring, std::size_t index);
  static Polynomial monomial(const RingPtr& ring, Monomial m, Rational c = 1);

  const RingPtr& ring() const { return ring_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Constant term (zero when absent).
  Rational constant_term() const;
  unsigned total_degree() const;
  unsigned degree_in(std::size_t var) const;
  /// Coefficient of an exact monomial (zero when absent).
  Rational coefficient(const Monomial& m) const;
  /// Leading term under `order` (throws on the zero polynomial).
  const Term& leading_term(const MonomialOrder& order) const;
  /// Variables that occur in some term.
  std::vector<std::size_t> support() const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Polynomial& other);
  Polynomial& operator*=(const Rational& c);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }

  bool operator==(const Polynomial& other) const;

  /// Term-by-term map into another ring, mapping variable i to index_map[i].
  Polynomial remap(const RingPtr& target, std::span<const std::size_t> index_map) const;

  std::string to_string() const;

 private:
  void normalize(std::vector<Term> terms);

  RingPtr ring_;
  std::vector<Term> terms_;
};

enum class ArithOp { add, sub, mul };

Polynomial arith(const Polynomial& f, const Polynomial& g, ArithOp op);
Polynomial power(const Polynomial& f, unsigned exponent);
Polynomial differentiate(const Polynomial& f, std::string_view var);
Polynomial differentiate(const Polynomial& f, std::size_t var);

/// Simultaneous substitution. Bound variables are replaced by their images;
/// every other variable must exist by name in `result_ring`.
Polynomial substitute(const Polynomial& f, const std::map<std::string, Polynomial>& bindings,
                      const RingPtr& result_ring);
/// Substitution keeping the ring; images must live in f's ring.
Polynomial substitute(const Polynomial& f, const std::map<std::string, Polynomial>& bindings);

Rational evaluate(const Polynomial& f, const std::map<std::string, Rational>& point);
Rational evaluate(const Polynomial& f, std::span<const Rational> point);

std::strong_ordering compare(const MonomialOrder& order, const Monomial& a, const Monomial& b);

/// Multiplies by the lcm of the denominators and divides by the integer
/// content, making the leading coefficient (in canonical order) positive.
Polynomial primitive_part(const Polynomial& f);
/// Divides by the leading coefficient under `order`.
Polynomial make_monic(const Polynomial& f, const MonomialOrder& order);

/// Exact division f / g when g divides f; std::nullopt otherwise.
std::optional<Polynomial> divide_exact(const Polynomial& f, const Polynomial& g);

// Text format: "3*x^2*y - 7/2*z + 1".
Polynomial parse_polynomial(std::string_view text, const RingPtr& ring);
/// Infers the ring from variable names in order of first appearance.
Polynomial parse_polynomial(std::string_view text);
/// Variable names in order of first appearance.
std::vector<std::string> scan_variables(std::string_view text);
std::string to_string(const Polynomial& f);
std::string to_string(const Rational& q);
std::string to_string(const Monomial& m, const Ring& ring);

}  // namespace bmv
