#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bmv/polynomial.hpp"

namespace bmv {

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Square matrix of polynomials over one ring, stored row-major.
class PolyMatrix {
 public:
  PolyMatrix(RingPtr ring, std::size_t n);
  PolyMatrix(RingPtr ring, std::vector<std::vector<Polynomial>> rows);

  static PolyMatrix identity(const RingPtr& ring, std::size_t n);
  static PolyMatrix diagonal(const RingPtr& ring, const std::vector<Polynomial>& diag);
  /// Matrix of rational constants.
  static PolyMatrix constant(const RingPtr& ring, const std::vector<std::vector<Rational>>& rows);

  const RingPtr& ring() const { return ring_; }
  std::size_t size() const { return n_; }

  const Polynomial& operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  Polynomial& operator()(std::size_t i, std::size_t j) { return entries_[i * n_ + j]; }

  Polynomial trace() const;
  PolyMatrix transpose() const;
  bool is_symmetric() const;
  bool is_diagonal() const;

  PolyMatrix& operator+=(const PolyMatrix& other);
  PolyMatrix& operator-=(const PolyMatrix& other);
  PolyMatrix& operator*=(const Polynomial& c);

  friend PolyMatrix operator+(PolyMatrix a, const PolyMatrix& b) { return a += b; }
  friend PolyMatrix operator-(PolyMatrix a, const PolyMatrix& b) { return a -= b; }
  friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b);
  friend PolyMatrix operator*(PolyMatrix a, const Polynomial& c) { return a *= c; }

  bool operator==(const PolyMatrix& other) const;

  /// Entry-wise substitution into `result_ring`.
  PolyMatrix substitute(const std::map<std::string, Polynomial>& bindings, const RingPtr& result_ring) const;
  /// Entry-wise move into a ring that contains every variable of this one.
  PolyMatrix lift(const RingPtr& target) const;

  /// "e11, e12; e21, e22" with entries in polynomial text format.
  std::string to_string() const;

 private:
  void check_same(const PolyMatrix& other) const;

  RingPtr ring_;
  std::size_t n_;
  std::vector<Polynomial> entries_;
};

PolyMatrix parse_matrix(std::string_view text, const RingPtr& ring);
/// Ring inferred from the variables in order of first appearance.
PolyMatrix parse_matrix(std::string_view text);

/// Determinant by cofactor expansion (intended for n <= 4).
Polynomial determinant(const PolyMatrix& m);

/// Variable names p11, p12, ... for an n x n matrix (p1, p2, ... if diagonal).
std::vector<std::string> symbolic_names(std::string_view prefix, std::size_t n, bool diagonal_only = false);
/// Fully symbolic matrix; with `symmetric`, p_ji is p_ij for j > i.
PolyMatrix symbolic_matrix(const RingPtr& ring, std::string_view prefix, std::size_t n, bool symmetric = false);
PolyMatrix symbolic_diagonal(const RingPtr& ring, std::string_view prefix, std::size_t n);

/// All S_{l,k}(A,B) for l <= m, filled by the recurrence
///   S_{l+1,k+1} = S_{l,k} B + S_{l,k+1} A.
class HurwitzTable {
 public:
  HurwitzTable(const PolyMatrix& a, const PolyMatrix& b, unsigned m);

  unsigned length() const { return m_; }
  const PolyMatrix& at(unsigned length, unsigned k) const;

 private:
  unsigned m_;
  std::vector<std::vector<PolyMatrix>> cells_;  // cells_[l][k]
};

/// Sum of the C(m,k) words of length m in A and B with exactly k factors B.
PolyMatrix hurwitz(const PolyMatrix& a, const PolyMatrix& b, unsigned m, unsigned k);
/// Same sum by explicit enumeration of every word.
PolyMatrix hurwitz_bruteforce(const PolyMatrix& a, const PolyMatrix& b, unsigned m, unsigned k);

/// Tr S_{m,k}(A,B) for k = 0..m, from the recurrence table.
std::vector<Polynomial> trace_coefficients(const PolyMatrix& a, const PolyMatrix& b, unsigned m);
/// Same list read off Tr (A + tB)^m with t adjoined to the ring.
std::vector<Polynomial> trace_coefficients_expanded(const PolyMatrix& a, const PolyMatrix& b, unsigned m);

/// (m-k) Tr S_{m,k} - m Tr[A S_{m-1,k}]; zero when the trace identity holds.
Polynomial lemma1_difference(const PolyMatrix& a, const PolyMatrix& b, unsigned m, unsigned k);
bool verify_lemma1(const PolyMatrix& a, const PolyMatrix& b, unsigned m, unsigned k);

/// Tr S_{m,k}(A',B) - m/(m-k) Tr[D S_{m-1,k}(A',B)] as a polynomial.
/// A' = diag(1, a_1, ...), D = diag(1, d_1, ...) with d_i = 0 exactly where a_i = 0.
Polynomial theorem2_difference(const PolyMatrix& a_prime, const PolyMatrix& b, const PolyMatrix& d, unsigned m,
                               unsigned k);
/// Numeric version; all entries must be constants.
Rational verify_theorem2(const PolyMatrix& a_prime, const PolyMatrix& b, const PolyMatrix& d, unsigned m,
                         unsigned k);
/// D = diag(1, d_1, ...) with d_i = [a_i != 0] for a constant diagonal A'.
PolyMatrix stationarity_mask(const PolyMatrix& a_prime);

}  // namespace bmv
