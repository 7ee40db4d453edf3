#include "bmv/matrix.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace bmv {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::vector<std::string>> split_matrix(std::string_view text) {
  std::vector<std::vector<std::string>> cells;
  for (const auto& row : split(text, ';')) cells.push_back(split(row, ','));
  const std::size_t n = cells.size();
  for (const auto& row : cells)
    if (row.size() != n) throw ParseError("matrix text is not square");
  return cells;
}

}  // namespace

PolyMatrix::PolyMatrix(RingPtr ring, std::size_t n) : ring_(std::move(ring)), n_(n) {
  entries_.assign(n * n, Polynomial(ring_));
}

PolyMatrix::PolyMatrix(RingPtr ring, std::vector<std::vector<Polynomial>> rows)
    : PolyMatrix(std::move(ring), rows.size()) {
  for (std::size_t i = 0; i < n_; ++i) {
    if (rows[i].size() != n_) throw DimensionError("matrix rows are not square");
    for (std::size_t j = 0; j < n_; ++j) {
      if (!same_ring(rows[i][j].ring(), ring_)) throw VariableSetError("matrix entry in a different ring");
      (*this)(i, j) = std::move(rows[i][j]);
    }
  }
}

PolyMatrix PolyMatrix::identity(const RingPtr& ring, std::size_t n) {
  PolyMatrix m(ring, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Polynomial(ring, Rational(1));
  return m;
}

PolyMatrix PolyMatrix::diagonal(const RingPtr& ring, const std::vector<Polynomial>& diag) {
  PolyMatrix m(ring, diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

PolyMatrix PolyMatrix::constant(const RingPtr& ring, const std::vector<std::vector<Rational>>& rows) {
  PolyMatrix m(ring, rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw DimensionError("matrix rows are not square");
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = Polynomial(ring, rows[i][j]);
  }
  return m;
}

Polynomial PolyMatrix::trace() const {
  Polynomial t(ring_);
  for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

PolyMatrix PolyMatrix::transpose() const {
  PolyMatrix t(ring_, n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool PolyMatrix::is_symmetric() const {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if (!((*this)(i, j) == (*this)(j, i))) return false;
  return true;
}

bool PolyMatrix::is_diagonal() const {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      if (i != j && !(*this)(i, j).is_zero()) return false;
  return true;
}

void PolyMatrix::check_same(const PolyMatrix& other) const {
  if (n_ != other.n_) throw DimensionError("matrix dimensions differ");
  if (!same_ring(ring_, other.ring_)) throw VariableSetError("matrices live in different rings");
}

PolyMatrix& PolyMatrix::operator+=(const PolyMatrix& other) {
  check_same(other);
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

PolyMatrix& PolyMatrix::operator-=(const PolyMatrix& other) {
  check_same(other);
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

PolyMatrix& PolyMatrix::operator*=(const Polynomial& c) {
  for (auto& e : entries_) e = e * c;
  return *this;
}

PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
  a.check_same(b);
  const std::size_t n = a.n_;
  PolyMatrix c(a.ring_, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Polynomial sum(a.ring_);
      for (std::size_t l = 0; l < n; ++l) {
        const auto& x = a(i, l);
        const auto& y = b(l, j);
        if (x.is_zero() || y.is_zero()) continue;
        sum += x * y;
      }
      c(i, j) = std::move(sum);
    }
  return c;
}

bool PolyMatrix::operator==(const PolyMatrix& other) const {
  return n_ == other.n_ && same_ring(ring_, other.ring_) && entries_ == other.entries_;
}

PolyMatrix PolyMatrix::substitute(const std::map<std::string, Polynomial>& bindings,
                                  const RingPtr& result_ring) const {
  PolyMatrix out(result_ring, n_);
  for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = bmv::substitute(entries_[i], bindings, result_ring);
  return out;
}

PolyMatrix PolyMatrix::lift(const RingPtr& target) const {
  std::vector<std::size_t> map(ring_->size());
  for (std::size_t v = 0; v < map.size(); ++v) map[v] = target->require(ring_->name(v));
  PolyMatrix out(target, n_);
  for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = entries_[i].remap(target, map);
  return out;
}

std::string PolyMatrix::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < n_; ++i) {
    if (i) os << "; ";
    for (std::size_t j = 0; j < n_; ++j) {
      if (j) os << ", ";
      os << (*this)(i, j).to_string();
    }
  }
  return os.str();
}

PolyMatrix parse_matrix(std::string_view text, const RingPtr& ring) {
  auto cells = split_matrix(text);
  PolyMatrix m(ring, cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i)
    for (std::size_t j = 0; j < cells.size(); ++j) m(i, j) = parse_polynomial(cells[i][j], ring);
  return m;
}

PolyMatrix parse_matrix(std::string_view text) {
  std::vector<std::string> names;
  for (const auto& row : split_matrix(text))
    for (const auto& cell : row)
      for (auto& v : scan_variables(cell))
        if (std::find(names.begin(), names.end(), v) == names.end()) names.push_back(v);
  return parse_matrix(text, make_ring(names));
}

Polynomial determinant(const PolyMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) return Polynomial(m.ring(), Rational(1));
  if (n == 1) return m(0, 0);
  Polynomial det(m.ring());
  for (std::size_t j = 0; j < n; ++j) {
    if (m(0, j).is_zero()) continue;
    PolyMatrix minor(m.ring(), n - 1);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t c = 0, cc = 0; c < n; ++c)
        if (c != j) minor(i - 1, cc++) = m(i, c);
    Polynomial term = m(0, j) * determinant(minor);
    if (j % 2) det -= term;
    else det += term;
  }
  return det;
}

std::vector<std::string> symbolic_names(std::string_view prefix, std::size_t n, bool diagonal_only) {
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= n; ++i) {
    if (diagonal_only) {
      names.push_back(std::string(prefix) + std::to_string(i));
      continue;
    }
    for (std::size_t j = 1; j <= n; ++j) names.push_back(std::string(prefix) + std::to_string(i) + std::to_string(j));
  }
  return names;
}

PolyMatrix symbolic_matrix(const RingPtr& ring, std::string_view prefix, std::size_t n, bool symmetric) {
  PolyMatrix m(ring, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t r = i, c = j;
      if (symmetric && r > c) std::swap(r, c);
      m(i, j) = Polynomial::variable(ring, std::string(prefix) + std::to_string(r + 1) + std::to_string(c + 1));
    }
  return m;
}

PolyMatrix symbolic_diagonal(const RingPtr& ring, std::string_view prefix, std::size_t n) {
  std::vector<Polynomial> d;
  for (std::size_t i = 0; i < n; ++i) d.push_back(Polynomial::variable(ring, std::string(prefix) + std::to_string(i + 1)));
  return PolyMatrix::diagonal(ring, d);
}

HurwitzTable::HurwitzTable(const PolyMatrix& a, const PolyMatrix& b, unsigned m) : m_(m) {
  if (a.size() != b.size()) throw DimensionError("A and B differ in dimension");
  if (!same_ring(a.ring(), b.ring())) throw VariableSetError("A and B live in different rings");
  cells_.resize(m + 1);
  cells_[0].push_back(PolyMatrix::identity(a.ring(), a.size()));
  for (unsigned l = 0; l < m; ++l) {
    auto& next = cells_[l + 1];
    next.reserve(l + 2);
    next.push_back(cells_[l][0] * a);
    for (unsigned k = 0; k < l; ++k) next.push_back(cells_[l][k] * b + cells_[l][k + 1] * a);
    next.push_back(cells_[l][l] * b);
  }
}

const PolyMatrix& HurwitzTable::at(unsigned length, unsigned k) const {
  if (length > m_ || k > length) throw std::out_of_range("Hurwitz index out of range");
  return cells_[length][k];
}

namespace {

void check_args(const PolyMatrix& a, const PolyMatrix& b, unsigned m, unsigned k) {
  if (a.size() != b.size()) throw DimensionError("A and B differ in dimension");
  if (!same_ring(a.ring(), b.ring())) throw VariableSetError("A and B live in different rings");
  if (k > m) throw std::out_of_range("k must lie in [0, m]");
}

}  // namespace

PolyMatrix hurwitz(const PolyMatrix& a, const PolyMatrix& b, unsigned m, unsigned k) {
  check_args(a, b, m, k);
  return HurwitzTable(a, b, m).at(m, k);
}

PolyMatrix hurwitz_bruteforce(const PolyMatrix& a, const PolyMatrix& b, unsigned m, unsigned k) {
  check_args(a, b, m, k);
  if (m > 20) throw std::out_of_range("word enumeration limited to m <= 20");
  PolyMatrix sum(a.ring(), a.size());
  for (std::uint32_t word = 0; word < (1u << m); ++word) {
    if (static_cast<unsigned>(std::popcount(word)) != k) continue;
    PolyMatrix prod = PolyMatrix::identity(a.ring(), a.size());
    for (unsigned pos = 0; pos < m; ++pos) prod = prod * ((word >> pos) & 1u ? b : a);
    sum += prod;
  }
  return sum;
}

std::vector<Polynomial> trace_coefficients(const PolyMatrix& a, const PolyMatrix& b, unsigned m) {
  check_args(a, b, m, 0);
  HurwitzTable table(a, b, m);
  std::vector<Polynomial> out;
  for (unsigned k = 0; k <= m; ++k) out.push_back(table.at(m, k).trace());
  return out;
}

std::vector<Polynomial> trace_coefficients_expanded(const PolyMatrix& a, const PolyMatrix& b, unsigned m) {
  check_args(a, b, m, 0);
  std::string t = "t";
  while (a.ring()->index_of(t)) t += "_";
  auto ring = extend_ring(a.ring(), {t});
  const std::size_t ti = ring->size() - 1;
  PolyMatrix sum = a.lift(ring) + b.lift(ring) * Polynomial::variable(ring, ti);
  PolyMatrix p = PolyMatrix::identity(ring, a.size());
  for (unsigned i = 0; i < m; ++i) p = p * sum;
  Polynomial tr = p.trace();

  std::vector<std::vector<Term>> buckets(m + 1);
  for (const auto& term : tr.terms()) {
    Monomial mono(a.ring()->size());
    for (std::size_t v = 0; v < mono.size(); ++v) mono.set(v, term.monomial[v]);
    buckets.at(term.monomial[ti]).push_back({mono, term.coefficient});
  }
  std::vector<Polynomial> out;
  for (auto& bucket : buckets) out.emplace_back(a.ring(), std::move(bucket));
  return out;
}

Polynomial lemma1_difference(const PolyMatrix& a, const PolyMatrix& b, unsigned m, unsigned k) {
  check_args(a, b, m, k);
  if (k >= m) throw std::domain_error("trace identity needs k < m");
  HurwitzTable table(a, b, m);
  Polynomial lhs = table.at(m, k).trace() * Rational(m - k);
  Polynomial rhs = (a * table.at(m - 1, k)).trace() * Rational(m);
  return lhs - rhs;
}

bool verify_lemma1(const PolyMatrix& a, const PolyMatrix& b, unsigned m, unsigned k) {
  return lemma1_difference(a, b, m, k).is_zero();
}

namespace {

void check_theorem2_shape(const PolyMatrix& a_prime, const PolyMatrix& d) {
  const std::size_t n = a_prime.size();
  if (d.size() != n) throw DimensionError("D and A' differ in dimension");
  if (!a_prime.is_diagonal() || !d.is_diagonal()) throw std::invalid_argument("A' and D must be diagonal");
  if (!(a_prime(0, 0) == Polynomial(a_prime.ring(), Rational(1))) || !(d(0, 0) == Polynomial(d.ring(), Rational(1))))
    throw std::invalid_argument("A' and D must have leading entry 1");
  for (std::size_t i = 1; i < n; ++i) {
    const auto& di = d(i, i);
    if (!di.is_constant() || (di.constant_term() != 0 && di.constant_term() != 1))
      throw std::invalid_argument("D entries must be 0 or 1");
    const bool a_zero = a_prime(i, i).is_zero();
    if (a_zero != di.is_zero()) throw std::invalid_argument("D must vanish exactly where A' does");
  }
}

}  // namespace

Polynomial theorem2_difference(const PolyMatrix& a_prime, const PolyMatrix& b, const PolyMatrix& d, unsigned m,
                               unsigned k) {
  check_args(a_prime, b, m, k);
  if (k >= m) throw std::domain_error("stationarity identity needs k < m");
  check_theorem2_shape(a_prime, d);
  HurwitzTable table(a_prime, b, m);
  Polynomial lhs = table.at(m, k).trace();
  Polynomial rhs = (d * table.at(m - 1, k)).trace() * (Rational(m) / Rational(m - k));
  return lhs - rhs;
}

Rational verify_theorem2(const PolyMatrix& a_prime, const PolyMatrix& b, const PolyMatrix& d, unsigned m,
                         unsigned k) {
  Polynomial diff = theorem2_difference(a_prime, b, d, m, k);
  if (!diff.is_constant()) throw std::invalid_argument("numeric residual needs constant matrices");
  return diff.constant_term();
}

PolyMatrix stationarity_mask(const PolyMatrix& a_prime) {
  if (!a_prime.is_diagonal()) throw std::invalid_argument("A' must be diagonal");
  std::vector<Polynomial> diag;
  for (std::size_t i = 0; i < a_prime.size(); ++i)
    diag.emplace_back(a_prime.ring(), Rational(i == 0 || !a_prime(i, i).is_zero() ? 1 : 0));
  return PolyMatrix::diagonal(a_prime.ring(), diag);
}

}  // namespace bmv
