#include "bmv/polynomial.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <boost/container_hash/hash.hpp>

namespace bmv {

// ---------------------------------------------------------------- Ring

Ring::Ring(std::vector<std::string> names) : names_(std::move(names)) {
  std::unordered_set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty()) throw VariableSetError("empty variable name");
    if (!seen.insert(n).second) throw VariableSetError("duplicate variable name: " + n);
  }
}

std::optional<std::size_t> Ring::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

std::size_t Ring::require(std::string_view name) const {
  auto i = index_of(name);
  if (!i) throw VariableSetError("unknown variable: " + std::string(name));
  return *i;
}

RingPtr make_ring(std::vector<std::string> names) {
  return std::make_shared<const Ring>(std::move(names));
}

RingPtr extend_ring(const RingPtr& base, const std::vector<std::string>& extra) {
  auto names = base->names();
  names.insert(names.end(), extra.begin(), extra.end());
  return make_ring(std::move(names));
}

bool same_ring(const RingPtr& a, const RingPtr& b) {
  return a == b || (a && b && *a == *b);
}

static void require_same_ring(const RingPtr& a, const RingPtr& b) {
  if (!same_ring(a, b)) throw VariableSetError("polynomials live in different rings");
}

// ---------------------------------------------------------------- Monomial

Monomial::Monomial(std::initializer_list<unsigned> exps) {
  for (auto e : exps) {
    exps_.push_back(0);
    set(exps_.size() - 1, e);
  }
}

Monomial::Monomial(std::span<const unsigned> exps) {
  for (auto e : exps) {
    exps_.push_back(0);
    set(exps_.size() - 1, e);
  }
}

void Monomial::set(std::size_t i, unsigned e) {
  if (e > 0xffff) throw std::overflow_error("exponent overflow");
  exps_[i] = static_cast<std::uint16_t>(e);
}

unsigned Monomial::total_degree() const {
  unsigned d = 0;
  for (auto e : exps_) d += e;
  return d;
}

bool Monomial::is_one() const {
  return std::all_of(exps_.begin(), exps_.end(), [](auto e) { return e == 0; });
}

bool Monomial::divides(const Monomial& other) const {
  for (std::size_t i = 0; i < exps_.size(); ++i)
    if (exps_[i] > other.exps_[i]) return false;
  return true;
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial r(*this);
  for (std::size_t i = 0; i < exps_.size(); ++i) r.set(i, unsigned(exps_[i]) + other.exps_[i]);
  return r;
}

Monomial Monomial::operator/(const Monomial& other) const {
  Monomial r(*this);
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    if (other.exps_[i] > exps_[i]) throw std::domain_error("monomial does not divide");
    r.exps_[i] = exps_[i] - other.exps_[i];
  }
  return r;
}

Monomial Monomial::lcm(const Monomial& other) const {
  Monomial r(*this);
  for (std::size_t i = 0; i < exps_.size(); ++i) r.exps_[i] = std::max(exps_[i], other.exps_[i]);
  return r;
}

Monomial Monomial::gcd(const Monomial& other) const {
  Monomial r(*this);
  for (std::size_t i = 0; i < exps_.size(); ++i) r.exps_[i] = std::min(exps_[i], other.exps_[i]);
  return r;
}

std::strong_ordering Monomial::operator<=>(const Monomial& other) const {
  return std::lexicographical_compare_three_way(exps_.begin(), exps_.end(), other.exps_.begin(),
                                                other.exps_.end());
}

std::size_t Monomial::hash() const {
  return boost::hash_range(exps_.begin(), exps_.end());
}

// ---------------------------------------------------------------- MonomialOrder

MonomialOrder::MonomialOrder(Kind kind, std::vector<std::size_t> rank, std::vector<std::size_t> blocks)
    : kind_(kind), rank_(std::move(rank)), block_sizes_(std::move(blocks)) {
  std::vector<std::size_t> sorted = rank_;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    if (sorted[i] != i) throw std::invalid_argument("monomial order rank is not a permutation");
}

static std::vector<std::size_t> identity_rank(std::size_t n) {
  std::vector<std::size_t> r(n);
  std::iota(r.begin(), r.end(), 0);
  return r;
}

MonomialOrder MonomialOrder::lex(std::size_t nvars) { return lex(identity_rank(nvars)); }
MonomialOrder MonomialOrder::grevlex(std::size_t nvars) { return grevlex(identity_rank(nvars)); }

MonomialOrder MonomialOrder::lex(std::vector<std::size_t> rank) {
  auto n = rank.size();
  return MonomialOrder(Kind::lex, std::move(rank), {n});
}

MonomialOrder MonomialOrder::grevlex(std::vector<std::size_t> rank) {
  auto n = rank.size();
  return MonomialOrder(Kind::grevlex, std::move(rank), {n});
}

MonomialOrder MonomialOrder::block(std::vector<std::vector<std::size_t>> blocks) {
  std::vector<std::size_t> rank, sizes;
  for (auto& b : blocks) {
    if (b.empty()) continue;
    rank.insert(rank.end(), b.begin(), b.end());
    sizes.push_back(b.size());
  }
  if (sizes.size() == 1) return grevlex(std::move(rank));
  return MonomialOrder(Kind::block, std::move(rank), std::move(sizes));
}

static std::strong_ordering grevlex_range(const Monomial& a, const Monomial& b,
                                          const std::size_t* rank, std::size_t len) {
  unsigned da = 0, db = 0;
  for (std::size_t i = 0; i < len; ++i) {
    da += a[rank[i]];
    db += b[rank[i]];
  }
  if (da != db) return da <=> db;
  for (std::size_t i = len; i-- > 0;) {
    auto ea = a[rank[i]], eb = b[rank[i]];
    if (ea != eb) return eb <=> ea;
  }
  return std::strong_ordering::equal;
}

std::strong_ordering MonomialOrder::compare(const Monomial& a, const Monomial& b) const {
  switch (kind_) {
    case Kind::lex:
      for (auto v : rank_) {
        if (a[v] != b[v]) return a[v] <=> b[v];
      }
      return std::strong_ordering::equal;
    case Kind::grevlex:
      return grevlex_range(a, b, rank_.data(), rank_.size());
    case Kind::block: {
      std::size_t offset = 0;
      for (auto len : block_sizes_) {
        auto c = grevlex_range(a, b, rank_.data() + offset, len);
        if (c != 0) return c;
        offset += len;
      }
      return std::strong_ordering::equal;
    }
  }
  return std::strong_ordering::equal;
}

std::vector<std::vector<unsigned>> MonomialOrder::weight_rows() const {
  const std::size_t n = rank_.size();
  std::vector<std::vector<unsigned>> rows;
  auto grevlex_rows = [&](std::size_t offset, std::size_t len) {
    // Row j weighs the first len - j variables of the block; comparing these
    // prefix degrees lexicographically is grevlex.
    for (std::size_t j = 0; j < len; ++j) {
      std::vector<unsigned> row(n, 0);
      for (std::size_t i = 0; i < len - j; ++i) row[rank_[offset + i]] = 1;
      rows.push_back(std::move(row));
    }
  };
  if (kind_ == Kind::lex) {
    for (auto v : rank_) {
      std::vector<unsigned> row(n, 0);
      row[v] = 1;
      rows.push_back(std::move(row));
    }
  } else {
    std::size_t offset = 0;
    for (auto len : block_sizes_) {
      grevlex_rows(offset, len);
      offset += len;
    }
  }
  return rows;
}

std::string MonomialOrder::describe(const Ring& ring) const {
  std::ostringstream os;
  os << (kind_ == Kind::lex ? "lex" : kind_ == Kind::grevlex ? "grevlex" : "block") << "(";
  std::size_t offset = 0, block = 0;
  for (std::size_t i = 0; i < rank_.size(); ++i) {
    if (kind_ == Kind::block && i == offset + block_sizes_[block] && i != 0) {
      os << " | ";
      offset += block_sizes_[block++];
    } else if (i != 0) {
      os << " > ";
    }
    os << ring.name(rank_[i]);
  }
  os << ")";
  return os.str();
}

std::strong_ordering compare(const MonomialOrder& order, const Monomial& a, const Monomial& b) {
  return order.compare(a, b);
}

// ---------------------------------------------------------------- Polynomial

namespace {

// Canonical storage order: descending grevlex in ring variable order.
bool canonical_before(const Monomial& a, const Monomial& b) {
  unsigned da = a.total_degree(), db = b.total_degree();
  if (da != db) return da > db;
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

std::strong_ordering canonical_cmp(const Monomial& a, const Monomial& b) {
  if (canonical_before(a, b)) return std::strong_ordering::less;
  if (canonical_before(b, a)) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace

Polynomial::Polynomial(RingPtr ring, const Rational& constant) : ring_(std::move(ring)) {
  if (constant != 0) terms_.push_back({Monomial(ring_->size()), constant});
}

Polynomial::Polynomial(RingPtr ring, std::vector<Term> terms) : ring_(std::move(ring)) {
  for (auto& t : terms)
    if (t.monomial.size() != ring_->size()) throw VariableSetError("monomial length does not match ring");
  normalize(std::move(terms));
}

void Polynomial::normalize(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return canonical_before(a.monomial, b.monomial); });
  terms_.clear();
  for (auto& t : terms) {
    if (!terms_.empty() && terms_.back().monomial == t.monomial) {
      terms_.back().coefficient += t.coefficient;
      if (terms_.back().coefficient == 0) terms_.pop_back();
    } else if (t.coefficient != 0) {
      terms_.push_back(std::move(t));
    }
  }
}

Polynomial Polynomial::variable(const RingPtr& ring, std::string_view name) {
  return variable(ring, ring->require(name));
}

Polynomial Polynomial::variable(const RingPtr& ring, std::size_t index) {
  Monomial m(ring->size());
  m.set(index, 1);
  return monomial(ring, std::move(m), 1);
}

Polynomial Polynomial::monomial(const RingPtr& ring, Monomial m, Rational c) {
  Polynomial p(ring);
  if (m.size() != ring->size()) throw VariableSetError("monomial length does not match ring");
  if (c != 0) p.terms_.push_back({std::move(m), std::move(c)});
  return p;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].monomial.is_one());
}

Rational Polynomial::constant_term() const {
  if (!terms_.empty() && terms_.back().monomial.is_one()) return terms_.back().coefficient;
  return 0;
}

unsigned Polynomial::total_degree() const {
  return terms_.empty() ? 0 : terms_.front().monomial.total_degree();
}

unsigned Polynomial::degree_in(std::size_t var) const {
  unsigned d = 0;
  for (const auto& t : terms_) d = std::max(d, t.monomial[var]);
  return d;
}

Rational Polynomial::coefficient(const Monomial& m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m, [](const Term& t, const Monomial& key) {
    return canonical_before(t.monomial, key);
  });
  if (it != terms_.end() && it->monomial == m) return it->coefficient;
  return 0;
}

const Term& Polynomial::leading_term(const MonomialOrder& order) const {
  if (terms_.empty()) throw std::domain_error("leading term of the zero polynomial");
  const Term* best = &terms_.front();
  for (const auto& t : terms_)
    if (order.compare(t.monomial, best->monomial) > 0) best = &t;
  return *best;
}

std::vector<std::size_t> Polynomial::support() const {
  std::vector<std::size_t> vars;
  for (std::size_t v = 0; v < ring_->size(); ++v)
    if (degree_in(v) > 0) vars.push_back(v);
  return vars;
}

Polynomial Polynomial::operator-() const {
  Polynomial r(*this);
  for (auto& t : r.terms_) t.coefficient = -t.coefficient;
  return r;
}

namespace {

std::vector<Term> merge_terms(const std::vector<Term>& a, const std::vector<Term>& b, bool subtract) {
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  auto i = a.begin(), j = b.begin();
  while (i != a.end() || j != b.end()) {
    std::strong_ordering c = std::strong_ordering::less;
    if (i == a.end()) c = std::strong_ordering::greater;
    else if (j != b.end()) c = canonical_cmp(i->monomial, j->monomial);
    if (c < 0) {
      out.push_back(*i++);
    } else if (c > 0) {
      out.push_back({j->monomial, subtract ? Rational(-j->coefficient) : j->coefficient});
      ++j;
    } else {
      Rational s = subtract ? Rational(i->coefficient - j->coefficient)
                            : Rational(i->coefficient + j->coefficient);
      if (s != 0) out.push_back({i->monomial, std::move(s)});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  require_same_ring(ring_, other.ring_);
  terms_ = merge_terms(terms_, other.terms_, false);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  require_same_ring(ring_, other.ring_);
  terms_ = merge_terms(terms_, other.terms_, true);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  require_same_ring(a.ring_, b.ring_);
  Polynomial r(a.ring_);
  if (a.is_zero() || b.is_zero()) return r;
  if (a.terms_.size() == 1 || b.terms_.size() == 1) {
    // Multiplying by a single term preserves the order of the other factor.
    const Polynomial& single = a.terms_.size() == 1 ? a : b;
    const Polynomial& other = a.terms_.size() == 1 ? b : a;
    const Term& s = single.terms_.front();
    r.terms_.reserve(other.terms_.size());
    for (const auto& t : other.terms_) r.terms_.push_back({t.monomial * s.monomial, t.coefficient * s.coefficient});
    return r;
  }
  std::unordered_map<Monomial, Rational, MonomialHash> acc;
  acc.reserve(a.terms_.size() * b.terms_.size() / 2 + 16);
  Rational prod;
  for (const auto& s : a.terms_) {
    for (const auto& t : b.terms_) {
      mpq_mul(prod.get_mpq_t(), s.coefficient.get_mpq_t(), t.coefficient.get_mpq_t());
      auto [it, inserted] = acc.try_emplace(s.monomial * t.monomial, prod);
      if (!inserted) it->second += prod;
    }
  }
  std::vector<Term> terms;
  terms.reserve(acc.size());
  for (auto& [m, c] : acc)
    if (c != 0) terms.push_back({m, std::move(c)});
  std::sort(terms.begin(), terms.end(),
            [](const Term& x, const Term& y) { return canonical_before(x.monomial, y.monomial); });
  r.terms_ = std::move(terms);
  return r;
}

Polynomial& Polynomial::operator*=(const Polynomial& other) {
  *this = *this * other;
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
  } else {
    for (auto& t : terms_) t.coefficient *= c;
  }
  return *this;
}

bool Polynomial::operator==(const Polynomial& other) const {
  if (!same_ring(ring_, other.ring_)) return false;
  if (terms_.size() != other.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (terms_[i].monomial != other.terms_[i].monomial || terms_[i].coefficient != other.terms_[i].coefficient)
      return false;
  return true;
}

Polynomial Polynomial::remap(const RingPtr& target, std::span<const std::size_t> index_map) const {
  if (index_map.size() != ring_->size()) throw VariableSetError("index map length does not match ring");
  std::vector<Term> terms;
  terms.reserve(terms_.size());
  for (const auto& t : terms_) {
    Monomial m(target->size());
    for (std::size_t i = 0; i < index_map.size(); ++i) {
      if (t.monomial[i] == 0) continue;
      m.set(index_map[i], m[index_map[i]] + t.monomial[i]);
    }
    terms.push_back({std::move(m), t.coefficient});
  }
  return Polynomial(target, std::move(terms));
}

std::string Polynomial::to_string() const { return bmv::to_string(*this); }

// ---------------------------------------------------------------- operations

Polynomial arith(const Polynomial& f, const Polynomial& g, ArithOp op) {
  switch (op) {
    case ArithOp::add: return f + g;
    case ArithOp::sub: return f - g;
    case ArithOp::mul: return f * g;
  }
  throw std::invalid_argument("unknown arithmetic operation");
}

Polynomial power(const Polynomial& f, unsigned exponent) {
  Polynomial result(f.ring(), Rational(1));
  Polynomial base = f;
  while (exponent > 0) {
    if (exponent & 1u) result *= base;
    exponent >>= 1;
    if (exponent > 0) base = base * base;
  }
  return result;
}

Polynomial differentiate(const Polynomial& f, std::string_view var) {
  return differentiate(f, f.ring()->require(var));
}

Polynomial differentiate(const Polynomial& f, std::size_t var) {
  if (var >= f.ring()->size()) throw VariableSetError("variable index out of range");
  std::vector<Term> terms;
  for (const auto& t : f.terms()) {
    unsigned e = t.monomial[var];
    if (e == 0) continue;
    Monomial m = t.monomial;
    m.set(var, e - 1);
    terms.push_back({std::move(m), t.coefficient * e});
  }
  return Polynomial(f.ring(), std::move(terms));
}

Polynomial substitute(const Polynomial& f, const std::map<std::string, Polynomial>& bindings,
                      const RingPtr& result_ring) {
  const Ring& ring = *f.ring();
  std::vector<std::optional<Polynomial>> image(ring.size());
  for (const auto& [name, value] : bindings) {
    auto idx = ring.require(name);
    if (!same_ring(value.ring(), result_ring))
      throw VariableSetError("binding for " + name + " is not in the result ring");
    image[idx] = value;
  }
  for (std::size_t i = 0; i < ring.size(); ++i)
    if (!image[i]) image[i] = Polynomial::variable(result_ring, ring.name(i));

  // Cache powers of each image as they are requested.
  std::vector<std::vector<Polynomial>> powers(ring.size());
  auto power_of = [&](std::size_t v, unsigned e) -> const Polynomial& {
    auto& cache = powers[v];
    if (cache.empty()) cache.emplace_back(result_ring, Rational(1));
    while (cache.size() <= e) cache.push_back(cache.back() * *image[v]);
    return cache[e];
  };

  std::vector<Term> expanded;
  for (const auto& t : f.terms()) {
    Polynomial term(result_ring, t.coefficient);
    for (std::size_t v = 0; v < ring.size(); ++v) {
      if (t.monomial[v] == 0) continue;
      term *= power_of(v, t.monomial[v]);
      if (term.is_zero()) break;
    }
    for (const auto& tt : term.terms()) expanded.push_back(tt);
  }
  return Polynomial(result_ring, std::move(expanded));
}

Polynomial substitute(const Polynomial& f, const std::map<std::string, Polynomial>& bindings) {
  return substitute(f, bindings, f.ring());
}

Rational evaluate(const Polynomial& f, std::span<const Rational> point) {
  const std::size_t n = f.ring()->size();
  if (point.size() != n) throw VariableSetError("evaluation point has wrong dimension");
  std::vector<std::vector<Rational>> powers(n);
  Rational sum = 0, term;
  for (const auto& t : f.terms()) {
    term = t.coefficient;
    for (std::size_t v = 0; v < n; ++v) {
      unsigned e = t.monomial[v];
      if (e == 0) continue;
      auto& cache = powers[v];
      if (cache.empty()) cache.push_back(1);
      while (cache.size() <= e) cache.push_back(cache.back() * point[v]);
      term *= cache[e];
    }
    sum += term;
  }
  return sum;
}

Rational evaluate(const Polynomial& f, const std::map<std::string, Rational>& point) {
  const Ring& ring = *f.ring();
  std::vector<Rational> values(ring.size());
  std::vector<bool> bound(ring.size(), false);
  for (const auto& [name, value] : point) {
    auto idx = ring.index_of(name);
    if (!idx) continue;
    values[*idx] = value;
    bound[*idx] = true;
  }
  for (auto v : f.support())
    if (!bound[v]) throw VariableSetError("unbound variable: " + ring.name(v));
  return evaluate(f, std::span<const Rational>(values));
}

Polynomial primitive_part(const Polynomial& f) {
  if (f.is_zero()) return f;
  Integer den = 1, num = 0;
  for (const auto& t : f.terms()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coefficient.get_den_mpz_t());
  for (const auto& t : f.terms()) {
    Integer v = t.coefficient.get_num() * (den / t.coefficient.get_den());
    mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), v.get_mpz_t());
  }
  if (f.terms().front().coefficient < 0) num = -num;
  return f * Rational(den, num);
}

Polynomial make_monic(const Polynomial& f, const MonomialOrder& order) {
  if (f.is_zero()) return f;
  Rational lc = f.leading_term(order).coefficient;
  return f * Rational(1 / lc);
}

std::optional<Polynomial> divide_exact(const Polynomial& f, const Polynomial& g) {
  require_same_ring(f.ring(), g.ring());
  if (g.is_zero()) throw std::domain_error("division by the zero polynomial");
  // Canonical order is a monomial order, so its leading term drives division.
  Polynomial rem = f, quot(f.ring());
  const Term& lg = g.terms().front();
  while (!rem.is_zero()) {
    const Term& lt = rem.terms().front();
    if (!lg.monomial.divides(lt.monomial)) return std::nullopt;
    auto q = Polynomial::monomial(f.ring(), lt.monomial / lg.monomial, lt.coefficient / lg.coefficient);
    quot += q;
    rem -= q * g;
  }
  return quot;
}

// ---------------------------------------------------------------- text format

std::string to_string(const Rational& q) {
  return q.get_str();
}

std::string to_string(const Monomial& m, const Ring& ring) {
  std::string out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += ring.name(i);
    if (m[i] > 1) out += '^' + std::to_string(m[i]);
  }
  return out.empty() ? "1" : out;
}

std::string to_string(const Polynomial& f) {
  if (f.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : f.terms()) {
    Rational mag = abs(t.coefficient);
    bool neg = t.coefficient < 0;
    if (first) {
      if (neg) out += '-';
    } else {
      out += neg ? " - " : " + ";
    }
    first = false;
    if (t.monomial.is_one()) {
      out += mag.get_str();
    } else {
      if (mag != 1) out += mag.get_str() + "*";
      out += to_string(t.monomial, *f.ring());
    }
  }
  return out;
}

namespace {

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  void skip_space() {
    while (pos_ < text_.size()) {
      unsigned char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++pos_;
      } else {
        break;
      }
    }
  }
  bool done() {
    skip_space();
    return pos_ >= text_.size();
  }
  // Returns +1, -1 or 0 when no sign follows. Accepts U+2212 as minus.
  int sign() {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '+') {
      ++pos_;
      return 1;
    }
    if (pos_ < text_.size() && text_[pos_] == '-') {
      ++pos_;
      return -1;
    }
    if (text_.substr(pos_, 3) == "\xE2\x88\x92") {
      pos_ += 3;
      return -1;
    }
    return 0;
  }
  bool peek(char c) {
    skip_space();
    return pos_ < text_.size() && text_[pos_] == c;
  }
  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }
  bool peek_digit() {
    skip_space();
    return pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]));
  }
  bool peek_ident() {
    skip_space();
    return pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_');
  }
  std::string digits() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected digits");
    return std::string(text_.substr(start, pos_ - start));
  }
  std::string ident() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (start == pos_) fail("expected variable name");
    return std::string(text_.substr(start, pos_ - start));
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at offset " + std::to_string(pos_) + " in \"" + std::string(text_) + "\"");
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

template <typename OnVariable>
std::vector<std::pair<Rational, std::vector<std::pair<std::string, unsigned>>>> parse_terms(
    std::string_view text, OnVariable&& on_variable) {
  Lexer lx(text);
  std::vector<std::pair<Rational, std::vector<std::pair<std::string, unsigned>>>> out;
  if (lx.done()) lx.fail("empty polynomial");
  bool first = true;
  while (!lx.done()) {
    int s = lx.sign();
    if (s == 0) {
      if (!first) lx.fail("expected '+' or '-'");
      s = 1;
    }
    first = false;
    Rational coef = 1;
    std::vector<std::pair<std::string, unsigned>> factors;
    bool need_factor = true;
    if (lx.peek_digit()) {
      Integer num(lx.digits());
      Integer den = 1;
      if (lx.accept('/')) den = Integer(lx.digits());
      if (den == 0) lx.fail("zero denominator");
      coef = Rational(num, den);
      coef.canonicalize();
      need_factor = lx.accept('*');
    }
    while (need_factor) {
      if (!lx.peek_ident()) lx.fail("expected variable");
      std::string name = lx.ident();
      unsigned e = 1;
      if (lx.accept('^')) {
        auto d = lx.digits();
        if (d.size() > 5) lx.fail("exponent too large");
        e = static_cast<unsigned>(std::stoul(d));
      }
      on_variable(name);
      factors.emplace_back(std::move(name), e);
      need_factor = lx.accept('*');
    }
    if (s < 0) coef = -coef;
    out.emplace_back(std::move(coef), std::move(factors));
  }
  return out;
}

}  // namespace

Polynomial parse_polynomial(std::string_view text, const RingPtr& ring) {
  auto raw = parse_terms(text, [&](const std::string& name) { ring->require(name); });
  std::vector<Term> terms;
  for (auto& [c, factors] : raw) {
    Monomial m(ring->size());
    for (auto& [name, e] : factors) {
      auto idx = ring->require(name);
      m.set(idx, m[idx] + e);
    }
    terms.push_back({std::move(m), std::move(c)});
  }
  return Polynomial(ring, std::move(terms));
}

std::vector<std::string> scan_variables(std::string_view text) {
  std::vector<std::string> names;
  parse_terms(text, [&](const std::string& name) {
    if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
  });
  return names;
}

Polynomial parse_polynomial(std::string_view text) {
  return parse_polynomial(text, make_ring(scan_variables(text)));
}

}  // namespace bmv
