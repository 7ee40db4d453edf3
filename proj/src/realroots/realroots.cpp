#include "bmv/realroots.hpp"

#include <sstream>
#include <stdexcept>

namespace bmv {

UniPoly::UniPoly(std::vector<Rational> coefficients) : c_(std::move(coefficients)) {
  for (auto& c : c_) c.canonicalize();
  trim();
}

void UniPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

UniPoly UniPoly::from_polynomial(const Polynomial& f) {
  auto support = f.support();
  if (support.size() > 1) throw VariableSetError("polynomial is not univariate: " + f.to_string());
  std::vector<Rational> c;
  for (const auto& t : f.terms()) {
    const unsigned d = support.empty() ? 0 : t.monomial[support[0]];
    if (c.size() <= d) c.resize(d + 1);
    c[d] = t.coefficient;
  }
  return UniPoly(std::move(c));
}

Polynomial UniPoly::to_polynomial(const RingPtr& ring, std::size_t var) const {
  std::vector<Term> terms;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    Monomial m(ring->size());
    m.set(var, static_cast<unsigned>(i));
    terms.push_back({m, c_[i]});
  }
  return Polynomial(ring, std::move(terms));
}

Rational UniPoly::operator()(const Rational& x) const {
  Rational acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

int UniPoly::sign_at(const Rational& x) const { return sgn((*this)(x)); }

double UniPoly::approx(double x) const {
  double acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + it->get_d();
  return acc;
}

UniPoly UniPoly::derivative() const {
  std::vector<Rational> d;
  for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * static_cast<unsigned long>(i));
  return UniPoly(std::move(d));
}

UniPoly UniPoly::monic() const {
  if (is_zero()) return *this;
  Rational lc = leading();
  std::vector<Rational> c = c_;
  for (auto& x : c) x /= lc;
  return UniPoly(std::move(c));
}

UniPoly operator+(const UniPoly& a, const UniPoly& b) {
  std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] + b[i];
  return UniPoly(std::move(c));
}

UniPoly operator-(const UniPoly& a, const UniPoly& b) {
  std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] - b[i];
  return UniPoly(std::move(c));
}

UniPoly operator*(const UniPoly& a, const UniPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return UniPoly(std::move(c));
}

UniPoly operator*(const Rational& k, const UniPoly& a) {
  std::vector<Rational> c = a.c_;
  for (auto& x : c) x *= k;
  return UniPoly(std::move(c));
}

std::string UniPoly::to_string(std::string_view var) const {
  auto ring = make_ring({std::string(var)});
  return to_polynomial(ring, 0).to_string();
}

DivMod divmod(const UniPoly& a, const UniPoly& b) {
  if (b.is_zero()) throw std::domain_error("division by the zero polynomial");
  std::vector<Rational> r = a.coefficients();
  const int db = b.degree();
  std::vector<Rational> q(a.degree() >= db ? a.degree() - db + 1 : 0);
  const Rational& lb = b.leading();
  for (int i = a.degree(); i >= db; --i) {
    if (r[i] == 0) continue;
    Rational f = r[i] / lb;
    q[i - db] = f;
    for (int j = 0; j <= db; ++j) r[i - db + j] -= f * b[j];
  }
  return {UniPoly(std::move(q)), UniPoly(std::move(r))};
}

UniPoly gcd(const UniPoly& a, const UniPoly& b) {
  UniPoly x = a, y = b;
  while (!y.is_zero()) {
    UniPoly r = divmod(x, y).remainder;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

UniPoly squarefree_part(const UniPoly& p) {
  if (p.is_zero()) throw std::domain_error("square-free part of the zero polynomial");
  if (p.degree() == 0) return p.monic();
  return divmod(p, gcd(p, p.derivative())).quotient.monic();
}

namespace {

using IntVec = std::vector<mpz_class>;

// p = scale * prim, prim primitive with positive leading coefficient.
void split_content(const UniPoly& p, Rational& scale, IntVec& prim) {
  mpz_class den = 1;
  for (const auto& c : p.coefficients()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  prim.clear();
  mpz_class g = 0;
  for (const auto& c : p.coefficients()) {
    mpz_class v = c.get_num() * (den / c.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    prim.push_back(v);
  }
  if (prim.back() < 0) g = -g;
  for (auto& v : prim) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
  scale = Rational(g, den);
  scale.canonicalize();
}

// lc(b)^(deg a - deg b + 1) * a mod b.
IntVec pseudo_remainder(IntVec a, const IntVec& b) {
  const std::size_t db = b.size() - 1;
  const mpz_class& lb = b.back();
  while (!a.empty() && a.size() - 1 >= db) {
    const std::size_t shift = a.size() - 1 - db;
    mpz_class lead = a.back();
    for (auto& c : a) c *= lb;
    for (std::size_t j = 0; j <= db; ++j) a[shift + j] -= lead * b[j];
    a.pop_back();
    while (!a.empty() && a.back() == 0) a.pop_back();
  }
  return a;
}

}  // namespace

SturmChain sturm_sequence(const UniPoly& p) {
  if (p.is_zero()) throw std::domain_error("Sturm sequence of the zero polynomial");
  SturmChain chain;
  chain.sequence.push_back(p);
  if (p.degree() == 0) return chain;
  chain.sequence.push_back(p.derivative());

  std::vector<Rational> scales(2);
  std::vector<IntVec> prims(2);
  split_content(chain.sequence[0], scales[0], prims[0]);
  split_content(chain.sequence[1], scales[1], prims[1]);
  for (;;) {
    const IntVec& f = prims[prims.size() - 2];
    const IntVec& g = prims.back();
    if (g.size() == 1) break;
    IntVec r = pseudo_remainder(f, g);
    if (r.empty()) break;
    // rem(F, G) = prem(F, G) / lc(G)^d
    mpz_class lc_pow;
    mpz_pow_ui(lc_pow.get_mpz_t(), g.back().get_mpz_t(), f.size() - g.size() + 1);
    std::vector<Rational> rc(r.begin(), r.end());
    Rational s_r;
    IntVec prim_r;
    split_content(UniPoly(rc), s_r, prim_r);
    Rational scale = -scales[scales.size() - 2] * s_r / Rational(lc_pow);
    scale.canonicalize();
    scales.push_back(scale);
    prims.push_back(prim_r);
    std::vector<Rational> exact;
    for (const auto& c : prim_r) exact.push_back(scale * Rational(c));
    chain.sequence.emplace_back(std::move(exact));
  }
  return chain;
}

unsigned sign_variations(const SturmChain& chain, const Rational& x) {
  unsigned changes = 0;
  int last = 0;
  for (const auto& f : chain.sequence) {
    int s = f.sign_at(x);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

unsigned count_roots_open(const UniPoly& p, const Rational& a, const Rational& b) {
  if (!(a < b)) throw std::invalid_argument("interval must satisfy a < b");
  UniPoly q = squarefree_part(p);
  if (q.sign_at(a) == 0 || q.sign_at(b) == 0) throw std::invalid_argument("polynomial vanishes at an interval endpoint");
  SturmChain chain = sturm_sequence(q);
  return sign_variations(chain, a) - sign_variations(chain, b);
}

namespace {

std::vector<int> signs(const SturmChain& chain, const Rational& x) {
  std::vector<int> s;
  for (const auto& f : chain.sequence) s.push_back(f.sign_at(x));
  return s;
}

}  // namespace

UnitIntervalCertificate no_roots_in_unit_interval(const UniPoly& p) {
  if (p.is_zero()) throw std::domain_error("zero polynomial has every point as a root");
  UnitIntervalCertificate cert;
  cert.input = p;
  cert.squarefree = squarefree_part(p);
  UniPoly q = cert.squarefree;
  if (q.sign_at(0) == 0) {
    cert.root_at_zero = true;
    q = divmod(q, UniPoly({0, 1})).quotient;
  }
  if (q.sign_at(1) == 0) {
    cert.root_at_one = true;
    q = divmod(q, UniPoly({-1, 1})).quotient;
  }
  cert.deflated = q;
  cert.chain = sturm_sequence(q);
  cert.signs_at_zero = signs(cert.chain, 0);
  cert.signs_at_one = signs(cert.chain, 1);
  cert.variations_zero = sign_variations(cert.chain, 0);
  cert.variations_one = sign_variations(cert.chain, 1);
  cert.roots = cert.variations_zero - cert.variations_one;
  return cert;
}

bool UnitIntervalCertificate::recheck() const {
  if (input.is_zero()) return false;
  UnitIntervalCertificate again = no_roots_in_unit_interval(input);
  return again.deflated == deflated && again.chain.sequence == chain.sequence && again.roots == roots &&
         again.signs_at_zero == signs_at_zero && again.signs_at_one == signs_at_one;
}

std::string UnitIntervalCertificate::to_string(std::string_view var) const {
  std::ostringstream os;
  os << "input: " << input.to_string(var) << "\n";
  os << "squarefree: " << squarefree.to_string(var) << "\n";
  os << "root_at_0: " << (root_at_zero ? "yes" : "no") << "\n";
  os << "root_at_1: " << (root_at_one ? "yes" : "no") << "\n";
  os << "chain_length: " << chain.sequence.size() << "\n";
  for (std::size_t i = 0; i < chain.sequence.size(); ++i)
    os << "chain[" << i << "]: " << chain.sequence[i].to_string(var) << "\n";
  auto join = [](const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
    return s;
  };
  os << "signs_at_0: " << join(signs_at_zero) << "\n";
  os << "signs_at_1: " << join(signs_at_one) << "\n";
  os << "variations: " << variations_zero << " " << variations_one << "\n";
  os << "roots_in_open_interval: " << roots << "\n";
  return os.str();
}

UniPoly positive_to_unit(const UniPoly& f) {
  if (f.is_zero()) return f;
  const auto d = static_cast<std::size_t>(f.degree());
  const UniPoly t(std::vector<Rational>{0, 1}), one_minus_t(std::vector<Rational>{1, -1});
  std::vector<UniPoly> t_pow{UniPoly(std::vector<Rational>{1})}, s_pow{UniPoly(std::vector<Rational>{1})};
  for (std::size_t i = 1; i <= d; ++i) {
    t_pow.push_back(t_pow.back() * t);
    s_pow.push_back(s_pow.back() * one_minus_t);
  }
  UniPoly out;
  for (std::size_t i = 0; i <= d; ++i)
    if (f[i] != 0) out = out + f[i] * (t_pow[i] * s_pow[d - i]);
  return out;
}

UniPoly parse_unipoly(std::string_view text) { return UniPoly::from_polynomial(parse_polynomial(text)); }

}  // namespace bmv
