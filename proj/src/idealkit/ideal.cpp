#include "bmv/ideal.hpp"

#include <algorithm>
#include <sstream>

#include "engine.hpp"

namespace bmv {

namespace {

[[noreturn]] void rethrow_exhausted(const gb::Exhausted& e, const gb::Context& ctx, const RingPtr& ring) {
  std::vector<Polynomial> partial;
  for (const auto& p : e.partial) partial.push_back(ctx.to_polynomial(p, ring, true));
  throw BudgetExceeded(e.what, e.stats, std::move(partial));
}

std::string fresh_name(const Ring& ring, const std::string& stem) {
  std::string name = stem;
  for (int k = 0; ring.index_of(name); ++k) name = stem + std::to_string(k);
  return name;
}

// Copies of `ideal`'s generators in `target`, which starts with ideal's ring.
std::vector<Polynomial> lift(const Ideal& ideal, const RingPtr& target) {
  std::vector<std::size_t> map(ideal.ring()->size());
  for (std::size_t i = 0; i < map.size(); ++i) map[i] = i;
  std::vector<Polynomial> out;
  for (const auto& g : ideal.generators()) out.push_back(g.remap(target, map));
  return out;
}

// Maps polynomials free of the trailing variables back into `base`.
Polynomial drop_trailing(const Polynomial& f, const RingPtr& base) {
  std::vector<Term> terms;
  for (const auto& t : f.terms()) {
    Monomial m(base->size());
    for (std::size_t i = 0; i < base->size(); ++i) m.set(i, t.monomial[i]);
    terms.push_back({std::move(m), t.coefficient});
  }
  return Polynomial(base, std::move(terms));
}

bool free_of(const Polynomial& f, std::size_t first_var) {
  for (const auto& t : f.terms())
    for (std::size_t v = first_var; v < t.monomial.size(); ++v)
      if (t.monomial[v]) return false;
  return true;
}

std::vector<std::size_t> range(std::size_t from, std::size_t to) {
  std::vector<std::size_t> r;
  for (std::size_t i = from; i < to; ++i) r.push_back(i);
  return r;
}

// Variables dividing every term of g, plus the auxiliary w at index aux - 1:
// all of them are units modulo <I, 1 - w*g>.
std::vector<std::size_t> monomial_factors(const Polynomial& g, std::size_t aux) {
  std::vector<std::size_t> vars;
  for (std::size_t v = 0; v < g.ring()->size(); ++v) {
    bool all = std::all_of(g.terms().begin(), g.terms().end(), [&](const Term& t) { return t.monomial[v] > 0; });
    if (all) vars.push_back(v);
  }
  vars.push_back(aux - 1);
  return vars;
}

}  // namespace

std::string EngineStats::summary() const {
  std::ostringstream os;
  os << "pairs_processed=" << pairs_processed << " pairs_created=" << pairs_created
     << " product_criterion=" << product_criterion << " chain_criterion=" << chain_criterion
     << " zero_reductions=" << zero_reductions << " reduction_steps=" << reduction_steps
     << " max_basis=" << max_basis << " max_degree=" << max_degree << " max_terms=" << max_terms;
  return os.str();
}

Ideal::Ideal(RingPtr ring, std::vector<Polynomial> generators) : ring_(std::move(ring)) {
  for (auto& g : generators) add(std::move(g));
}

void Ideal::add(Polynomial f) {
  if (!same_ring(f.ring(), ring_)) throw VariableSetError("generator is not in the ideal's ring");
  if (!f.is_zero()) generators_.push_back(std::move(f));
}

bool GroebnerBasis::is_unit() const {
  return basis.size() == 1 && basis.front().is_constant() && !basis.front().is_zero();
}

MonomialOrder default_order(const Ring& ring) { return MonomialOrder::grevlex(ring.size()); }

Polynomial normal_form(const Polynomial& f, const std::vector<Polynomial>& divisors, const MonomialOrder& order) {
  const RingPtr& ring = f.ring();
  gb::Context ctx(ring->size(), order);
  std::vector<gb::IPoly> store;
  store.reserve(divisors.size());
  for (const auto& d : divisors) {
    if (!same_ring(d.ring(), ring)) throw VariableSetError("divisor is not in the polynomial's ring");
    if (d.is_zero()) throw std::invalid_argument("normal_form: zero divisor");
    store.push_back(ctx.from_polynomial(d));
  }
  std::vector<gb::Reducer> reducers;
  for (const auto& p : store) reducers.push_back({&p, ctx.divmask(p.lm())});
  gb::IPoly work = ctx.from_polynomial(f);
  if (work.empty()) return Polynomial(ring);
  // from_polynomial scaled f to a primitive integer polynomial; recover that factor.
  const Rational lead_in = f.leading_term(order).coefficient;
  const Rational lead_work(work.lc());
  mpq_class scale = lead_work / lead_in;
  EngineStats stats;
  gb::reduce(ctx, work, reducers, {true, gb::DivisorRule::first, true}, stats, nullptr, &scale);
  Polynomial r = ctx.to_polynomial(work, ring, false);
  return r * Rational(1 / scale);
}

GroebnerBasis buchberger(const Ideal& ideal, const MonomialOrder& order, const BuchbergerOptions& options) {
  const RingPtr& ring = ideal.ring();
  gb::Context ctx(ring->size(), order);
  std::vector<gb::IPoly> inputs;
  for (const auto& g : ideal.generators()) inputs.push_back(ctx.from_polynomial(g));
  try {
    auto result = gb::run_buchberger(ctx, std::move(inputs), options);
    GroebnerBasis out{ring, order, {}, result.stats};
    for (const auto& p : result.basis) out.basis.push_back(ctx.to_polynomial(p, ring, true));
    return out;
  } catch (const gb::Exhausted& e) {
    rethrow_exhausted(e, ctx, ring);
  }
}

bool is_member(const Polynomial& f, const GroebnerBasis& gb) {
  if (f.is_zero()) return true;
  if (gb.basis.empty()) return false;
  return normal_form(f, gb.basis, gb.order).is_zero();
}

bool is_member(const Polynomial& f, const Ideal& ideal, const MonomialOrder& order, const BuchbergerOptions& options) {
  if (!same_ring(f.ring(), ideal.ring())) throw VariableSetError("polynomial is not in the ideal's ring");
  return is_member(f, buchberger(ideal, order, options));
}

Ideal ideal_quotient(const Ideal& ideal, const Polynomial& g, const BuchbergerOptions& options) {
  if (g.is_zero()) throw std::invalid_argument("ideal_quotient: divisor is zero");
  if (!same_ring(g.ring(), ideal.ring())) throw VariableSetError("divisor is not in the ideal's ring");
  const RingPtr& base = ideal.ring();
  const std::size_t n = base->size();
  // I ∩ <g> = (t*I + (1-t)*<g>) ∩ Q[base]; dividing its generators by g gives (I : g).
  RingPtr ext = extend_ring(base, {fresh_name(*base, "t_")});
  std::vector<std::size_t> map = range(0, n);
  const Polynomial t = Polynomial::variable(ext, n);
  Ideal work(ext);
  for (auto& f : lift(ideal, ext)) work.add(t * f);
  work.add((Polynomial(ext, Rational(1)) - t) * g.remap(ext, map));
  auto gb = buchberger(work, MonomialOrder::block({{n}, range(0, n)}), options);
  Ideal result(base);
  for (const auto& h : gb.basis) {
    if (!free_of(h, n)) continue;
    auto q = divide_exact(drop_trailing(h, base), g);
    if (!q) throw std::logic_error("ideal_quotient: intersection element not divisible by g");
    result.add(std::move(*q));
  }
  return result;
}

Ideal saturate(const Ideal& ideal, const Polynomial& g, const BuchbergerOptions& options) {
  if (g.is_zero()) throw std::invalid_argument("saturate: divisor is zero");
  if (!same_ring(g.ring(), ideal.ring())) throw VariableSetError("divisor is not in the ideal's ring");
  const RingPtr& base = ideal.ring();
  const std::size_t n = base->size();
  RingPtr ext = extend_ring(base, {fresh_name(*base, "w_")});
  const Polynomial w = Polynomial::variable(ext, n);
  Ideal work(ext, lift(ideal, ext));
  work.add(Polynomial(ext, Rational(1)) - w * g.remap(ext, range(0, n)));
  BuchbergerOptions opts = options;
  opts.invertible = monomial_factors(g, n + 1);
  auto gb = buchberger(work, MonomialOrder::block({{n}, range(0, n)}), opts);
  Ideal result(base);
  for (const auto& h : gb.basis)
    if (free_of(h, n)) result.add(drop_trailing(h, base));
  return result;
}

bool saturation_is_unit(const Ideal& ideal, const Polynomial& g, const BuchbergerOptions& options, GroebnerBasis* out) {
  if (g.is_zero()) throw std::invalid_argument("saturate: divisor is zero");
  const RingPtr& base = ideal.ring();
  const std::size_t n = base->size();
  RingPtr ext = extend_ring(base, {fresh_name(*base, "w_")});
  const Polynomial w = Polynomial::variable(ext, n);
  Ideal work(ext, lift(ideal, ext));
  work.add(Polynomial(ext, Rational(1)) - w * g.remap(ext, range(0, n)));
  BuchbergerOptions opts = options;
  opts.invertible = monomial_factors(g, n + 1);
  auto gb = buchberger(work, MonomialOrder::grevlex(n + 1), opts);
  bool unit = gb.is_unit();
  if (out) *out = std::move(gb);
  return unit;
}

bool ideals_equal(const Ideal& a, const Ideal& b, const BuchbergerOptions& options) {
  if (!same_ring(a.ring(), b.ring())) throw VariableSetError("ideals live in different rings");
  const auto order = default_order(*a.ring());
  auto ga = buchberger(a, order, options);
  auto gb = buchberger(b, order, options);
  return ga.basis == gb.basis;
}

Ideal saturate_iterated(const Ideal& ideal, const Polynomial& g, unsigned* steps, const BuchbergerOptions& options) {
  Ideal current = ideal;
  const auto order = default_order(*ideal.ring());
  auto current_gb = buchberger(current, order, options);
  for (unsigned k = 1;; ++k) {
    Ideal next = ideal_quotient(current, g, options);
    // current ⊆ next always; equality means every generator of next is in current.
    bool stable = std::all_of(next.generators().begin(), next.generators().end(),
                              [&](const Polynomial& f) { return is_member(f, current_gb); });
    if (stable) {
      if (steps) *steps = k - 1;
      return Ideal(ideal.ring(), current_gb.basis);
    }
    current = std::move(next);
    current_gb = buchberger(current, order, options);
  }
}

Ideal saturate_by_variables(const Ideal& ideal, const std::vector<std::size_t>& vars, const BuchbergerOptions& options) {
  Ideal current = ideal;
  for (auto v : vars) {
    current = saturate(current, Polynomial::variable(ideal.ring(), v), options);
    if (current.generators().size() == 1 && current.generators().front().is_constant()) break;
  }
  return current;
}

Ideal eliminate(const Ideal& ideal, const std::vector<std::string>& keep, const BuchbergerOptions& options) {
  const Ring& ring = *ideal.ring();
  if (keep.empty()) throw std::invalid_argument("eliminate: keep set is empty");
  std::vector<bool> kept(ring.size(), false);
  for (const auto& name : keep) kept[ring.require(name)] = true;
  std::vector<std::size_t> drop, stay;
  for (std::size_t i = 0; i < ring.size(); ++i) (kept[i] ? stay : drop).push_back(i);
  auto gb = buchberger(ideal, MonomialOrder::block({drop, stay}), options);
  Ideal result(ideal.ring());
  for (const auto& h : gb.basis) {
    auto support = h.support();
    if (std::all_of(support.begin(), support.end(), [&](std::size_t v) { return kept[v]; })) result.add(h);
  }
  return result;
}

bool is_unit_ideal(const Ideal& ideal, const MonomialOrder& order, const BuchbergerOptions& options) {
  return buchberger(ideal, order, options).is_unit();
}

bool is_unit_ideal(const Ideal& ideal, const BuchbergerOptions& options) {
  return is_unit_ideal(ideal, default_order(*ideal.ring()), options);
}

Ideal contains_difference_variety(const Ideal& I, const Ideal& J, const BuchbergerOptions& options) {
  if (J.generators().size() != 1) throw std::invalid_argument("contains_difference_variety: J must be principal");
  return saturate(I, J.generators().front(), options);
}

Polynomial s_polynomial(const Polynomial& f, const Polynomial& g, const MonomialOrder& order) {
  const Term& lf = f.leading_term(order);
  const Term& lg = g.leading_term(order);
  const Monomial l = lf.monomial.lcm(lg.monomial);
  auto a = Polynomial::monomial(f.ring(), l / lf.monomial, Rational(1 / lf.coefficient));
  auto b = Polynomial::monomial(g.ring(), l / lg.monomial, Rational(1 / lg.coefficient));
  return a * f - b * g;
}

bool satisfies_buchberger_criterion(const std::vector<Polynomial>& basis, const MonomialOrder& order) {
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j)
      if (!normal_form(s_polynomial(basis[i], basis[j], order), basis, order).is_zero()) return false;
  return true;
}

bool is_zero_dimensional(const GroebnerBasis& gb) {
  const std::size_t n = gb.ring->size();
  std::vector<bool> pure(n, false);
  for (const auto& g : gb.basis) {
    const Monomial& lm = g.leading_term(gb.order).monomial;
    std::size_t nonzero = 0, var = 0;
    for (std::size_t v = 0; v < n; ++v)
      if (lm[v]) {
        ++nonzero;
        var = v;
      }
    if (nonzero == 0) return true;
    if (nonzero == 1) pure[var] = true;
  }
  return std::all_of(pure.begin(), pure.end(), [](bool b) { return b; });
}

std::optional<std::vector<Rational>> minimal_polynomial_of(const GroebnerBasis& gb, const Polynomial& f,
                                                          unsigned max_degree) {
  const RingPtr& ring = gb.ring;
  if (!same_ring(ring, f.ring())) throw VariableSetError("element lives in a different ring");
  if (gb.is_unit()) return std::vector<Rational>{1};
  // Each power's normal form is a vector over the standard monomials; an
  // incremental echelon form with an identity tail exposes the first relation.
  struct Row {
    std::map<Monomial, Rational> coords;  // pivot = largest key
    std::vector<Rational> combo;          // coefficients on 1, f, f^2, ...
  };
  std::vector<Row> echelon;
  const Polynomial fr = normal_form(f, gb.basis, gb.order);
  Polynomial nf(ring, Rational(1));
  for (unsigned k = 0; k <= max_degree; ++k) {
    if (k > 0) nf = normal_form(fr * nf, gb.basis, gb.order);
    Row row;
    for (const auto& t : nf.terms()) row.coords[t.monomial] = t.coefficient;
    row.combo.assign(k + 1, Rational(0));
    row.combo[k] = 1;
    for (const auto& e : echelon) {
      const auto& pivot = e.coords.rbegin()->first;
      auto it = row.coords.find(pivot);
      if (it == row.coords.end()) continue;
      Rational factor = it->second / e.coords.rbegin()->second;
      for (const auto& [m, c] : e.coords) {
        Rational& slot = row.coords[m];
        slot -= factor * c;
        if (slot == 0) row.coords.erase(m);
      }
      for (std::size_t i = 0; i < e.combo.size(); ++i) row.combo[i] -= factor * e.combo[i];
    }
    if (row.coords.empty()) {
      const Rational lead = row.combo.back();
      for (auto& c : row.combo) c /= lead;
      return row.combo;
    }
    // Keep rows sorted so every pivot is eliminated before it can reappear.
    echelon.push_back(std::move(row));
    std::sort(echelon.begin(), echelon.end(),
              [](const Row& a, const Row& b) { return a.coords.rbegin()->first > b.coords.rbegin()->first; });
  }
  return std::nullopt;
}

std::optional<Polynomial> minimal_polynomial(const GroebnerBasis& gb, std::size_t var, unsigned max_degree) {
  auto coeffs = minimal_polynomial_of(gb, Polynomial::variable(gb.ring, var), max_degree);
  if (!coeffs) return std::nullopt;
  std::vector<Term> terms;
  for (std::size_t i = 0; i < coeffs->size(); ++i) {
    if ((*coeffs)[i] == 0) continue;
    Monomial m(gb.ring->size());
    m.set(var, static_cast<unsigned>(i));
    terms.push_back({std::move(m), (*coeffs)[i]});
  }
  return make_monic(Polynomial(gb.ring, std::move(terms)), gb.order);
}

std::vector<std::string> read_ideal_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first != std::string_view::npos) {
      auto last = line.find_last_not_of(" \t\r");
      lines.emplace_back(line.substr(first, last - first + 1));
    }
    start = end + 1;
  }
  return lines;
}

}  // namespace bmv
