#include "engine.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace bmv::gb {

namespace {

constexpr std::uint64_t kHigh = 0x8000800080008000ULL;

void set_lane(std::array<std::uint64_t, 2>& words, std::size_t lane, unsigned value) {
  const std::size_t w = lane / 4, shift = 16 * (lane % 4);
  words[w] = (words[w] & ~(0xffffULL << shift)) | (std::uint64_t(value) << shift);
}

// Key lanes are most significant first: lane 0 sits in the top bits of word 0.
void set_key_lane(std::array<std::uint64_t, 2>& words, std::size_t lane, unsigned value) {
  const std::size_t w = lane / 4, shift = 48 - 16 * (lane % 4);
  words[w] |= std::uint64_t(value) << shift;
}

}  // namespace

// ---------------------------------------------------------------- Context

Context::Context(std::size_t nvars, const MonomialOrder& order)
    : nvars_(nvars), order_(order), rows_(order.weight_rows()) {
  if (nvars > kMaxVars)
    throw std::invalid_argument("Gröbner engine supports at most " + std::to_string(kMaxVars) + " variables");
  if (order.size() != nvars) throw std::invalid_argument("monomial order does not match ring size");
}

void Context::set_key(Mon& m) const {
  m.key = {0, 0};
  for (std::size_t j = 0; j < rows_.size(); ++j) {
    unsigned s = 0;
    for (std::size_t v = 0; v < nvars_; ++v)
      if (rows_[j][v]) s += rows_[j][v] * exponent(m, v);
    if (s > kMaxDegree) throw std::overflow_error("monomial degree exceeds engine limit");
    set_key_lane(m.key, j, s);
  }
}

Mon Context::pack(const Monomial& m) const {
  Mon r;
  unsigned deg = 0;
  for (std::size_t v = 0; v < nvars_; ++v) {
    deg += m[v];
    set_lane(r.exp, v, m[v]);
  }
  if (deg > kMaxDegree) throw std::overflow_error("monomial degree exceeds engine limit");
  set_key(r);
  return r;
}

Monomial Context::unpack(const Mon& m) const {
  Monomial r(nvars_);
  for (std::size_t v = 0; v < nvars_; ++v) r.set(v, exponent(m, v));
  return r;
}

Mon Context::mul(const Mon& a, const Mon& b) const {
  Mon r{{a.key[0] + b.key[0], a.key[1] + b.key[1]}, {a.exp[0] + b.exp[0], a.exp[1] + b.exp[1]}};
  if ((r.exp[0] | r.exp[1] | r.key[0] | r.key[1]) & kHigh)
    throw std::overflow_error("monomial degree exceeds engine limit");
  return r;
}

Mon Context::lcm(const Mon& a, const Mon& b) const {
  Mon r;
  for (std::size_t v = 0; v < nvars_; ++v) set_lane(r.exp, v, std::max(exponent(a, v), exponent(b, v)));
  set_key(r);
  return r;
}

bool Context::coprime(const Mon& a, const Mon& b) const {
  for (std::size_t v = 0; v < nvars_; ++v)
    if (exponent(a, v) && exponent(b, v)) return false;
  return true;
}

std::uint32_t Context::divmask(const Mon& m) const {
  std::uint32_t mask = 0;
  for (std::size_t v = 0; v < nvars_; ++v) {
    unsigned e = exponent(m, v);
    if (e >= 1) mask |= 1u << (4 * v);
    if (e >= 2) mask |= 1u << (4 * v + 1);
    if (e >= 4) mask |= 1u << (4 * v + 2);
    if (e >= 8) mask |= 1u << (4 * v + 3);
  }
  return mask;
}

IPoly Context::from_polynomial(const Polynomial& f) const {
  IPoly p;
  if (f.is_zero()) return p;
  mpz_class den = 1;
  for (const auto& t : f.terms()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coefficient.get_den_mpz_t());
  p.terms.reserve(f.term_count());
  for (const auto& t : f.terms()) {
    mpz_class c = t.coefficient.get_num() * (den / t.coefficient.get_den());
    p.terms.push_back({pack(t.monomial), std::move(c)});
  }
  std::sort(p.terms.begin(), p.terms.end(), [](const ITerm& a, const ITerm& b) { return cmp(a.m, b.m) > 0; });
  p.sugar = f.total_degree();
  make_primitive(p);
  return p;
}

Polynomial Context::to_polynomial(const IPoly& f, const RingPtr& ring, bool monic) const {
  std::vector<Term> terms;
  terms.reserve(f.terms.size());
  mpq_class scale = 1;
  if (monic && !f.empty()) scale = mpq_class(1, f.lc());
  if (monic && !f.empty()) scale.canonicalize();
  for (const auto& t : f.terms) terms.push_back({unpack(t.m), mpq_class(t.c) * scale});
  return Polynomial(ring, std::move(terms));
}

// ---------------------------------------------------------------- budget

Deadline::Deadline(const Budget& budget) : budget_(budget), start_(std::chrono::steady_clock::now()) {}

double Deadline::elapsed() const {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
}

void Deadline::check(const EngineStats& stats, std::size_t terms) const {
  auto fail = [&](const std::string& what) {
    EngineStats s = stats;
    s.seconds = elapsed();
    throw Exhausted{what, s, {}};
  };
  if (budget_.max_pairs && stats.pairs_processed > budget_.max_pairs) fail("pair budget exceeded");
  if (budget_.max_terms && terms > budget_.max_terms) fail("term budget exceeded");
  if (budget_.max_seconds > 0 && elapsed() > budget_.max_seconds) fail("time budget exceeded");
  if (budget_.cancel && budget_.cancel->load(std::memory_order_relaxed)) fail("cancelled");
}

// ---------------------------------------------------------------- reduction

namespace {

/// Growable term buffer that keeps its mpz limbs allocated across reuse.
struct TermBuffer {
  std::vector<ITerm> v;
  std::size_t n = 0;

  ITerm& push() {
    if (n == v.size()) v.emplace_back();
    return v[n++];
  }
  void clear() { n = 0; }
};

// out = a * (ua * x) - b * (ub * y); both inputs strictly descending.
void axpy(const Context& ctx, TermBuffer& out, const mpz_class& a, const Mon* ua, std::span<const ITerm> x,
          const mpz_class& b, const Mon& ub, std::span<const ITerm> y) {
  out.clear();
  const bool a_one = (a == 1);
  std::size_t i = 0, j = 0;
  Mon xm, ym;
  bool have_x = false, have_y = false;
  while (true) {
    if (!have_x && i < x.size()) {
      xm = ua ? ctx.mul(*ua, x[i].m) : x[i].m;
      have_x = true;
    }
    if (!have_y && j < y.size()) {
      ym = ctx.mul(ub, y[j].m);
      have_y = true;
    }
    if (!have_x && !have_y) break;
    int c = !have_x ? -1 : !have_y ? 1 : cmp(xm, ym);
    if (c > 0) {
      ITerm& t = out.push();
      t.m = xm;
      if (a_one) mpz_set(t.c.get_mpz_t(), x[i].c.get_mpz_t());
      else mpz_mul(t.c.get_mpz_t(), a.get_mpz_t(), x[i].c.get_mpz_t());
      ++i;
      have_x = false;
    } else if (c < 0) {
      ITerm& t = out.push();
      t.m = ym;
      mpz_mul(t.c.get_mpz_t(), b.get_mpz_t(), y[j].c.get_mpz_t());
      mpz_neg(t.c.get_mpz_t(), t.c.get_mpz_t());
      ++j;
      have_y = false;
    } else {
      ITerm& t = out.push();
      t.m = xm;
      if (a_one) mpz_set(t.c.get_mpz_t(), x[i].c.get_mpz_t());
      else mpz_mul(t.c.get_mpz_t(), a.get_mpz_t(), x[i].c.get_mpz_t());
      mpz_submul(t.c.get_mpz_t(), b.get_mpz_t(), y[j].c.get_mpz_t());
      if (mpz_sgn(t.c.get_mpz_t()) == 0) --out.n;
      ++i;
      ++j;
      have_x = have_y = false;
    }
  }
}

const Reducer* find_reducer(const Context& ctx, const Mon& m, std::uint32_t mask, std::span<const Reducer> reducers,
                            DivisorRule rule) {
  const Reducer* best = nullptr;
  for (const auto& r : reducers) {
    if (r.mask & ~mask) continue;
    if (!Context::divides(r.poly->lm(), m)) continue;
    if (rule == DivisorRule::first) return &r;
    if (!best || r.poly->terms.size() < best->poly->terms.size()) best = &r;
  }
  (void)ctx;
  return best;
}

// Divides the coefficients of both ranges by their common content.
mpz_class remove_content(std::vector<ITerm>& done, std::span<ITerm> pending) {
  mpz_class g = 0;
  for (auto& t : done) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.c.get_mpz_t());
    if (g == 1) return g;
  }
  for (auto& t : pending) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.c.get_mpz_t());
    if (g == 1) return g;
  }
  if (g > 1) {
    for (auto& t : done) mpz_divexact(t.c.get_mpz_t(), t.c.get_mpz_t(), g.get_mpz_t());
    for (auto& t : pending) mpz_divexact(t.c.get_mpz_t(), t.c.get_mpz_t(), g.get_mpz_t());
  }
  return g;
}

}  // namespace

void make_primitive(IPoly& f) {
  if (f.empty()) return;
  mpz_class g = remove_content(f.terms, {});
  (void)g;
  if (mpz_sgn(f.terms.front().c.get_mpz_t()) < 0)
    for (auto& t : f.terms) mpz_neg(t.c.get_mpz_t(), t.c.get_mpz_t());
}

void reduce(const Context& ctx, IPoly& f, std::span<const Reducer> reducers, const ReduceOptions& opts,
            EngineStats& stats, const Deadline* deadline, mpq_class* scale) {
  if (f.empty()) return;
  std::vector<ITerm> rem;
  TermBuffer cur, next;
  cur.v = std::move(f.terms);
  cur.n = cur.v.size();
  std::size_t pos = 0;
  mpz_class a, b, g;
  unsigned since_content = 0;
  while (pos < cur.n) {
    const Mon& t = cur.v[pos].m;
    const Reducer* r = find_reducer(ctx, t, ctx.divmask(t), reducers, opts.rule);
    if (!r) {
      if (!opts.full) {
        for (; pos < cur.n; ++pos) rem.push_back(std::move(cur.v[pos]));
        break;
      }
      rem.push_back(std::move(cur.v[pos]));
      ++pos;
      continue;
    }
    const IPoly& gp = *r->poly;
    mpz_gcd(g.get_mpz_t(), gp.lc().get_mpz_t(), cur.v[pos].c.get_mpz_t());
    mpz_divexact(a.get_mpz_t(), gp.lc().get_mpz_t(), g.get_mpz_t());
    mpz_divexact(b.get_mpz_t(), cur.v[pos].c.get_mpz_t(), g.get_mpz_t());
    const Mon u = Context::quo(t, gp.lm());
    f.sugar = std::max(f.sugar, Context::degree(u) + gp.sugar);
    if (a != 1) {
      for (auto& rt : rem) mpz_mul(rt.c.get_mpz_t(), rt.c.get_mpz_t(), a.get_mpz_t());
      if (scale) *scale *= a;
    }
    axpy(ctx, next, a, nullptr, std::span<const ITerm>(cur.v.data() + pos + 1, cur.n - pos - 1), b, u,
         std::span<const ITerm>(gp.terms.data() + 1, gp.terms.size() - 1));
    std::swap(cur, next);
    pos = 0;
    ++stats.reduction_steps;
    const std::size_t size = cur.n + rem.size();
    stats.max_terms = std::max<std::uint64_t>(stats.max_terms, size);
    if (++since_content >= 8) {
      since_content = 0;
      mpz_class content = remove_content(rem, std::span<ITerm>(cur.v.data(), cur.n));
      if (scale && content > 1) *scale /= content;
    }
    if (deadline && (stats.reduction_steps & 63) == 0) deadline->check(stats, size);
  }
  f.terms = std::move(rem);
  if (f.empty()) return;
  mpz_class content = remove_content(f.terms, {});
  if (scale && content > 1) *scale /= content;
  if (mpz_sgn(f.terms.front().c.get_mpz_t()) < 0) {
    for (auto& t : f.terms) mpz_neg(t.c.get_mpz_t(), t.c.get_mpz_t());
    if (scale) *scale = -*scale;
  }
}

IPoly s_poly(const Context& ctx, const IPoly& f, const IPoly& g) {
  const Mon l = ctx.lcm(f.lm(), g.lm());
  const Mon uf = Context::quo(l, f.lm()), ug = Context::quo(l, g.lm());
  mpz_class d, a, b;
  mpz_gcd(d.get_mpz_t(), f.lc().get_mpz_t(), g.lc().get_mpz_t());
  mpz_divexact(a.get_mpz_t(), g.lc().get_mpz_t(), d.get_mpz_t());
  mpz_divexact(b.get_mpz_t(), f.lc().get_mpz_t(), d.get_mpz_t());
  TermBuffer out;
  axpy(ctx, out, a, &uf, std::span<const ITerm>(f.terms.data() + 1, f.terms.size() - 1), b, ug,
       std::span<const ITerm>(g.terms.data() + 1, g.terms.size() - 1));
  IPoly s;
  out.v.resize(out.n);
  s.terms = std::move(out.v);
  s.sugar = std::max(f.sugar + Context::degree(uf), g.sugar + Context::degree(ug));
  make_primitive(s);
  return s;
}

// ---------------------------------------------------------------- Buchberger

namespace {

struct Pair {
  std::size_t i, j;
  Mon lcm;
  unsigned sugar;
};

struct Element {
  IPoly* poly;
  std::uint32_t mask;
  bool active;
};

class Run {
 public:
  Run(const Context& ctx, const BuchbergerOptions& options) : ctx_(ctx), options_(options), deadline_(options.budget) {}

  RunResult execute(std::vector<IPoly> inputs) {
    try {
      return execute_impl(std::move(inputs));
    } catch (Exhausted& e) {
      e.stats = stats_;
      e.stats.seconds = deadline_.elapsed();
      for (const auto& el : elements_)
        if (el.active) e.partial.push_back(*el.poly);
      throw;
    }
  }

 private:
  // Strips the largest monomial in invertible variables dividing every term.
  void strip_units(IPoly& f) const {
    if (options_.invertible.empty() || f.empty()) return;
    std::array<unsigned, kMaxVars> low{};
    bool any = false;
    for (auto v : options_.invertible) {
      unsigned e = ctx_.exponent(f.terms.front().m, v);
      for (const auto& t : f.terms) {
        if (e == 0) break;
        e = std::min(e, ctx_.exponent(t.m, v));
      }
      low[v] = e;
      any |= e > 0;
    }
    if (!any) return;
    Monomial m(ctx_.nvars());
    for (std::size_t v = 0; v < ctx_.nvars(); ++v) m.set(v, low[v]);
    const Mon pm = ctx_.pack(m);
    for (auto& t : f.terms) t.m = Context::quo(t.m, pm);
  }

  RunResult execute_impl(std::vector<IPoly> inputs) {
    for (auto& f : inputs) strip_units(f);
    std::erase_if(inputs, [](const IPoly& p) { return p.empty(); });
    std::sort(inputs.begin(), inputs.end(), [](const IPoly& a, const IPoly& b) { return cmp(a.lm(), b.lm()) < 0; });
    for (auto& f : inputs) {
      reduce(ctx_, f, reducers_, {true, DivisorRule::shortest, false}, stats_, &deadline_);
      strip_units(f);
      if (f.empty()) continue;
      if (ctx_.is_one(f.lm())) return unit_result();
      insert(std::move(f));
    }
    const ReduceOptions ropts{options_.tail_reduce, DivisorRule::shortest, false};
    while (!pairs_.empty()) {
      std::size_t best = 0;
      for (std::size_t k = 1; k < pairs_.size(); ++k)
        if (pair_less(pairs_[k], pairs_[best])) best = k;
      Pair p = pairs_[best];
      pairs_[best] = pairs_.back();
      pairs_.pop_back();
      ++stats_.pairs_processed;
      deadline_.check(stats_, 0);

      IPoly s = s_poly(ctx_, *elements_[p.i].poly, *elements_[p.j].poly);
      reduce(ctx_, s, reducers_, ropts, stats_, &deadline_);
      if (s.empty()) {
        ++stats_.zero_reductions;
        continue;
      }
      // Dividing by a unit can expose new reducible terms.
      while (!s.empty()) {
        const Mon before = s.lm();
        strip_units(s);
        if (s.lm() == before) break;
        reduce(ctx_, s, reducers_, {true, DivisorRule::shortest, false}, stats_, &deadline_);
      }
      if (s.empty()) {
        ++stats_.zero_reductions;
        continue;
      }
      if (ctx_.is_one(s.lm())) return unit_result();
      if (!options_.tail_reduce) reduce(ctx_, s, reducers_, {true, DivisorRule::shortest, false}, stats_, &deadline_);
      insert(std::move(s));
    }
    return finish();
  }

  bool pair_less(const Pair& a, const Pair& b) const {
    if (a.sugar != b.sugar) return a.sugar < b.sugar;
    int c = cmp(a.lcm, b.lcm);
    if (c != 0) return c < 0;
    return std::tie(a.i, a.j) < std::tie(b.i, b.j);
  }

  RunResult unit_result() {
    RunResult r;
    IPoly one;
    one.terms.push_back({Mon{}, mpz_class(1)});
    r.basis.push_back(std::move(one));
    r.unit = true;
    r.stats = stats_;
    r.stats.seconds = deadline_.elapsed();
    return r;
  }

  // Gebauer-Möller update.
  void insert(IPoly h) {
    store_.push_back(std::move(h));
    IPoly* hp = &store_.back();
    const std::size_t hi = elements_.size();
    const Mon hlm = hp->lm();
    stats_.max_degree = std::max(stats_.max_degree, Context::degree(hlm));

    struct Candidate {
      std::size_t g;
      Mon lcm;
      bool coprime;
      bool keep = true;
    };
    std::vector<Candidate> cands;
    for (std::size_t g = 0; g < elements_.size(); ++g) {
      if (!elements_[g].active) continue;
      const Mon& glm = elements_[g].poly->lm();
      cands.push_back({g, ctx_.lcm(glm, hlm), ctx_.coprime(glm, hlm)});
    }
    // Candidates are examined in order; (h, g_k) is dropped when the lcm of a
    // later candidate, or of an earlier kept one, divides its lcm.
    for (std::size_t k = 0; k < cands.size(); ++k) {
      if (cands[k].coprime) continue;
      for (std::size_t l = 0; l < cands.size(); ++l) {
        if (l == k || (l < k && !cands[l].keep)) continue;
        if (Context::divides(cands[l].lcm, cands[k].lcm)) {
          cands[k].keep = false;
          ++stats_.chain_criterion;
          break;
        }
      }
    }
    // Old pairs whose lcm is strictly divisible through h.
    std::erase_if(pairs_, [&](const Pair& p) {
      if (!Context::divides(hlm, p.lcm)) return false;
      const Mon l1 = ctx_.lcm(elements_[p.i].poly->lm(), hlm);
      const Mon l2 = ctx_.lcm(elements_[p.j].poly->lm(), hlm);
      if (l1 == p.lcm || l2 == p.lcm) return false;
      ++stats_.chain_criterion;
      return true;
    });
    elements_.push_back({hp, ctx_.divmask(hlm), true});
    for (const auto& c : cands) {
      if (!c.keep) continue;
      if (c.coprime) {
        ++stats_.product_criterion;
        continue;
      }
      const IPoly& g = *elements_[c.g].poly;
      const unsigned d = Context::degree(c.lcm);
      const unsigned sugar = std::max(hp->sugar + d - Context::degree(hlm), g.sugar + d - Context::degree(g.lm()));
      pairs_.push_back({c.g, hi, c.lcm, sugar});
      ++stats_.pairs_created;
    }
    for (std::size_t g = 0; g + 1 < elements_.size(); ++g)
      if (elements_[g].active && Context::divides(hlm, elements_[g].poly->lm())) elements_[g].active = false;
    rebuild_reducers();
  }

  void rebuild_reducers() {
    reducers_.clear();
    std::size_t count = 0;
    for (const auto& e : elements_) {
      if (!e.active) continue;
      reducers_.push_back({e.poly, e.mask});
      ++count;
    }
    stats_.max_basis = std::max(stats_.max_basis, count);
  }

  RunResult finish() {
    std::vector<const IPoly*> basis;
    for (const auto& e : elements_)
      if (e.active) basis.push_back(e.poly);
    std::sort(basis.begin(), basis.end(), [](const IPoly* a, const IPoly* b) { return cmp(a->lm(), b->lm()) < 0; });
    RunResult r;
    for (std::size_t k = 0; k < basis.size(); ++k) {
      std::vector<Reducer> others;
      for (std::size_t l = 0; l < basis.size(); ++l)
        if (l != k) others.push_back({basis[l], ctx_.divmask(basis[l]->lm())});
      IPoly g = *basis[k];
      reduce(ctx_, g, others, {true, DivisorRule::shortest, false}, stats_, &deadline_);
      r.basis.push_back(std::move(g));
    }
    r.stats = stats_;
    r.stats.seconds = deadline_.elapsed();
    return r;
  }

  const Context& ctx_;
  BuchbergerOptions options_;
  Deadline deadline_;
  EngineStats stats_;
  std::deque<IPoly> store_;
  std::vector<Element> elements_;
  std::vector<Reducer> reducers_;
  std::vector<Pair> pairs_;
};

}  // namespace

RunResult run_buchberger(const Context& ctx, std::vector<IPoly> inputs, const BuchbergerOptions& options) {
  Run run(ctx, options);
  return run.execute(std::move(inputs));
}

}  // namespace bmv::gb
