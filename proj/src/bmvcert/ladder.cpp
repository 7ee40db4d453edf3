#include <algorithm>
#include <chrono>
#include <new>
#include <random>
#include <sstream>

#include "bmv/cert.hpp"

namespace bmv {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// q rewritten for the saturation: variables occurring only to even powers are
// replaced by their squares (v^2 -> v2), which keeps the answer because every
// free variable is inverted anyway.
struct Prepared {
  RingPtr ring;                     // free variables, squared ones renamed
  Polynomial q{nullptr};            // q in `ring`
  std::vector<bool> squared;        // per ring variable
  std::vector<std::string> source;  // original name per ring variable
  // Ranges over (0, inf) instead of (0, 1): graded variables after setting
  // one of them to 1.
  std::vector<bool> unbounded;
  Ideal critical{nullptr};
};

bool homogeneous(const Polynomial& f, const std::vector<unsigned>& weights) {
  std::optional<unsigned> deg;
  for (const auto& t : f.terms()) {
    unsigned d = 0;
    for (std::size_t v = 0; v < weights.size(); ++v) d += weights[v] * t.monomial[v];
    if (deg && *deg != d) return false;
    deg = d;
  }
  return true;
}

Prepared prepare(const Polynomial& q, const std::vector<std::string>& free, const std::string& dehomogenize,
                 const std::vector<std::string>& grading) {
  const Ring& src = *q.ring();
  std::vector<std::size_t> idx;
  for (const auto& v : free) idx.push_back(src.require(v));
  for (std::size_t v : q.support())
    if (std::find(idx.begin(), idx.end(), v) == idx.end())
      throw VariableSetError("q depends on a variable outside the free set: " + src.name(v));

  Prepared out;
  std::vector<std::string> names;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    bool even = true;
    for (const auto& t : q.terms())
      if (t.monomial[idx[k]] % 2) even = false;
    even = even && q.degree_in(idx[k]) > 0;
    out.squared.push_back(even);
    out.source.push_back(free[k]);
    names.push_back(even ? free[k] + "2" : free[k]);
  }
  out.ring = make_ring(names);
  std::vector<Term> terms;
  for (const auto& t : q.terms()) {
    Monomial m(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) m.set(k, out.squared[k] ? t.monomial[idx[k]] / 2 : t.monomial[idx[k]]);
    terms.push_back({m, t.coefficient});
  }
  out.q = Polynomial(out.ring, std::move(terms));
  // d q / d v = 2 v * dQ/dV for a squared variable; the factor v is a unit.
  Ideal crit(out.ring);
  for (std::size_t k = 0; k < idx.size(); ++k) crit.add(differentiate(out.q, k));

  if (!dehomogenize.empty()) {
    auto it = std::find(out.source.begin(), out.source.end(), dehomogenize);
    if (it == out.source.end()) throw VariableSetError("cannot dehomogenize by a non-free variable");
    const std::size_t d = static_cast<std::size_t>(it - out.source.begin());
    if (std::find(grading.begin(), grading.end(), dehomogenize) == grading.end())
      throw std::invalid_argument("dehomogenized variable must belong to the grading");
    // Weight of a renamed square is 2 in the original grading.
    std::vector<unsigned> weights(names.size(), 0);
    for (std::size_t k = 0; k < names.size(); ++k)
      if (std::find(grading.begin(), grading.end(), out.source[k]) != grading.end()) weights[k] = out.squared[k] ? 2 : 1;
    for (const auto& g : crit.generators())
      if (!homogeneous(g, weights)) throw std::invalid_argument("critical ideal is not homogeneous in the grading");
    std::vector<std::string> rest;
    for (std::size_t k = 0; k < names.size(); ++k)
      if (k != d) rest.push_back(names[k]);
    RingPtr smaller = make_ring(rest);
    Ideal dehom(smaller);
    for (const auto& g : crit.generators()) dehom.add(substitute(g, {{names[d], Polynomial(smaller, Rational(1))}}, smaller));
    out.q = substitute(out.q, {{names[d], Polynomial(smaller, Rational(1))}}, smaller);
    out.squared.erase(out.squared.begin() + d);
    out.source.erase(out.source.begin() + d);
    out.ring = smaller;
    crit = std::move(dehom);
    for (const auto& v : out.source)
      out.unbounded.push_back(std::find(grading.begin(), grading.end(), v) != grading.end());
  }
  out.unbounded.resize(out.source.size(), false);
  out.critical = std::move(crit);
  return out;
}

Polynomial product_of_variables(const RingPtr& ring) {
  Monomial m(ring->size());
  for (std::size_t v = 0; v < ring->size(); ++v) m.set(v, 1);
  return Polynomial::monomial(ring, m);
}

std::string describe_reductions(const Prepared& prep, const std::string& dehomogenize) {
  std::ostringstream os;
  os << "ring: ";
  for (std::size_t v = 0; v < prep.ring->size(); ++v) os << (v ? "," : "") << prep.ring->name(v);
  os << "\n";
  for (std::size_t v = 0; v < prep.source.size(); ++v)
    if (prep.squared[v]) os << "substitution: " << prep.ring->name(v) << " = " << prep.source[v] << "^2\n";
  if (!dehomogenize.empty()) os << "dehomogenized: " << dehomogenize << " = 1\n";
  for (std::size_t v = 0; v < prep.source.size(); ++v)
    if (prep.unbounded[v]) os << "range: " << prep.ring->name(v) << " in (0,inf), mapped by t = v/(1+v)\n";
  return os.str();
}

// Rational roots in (0, 1) of a square-free integer-coefficient polynomial.
std::vector<Rational> rational_roots_in_unit_interval(const UniPoly& p) {
  std::vector<Rational> roots;
  if (p.degree() <= 0) return roots;
  mpz_class den = 1;
  for (const auto& c : p.coefficients()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  std::vector<mpz_class> ints;
  for (const auto& c : p.coefficients()) ints.push_back(c.get_num() * (den / c.get_den()));
  std::size_t low = 0;
  while (ints[low] == 0) ++low;
  mpz_class a0 = abs(ints[low]), an = abs(ints.back());
  // Candidates n/d with n | a0, d | an and 0 < n < d. Both are small for
  // eliminants that have rational roots at all; give up on huge constants.
  if (mpz_sizeinbase(a0.get_mpz_t(), 2) > 40 || mpz_sizeinbase(an.get_mpz_t(), 2) > 40) return roots;
  auto divisors = [](const mpz_class& n) {
    std::vector<mpz_class> ds;
    for (mpz_class d = 1; d * d <= n; ++d)
      if (n % d == 0) {
        ds.push_back(d);
        if (d * d != n) ds.push_back(n / d);
      }
    return ds;
  };
  auto num = divisors(a0), dens = divisors(an);
  if (num.size() * dens.size() > 200000) return roots;
  for (const auto& n : num)
    for (const auto& d : dens) {
      if (n >= d) continue;
      Rational cand(n, d);
      cand.canonicalize();
      if (p.sign_at(cand) == 0 && std::find(roots.begin(), roots.end(), cand) == roots.end()) roots.push_back(cand);
    }
  std::sort(roots.begin(), roots.end());
  return roots;
}

struct Eliminant {
  std::size_t var;
  UniPoly poly;
  UnitIntervalCertificate sturm;
};

}  // namespace

Ideal critical_ideal(const Polynomial& p, const std::vector<std::string>& free) {
  Ideal out(p.ring());
  for (const auto& v : free) out.add(differentiate(p, v));
  return out;
}

ProofStep certify_critical_points(const std::string& name, const Polynomial& q, const std::vector<std::string>& free,
                                  const LadderOptions& options) {
  const auto t0 = Clock::now();
  ProofStep step;
  step.name = name;
  Prepared prep = prepare(q, free, options.dehomogenize, options.grading);
  std::ostringstream cert;
  cert << describe_reductions(prep, options.dehomogenize);
  cert << "q: " << prep.q.to_string() << "\n";
  for (const auto& g : prep.critical.generators()) cert << "generator: " << g.to_string() << "\n";

  // Rung 3 without the Groebner basis: h = q - sum lambda_i g_i with
  // nonnegative Bernstein coefficients gives q = h >= 0 wherever all g_i
  // vanish in the box. Needs every coordinate in (0, 1).
  auto ideal_certificate = [&](const std::string& reason) -> bool {
    if (options.max_multiplier_degree == 0) return false;
    if (std::find(prep.unbounded.begin(), prep.unbounded.end(), true) != prep.unbounded.end()) return false;
    const auto& gens = prep.critical.generators();
    for (unsigned d = 0; d <= options.max_multiplier_degree; ++d) {
      auto found = find_ideal_certificate(prep.q, gens, d);
      if (!found) continue;
      cert << reason << "\n";
      cert << "rung: 3 (ideal certificate)\nmultiplier degree: " << d << "\nbernstein degrees: ";
      for (std::size_t k = 0; k < found->degrees.size(); ++k) cert << (k ? "," : "") << found->degrees[k];
      cert << "\n";
      for (std::size_t i = 0; i < gens.size(); ++i)
        cert << "multiplier " << i + 1 << ": " << found->multipliers[i].to_string() << "\n";
      cert << "bernstein coefficients: " << found->coefficient_count << ", minimum " << to_string(found->minimum)
           << "\n";
      step.status = StepStatus::verified;
      step.summary = reason + "; rung 3: q - sum(lambda_i g_i) has " + std::to_string(found->coefficient_count) +
                     " nonnegative Bernstein coefficients on [0,1]^" + std::to_string(prep.ring->size()) +
                     " (multiplier degree " + std::to_string(d) + ")";
      step.certificate = cert.str();
      step.seconds = since(t0);
      return true;
    }
    cert << "ideal certificate: none up to multiplier degree " << options.max_multiplier_degree << "\n";
    return false;
  };

  BuchbergerOptions bopts;
  bopts.budget = options.budget;
  GroebnerBasis gb;
  bool unit = false;
  try {
    unit = saturation_is_unit(prep.critical, product_of_variables(prep.ring), bopts, &gb);
  } catch (const BudgetExceeded& e) {
    const std::string reason = std::string("saturation stopped: ") + e.what();
    step.counters = e.stats().summary();
    if (ideal_certificate(reason)) return step;
    step.status = StepStatus::budget_exceeded;
    step.summary = reason;
    step.certificate = cert.str();
    step.seconds = since(t0);
    return step;
  } catch (const std::bad_alloc&) {
    const std::string reason = "saturation stopped: out of memory";
    if (ideal_certificate(reason)) return step;
    step.status = StepStatus::budget_exceeded;
    step.summary = reason;
    step.certificate = cert.str();
    step.seconds = since(t0);
    return step;
  }
  step.counters = gb.stats.summary();
  if (unit) {
    step.status = StepStatus::verified;
    step.summary = "rung 1: saturation is the unit ideal";
    cert << "rung: 1\nbasis: 1\n";
    step.certificate = cert.str();
    step.seconds = since(t0);
    return step;
  }

  // Rung 2: an eliminant without roots in (0, 1). The extended ideal
  // <I, 1 - w g> meets Q[v] in the same ideal as the saturation does.
  const std::size_t n = prep.ring->size();
  cert << "rung1: not unit, basis size " << gb.basis.size() << "\n";
  std::vector<std::size_t> order;
  for (const auto& v : options.elimination_order)
    for (std::size_t k = 0; k < n; ++k)
      if (prep.source[k] == v) order.push_back(k);
  for (std::size_t k = 0; k < n; ++k)
    if (std::find(order.begin(), order.end(), k) == order.end()) order.push_back(k);

  const bool zero_dim = is_zero_dimensional(gb);
  std::vector<Eliminant> eliminants;
  for (std::size_t k : order) {
    std::optional<Polynomial> mp;
    if (zero_dim) {
      mp = minimal_polynomial(gb, k, options.max_eliminant_degree);
    } else {
      try {
        Ideal ext = gb.ideal();
        Ideal elim = eliminate(ext, {gb.ring->name(k)}, bopts);
        if (elim.generators().size() == 1) mp = elim.generators().front();
      } catch (const BudgetExceeded& e) {
        cert << "eliminant " << prep.ring->name(k) << ": budget exceeded\n";
        continue;
      }
    }
    if (!mp) {
      cert << "eliminant " << prep.ring->name(k) << ": none found\n";
      continue;
    }
    UniPoly up = UniPoly::from_polynomial(*mp);
    if (up.degree() <= 0) continue;
    if (prep.unbounded[k]) up = positive_to_unit(up);
    auto sturm = no_roots_in_unit_interval(up);
    eliminants.push_back({k, up, sturm});
    if (sturm.no_roots()) {
      step.status = StepStatus::verified;
      step.summary = "rung 2: eliminant in " + prep.ring->name(k) + " of degree " + std::to_string(up.degree()) +
                     (prep.unbounded[k] ? " has no roots in (0,inf)" : " has no roots in (0,1)");
      cert << "rung: 2\nvariable: " << prep.ring->name(k) << "\n"
           << sturm.to_string(prep.unbounded[k] ? "t" : prep.ring->name(k));
      step.certificate = cert.str();
      step.seconds = since(t0);
      return step;
    }
    cert << "eliminant " << prep.ring->name(k) << ": degree " << up.degree() << ", " << sturm.roots
         << " roots in (0,1)\n";
  }

  // Rung 3 fallback: the values of q on the whole complex variety are the
  // roots of the minimal polynomial of q in the quotient algebra. None of them
  // negative means q >= 0 at every critical point, wherever it lies.
  auto critical_values = [&](const std::string& reason) {
    cert << reason << "\n";
    std::vector<std::size_t> same(n);
    for (std::size_t k = 0; k < n; ++k) same[k] = k;
    std::optional<std::vector<Rational>> vals;
    if (zero_dim) vals = minimal_polynomial_of(gb, prep.q.remap(gb.ring, same), options.max_eliminant_degree);
    if (!vals) {
      if (ideal_certificate(reason + "; no critical value polynomial")) return step;
      step.status = StepStatus::failed;
      step.summary = reason + "; no critical value polynomial available";
      step.certificate = cert.str();
      step.seconds = since(t0);
      return step;
    }
    // Negative values of q are the positive roots of f(-t).
    std::vector<Rational> mirrored = *vals;
    for (std::size_t i = 1; i < mirrored.size(); i += 2) mirrored[i] = -mirrored[i];
    const UniPoly f(*vals);
    auto sturm = no_roots_in_unit_interval(positive_to_unit(UniPoly(mirrored)));
    const bool ok = sturm.no_roots();
    if (!ok && ideal_certificate("critical value polynomial has a negative root")) return step;
    step.status = ok ? StepStatus::verified : StepStatus::failed;
    step.summary = "rung 3: critical value polynomial of degree " + std::to_string(f.degree()) +
                   (ok ? " has no negative roots" : " has a negative root");
    cert << "rung: 3 (critical values)\nvalue polynomial: " << f.to_string("q") << "\n"
         << "negative roots mapped by t = -q/(1-q)\n"
         << sturm.to_string("t");
    step.certificate = cert.str();
    step.seconds = since(t0);
    return step;
  };

  // Rung 3: every coordinate of a critical point in the open box is a root
  // of its eliminant in (0, 1); when all such roots are rational, the
  // candidates are finitely many rational points to evaluate exactly.
  if (eliminants.size() != n) return critical_values("some coordinate has no eliminant");
  std::sort(eliminants.begin(), eliminants.end(), [](const Eliminant& a, const Eliminant& b) { return a.var < b.var; });
  std::vector<std::vector<Rational>> coords(n);
  for (const auto& e : eliminants) {
    coords[e.var] = rational_roots_in_unit_interval(e.sturm.deflated);
    if (prep.unbounded[e.var])
      for (auto& c : coords[e.var]) c = c / (1 - c);
    if (coords[e.var].size() != e.sturm.roots)
      return critical_values("irrational critical coordinate in " + prep.ring->name(e.var));
  }
  std::vector<Rational> point(n), ext_point(n + 1);
  std::vector<std::size_t> pos(n, 0);
  std::size_t genuine = 0;
  bool all_nonnegative = true;
  for (;;) {
    for (std::size_t k = 0; k < n; ++k) point[k] = coords[k][pos[k]];
    Rational g = 1;
    for (const auto& c : point) g *= c;
    std::copy(point.begin(), point.end(), ext_point.begin());
    ext_point[n] = 1 / g;
    bool on_variety = std::all_of(gb.basis.begin(), gb.basis.end(),
                                  [&](const Polynomial& f) { return evaluate(f, ext_point) == 0; });
    if (on_variety) {
      ++genuine;
      Rational value = evaluate(prep.q, point);
      cert << "critical point:";
      for (std::size_t k = 0; k < n; ++k) cert << " " << prep.ring->name(k) << "=" << to_string(point[k]);
      cert << " value=" << to_string(value) << "\n";
      if (value < 0) all_nonnegative = false;
    }
    std::size_t k = 0;
    while (k < n && ++pos[k] == coords[k].size()) pos[k++] = 0;
    if (k == n || coords[0].empty()) break;
  }
  step.status = all_nonnegative ? StepStatus::verified : StepStatus::failed;
  step.summary = "rung 3: " + std::to_string(genuine) + " rational critical point(s) in the open box, " +
                 (all_nonnegative ? "all values nonnegative" : "negative value found");
  cert << "rung: 3\n";
  step.certificate = cert.str();
  step.seconds = since(t0);
  return step;
}

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

std::string after(const std::string& line, const std::string& key) { return line.substr(key.size()); }

bool starts_with(const std::string& line, const std::string& key) { return line.rfind(key, 0) == 0; }

// The Sturm block starting at `first`: recomputed from its input line it
// must reproduce itself and count no roots.
bool recheck_sturm_block(const std::vector<std::string>& lines, std::size_t first, std::string* why) {
  if (first >= lines.size() || !starts_with(lines[first], "input: ")) {
    if (why) *why = "missing Sturm block";
    return false;
  }
  const std::string text = after(lines[first], "input: ");
  const auto vars = scan_variables(text);
  const std::string var = vars.empty() ? "t" : vars.front();
  auto again = no_roots_in_unit_interval(UniPoly::from_polynomial(parse_polynomial(text)));
  const auto expected = lines_of(again.to_string(var));
  for (std::size_t i = 0; i < expected.size(); ++i)
    if (first + i >= lines.size() || lines[first + i] != expected[i]) {
      if (why) *why = "Sturm block differs from recomputation at: " + expected[i];
      return false;
    }
  if (!again.no_roots()) {
    if (why) *why = "Sturm count is not zero";
    return false;
  }
  return true;
}

}  // namespace

namespace {

bool recheck_parsed(const ProofStep& step, std::string* why) {
  auto fail = [&](const std::string& reason) {
    if (why) *why = reason;
    return false;
  };
  if (step.status != StepStatus::verified) return fail("step is not verified");
  const auto lines = lines_of(step.certificate);
  std::optional<RingPtr> ring;
  std::optional<Polynomial> q;
  std::vector<Polynomial> generators;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& line = lines[i];
    if (starts_with(line, "ring: ")) {
      std::vector<std::string> names;
      std::istringstream is(after(line, "ring: "));
      for (std::string v; std::getline(is, v, ',');) names.push_back(v);
      ring = make_ring(names);
    } else if (starts_with(line, "q: ") && ring) {
      q = parse_polynomial(after(line, "q: "), *ring);
    } else if (starts_with(line, "generator: ") && ring) {
      generators.push_back(parse_polynomial(after(line, "generator: "), *ring));
    } else if (line == "rung: 1") {
      return i + 1 < lines.size() && lines[i + 1] == "basis: 1" ? true : fail("rung 1 without unit basis");
    } else if (line == "rung: 2") {
      return recheck_sturm_block(lines, i + 2, why);
    } else if (line == "rung: 3 (critical values)") {
      if (i + 2 >= lines.size() || !starts_with(lines[i + 1], "value polynomial: "))
        return fail("missing value polynomial");
      UniPoly f = UniPoly::from_polynomial(parse_polynomial(after(lines[i + 1], "value polynomial: ")));
      std::vector<Rational> mirrored = f.coefficients();
      for (std::size_t k = 1; k < mirrored.size(); k += 2) mirrored[k] = -mirrored[k];
      auto mapped = no_roots_in_unit_interval(positive_to_unit(UniPoly(mirrored)));
      if (i + 3 >= lines.size() || lines[i + 3] != "input: " + mapped.input.to_string("t"))
        return fail("value polynomial does not match the Sturm input");
      return recheck_sturm_block(lines, i + 3, why);
    } else if (line == "rung: 3 (ideal certificate)") {
      if (!ring || !q) return fail("missing ring or q");
      for (const auto& l : lines)
        if (starts_with(l, "range: ") || starts_with(l, "dehomogenized: "))
          return fail("ideal certificate needs the unit box");
      // The generators must be the partial derivatives of q.
      if (generators.size() != (*ring)->size()) return fail("generator count differs from the ring");
      for (std::size_t k = 0; k < generators.size(); ++k)
        if (!(generators[k] == differentiate(*q, k))) return fail("generator is not a partial derivative of q");
      std::vector<unsigned> degrees;
      std::vector<Polynomial> multipliers(generators.size(), Polynomial(*ring));
      std::string stated;
      for (std::size_t j = i + 1; j < lines.size(); ++j) {
        const auto& l = lines[j];
        if (starts_with(l, "bernstein degrees: ")) {
          std::istringstream is(after(l, "bernstein degrees: "));
          for (std::string d; std::getline(is, d, ',');) degrees.push_back(static_cast<unsigned>(std::stoul(d)));
        } else if (starts_with(l, "multiplier ") && !starts_with(l, "multiplier degree: ")) {
          const auto colon = l.find(": ");
          const std::size_t index = std::stoul(l.substr(11, colon - 11));
          if (index == 0 || index > multipliers.size()) return fail("multiplier index out of range");
          multipliers[index - 1] = parse_polynomial(l.substr(colon + 2), *ring);
        } else if (starts_with(l, "bernstein coefficients: ")) {
          stated = after(l, "bernstein coefficients: ");
        }
      }
      if (degrees.size() != (*ring)->size()) return fail("missing Bernstein degrees");
      Rational minimum;
      try {
        if (!check_ideal_certificate(*q, generators, multipliers, degrees, &minimum))
          return fail("negative Bernstein coefficient");
      } catch (const std::invalid_argument& e) {
        return fail(e.what());
      }
      std::size_t count = 1;
      for (unsigned d : degrees) count *= d + 1;
      if (stated != std::to_string(count) + ", minimum " + to_string(minimum))
        return fail("stated Bernstein summary does not match");
      return true;
    } else if (line == "rung: 3") {
      if (!q) return fail("missing q");
      // Each listed point must be critical with the stated nonnegative value.
      bool any = false;
      for (const auto& l : lines) {
        if (!starts_with(l, "critical point: ")) continue;
        any = true;
        std::map<std::string, Rational> pt;
        std::istringstream is(after(l, "critical point: "));
        Rational stated;
        for (std::string tok; is >> tok;) {
          const auto eq = tok.find('=');
          Rational v(tok.substr(eq + 1));
          v.canonicalize();
          if (tok.substr(0, eq) == "value") stated = v;
          else pt[tok.substr(0, eq)] = v;
        }
        for (const auto& g : generators)
          if (evaluate(g, pt) != 0) return fail("listed point is not critical: " + l);
        const Rational value = evaluate(*q, pt);
        if (value != stated || value < 0) return fail("value check fails: " + l);
      }
      (void)any;
      return true;
    }
  }
  return fail("no rung recorded");
}

}  // namespace

bool recheck_certificate(const ProofStep& step, std::string* why) {
  try {
    return recheck_parsed(step, why);
  } catch (const std::exception& e) {
    if (why) *why = std::string("malformed certificate: ") + e.what();
    return false;
  }
}

// p is homogeneous in x, y, z, u, b, so one of them may be set to 1.
constexpr const char* kInteriorDehomogenize = "b";

ProofStep certify_interior(const Polynomial& p, const LadderOptions& options) {
  LadderOptions opts = options;
  if (opts.dehomogenize.empty()) {
    opts.dehomogenize = kInteriorDehomogenize;
    opts.grading = {"x", "y", "z", "u", "b"};
  }
  return certify_critical_points("interior", p, {"r", "x", "y", "z", "u", "b"}, opts);
}

ProofStep certify_slice(const SliceSpec& slice, const Polynomial& p, const LadderOptions& options) {
  const RingPtr& ring = p.ring();
  std::vector<std::string> free;
  std::map<std::string, Polynomial> bindings;
  for (const auto& v : ring->names()) {
    if (std::find(slice.fixed.begin(), slice.fixed.end(), v) != slice.fixed.end()) continue;
    free.push_back(v);
  }
  RingPtr small = make_ring(free);
  for (const auto& v : slice.fixed) bindings.emplace(v, Polynomial(small, Rational(1)));
  Polynomial q = substitute(p, bindings, small);
  return certify_critical_points("slice " + slice.name(), q, free, options);
}

namespace {

Rational random_unit_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> den(2, 1000);
  long d = den(rng);
  std::uniform_int_distribution<long> num(1, d - 1);
  Rational q(num(rng), d);
  q.canonicalize();
  return q;
}

ProofStep sample_signs(const std::string& name, const Polynomial& p, unsigned samples, std::uint64_t seed,
                       bool r_endpoints) {
  const auto t0 = Clock::now();
  ProofStep step;
  step.name = name;
  std::mt19937_64 rng(seed);
  std::vector<Rational> point(p.ring()->size());
  const std::size_t ri = p.ring()->require("r");
  Rational min_value;
  bool first = true;
  unsigned negative = 0;
  for (unsigned s = 0; s < samples; ++s) {
    for (auto& c : point) c = random_unit_rational(rng);
    if (r_endpoints) point[ri] = s % 2;
    Rational v = evaluate(p, point);
    if (v < 0) ++negative;
    if (first || v < min_value) min_value = v;
    first = false;
  }
  step.status = negative == 0 ? StepStatus::verified : StepStatus::failed;
  std::ostringstream os;
  os << samples << " exact samples (seed " << seed << "), " << negative << " negative";
  if (r_endpoints) os << "; sampling only, nonnegativity for r in {0,1} is an external theorem";
  step.summary = os.str();
  step.counters = "samples=" + std::to_string(samples) + " seed=" + std::to_string(seed);
  step.certificate = "min_value: " + to_string(min_value) + "\n";
  step.seconds = since(t0);
  return step;
}

}  // namespace

ProofStep check_r_endpoints(const Polynomial& p, unsigned samples, std::uint64_t seed) {
  return sample_signs("r_endpoints", p, samples, seed, true);
}

ProofStep check_interior_samples(const Polynomial& p, unsigned samples, std::uint64_t seed) {
  return sample_signs("interior_samples", p, samples, seed, false);
}

}  // namespace bmv
