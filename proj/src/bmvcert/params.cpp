#include <sstream>

#include "bmv/cert.hpp"

namespace bmv {

namespace {

const std::vector<std::string> kPVars = {"r", "x", "y", "z", "u", "b"};

Polynomial var(const RingPtr& ring, std::string_view name) { return Polynomial::variable(ring, name); }

Polynomial parse(const RingPtr& ring, std::string_view text) { return parse_polynomial(text, ring); }

std::string identity_certificate(const std::vector<std::pair<std::string, Polynomial>>& items) {
  std::ostringstream os;
  for (const auto& [label, poly] : items) os << label << ": " << poly.to_string() << "\n";
  return os.str();
}

bool all_coefficients_nonnegative(const Polynomial& f, std::string* offending) {
  for (const auto& t : f.terms())
    if (t.coefficient < 0) {
      if (offending) *offending = to_string(Polynomial(f.ring(), std::vector<Term>{t}));
      return false;
    }
  return true;
}

}  // namespace

RingPtr p_ring() {
  static const RingPtr ring = make_ring(kPVars);
  return ring;
}

Parameterization build_parameterized_AB() {
  static const RingPtr ring = make_ring({"r", "x", "y", "z", "u", "b", "b_inv", "u_inv"});
  const Polynomial one(ring, Rational(1));
  const Polynomial zero(ring);
  const auto r = var(ring, "r"), x = var(ring, "x"), y = var(ring, "y"), z = var(ring, "z");
  const auto b = var(ring, "b");
  const auto a11 = parse(ring, "x^2*b_inv + u^2*b_inv");
  const auto c33 = parse(ring, "x^2*y^2*u_inv^2*b_inv + y^2*b_inv + 2*x*y*z*u_inv^2 + z^2*b*u_inv^2");
  PolyMatrix a = PolyMatrix::diagonal(ring, {one, r, zero});
  PolyMatrix bm(ring, {{a11, x, -z}, {x, b, y}, {-z, y, c33}});
  return {ring, std::move(a), std::move(bm)};
}

Polynomial clear_laurent(const Polynomial& f) {
  const Ring& src = *f.ring();
  const RingPtr target = p_ring();
  const std::size_t bi = src.require("b"), b_inv = src.require("b_inv");
  const std::size_t ui = src.require("u"), u_inv = src.require("u_inv");
  std::vector<Term> terms;
  for (const auto& t : f.terms()) {
    Monomial m = t.monomial;
    unsigned cb = std::min(m[bi], m[b_inv]);
    m.set(bi, m[bi] - cb);
    m.set(b_inv, m[b_inv] - cb);
    unsigned cu = std::min(m[ui], m[u_inv]);
    m.set(ui, m[ui] - cu);
    m.set(u_inv, m[u_inv] - cu);
    if (m[b_inv] || m[u_inv]) throw std::domain_error("denominator does not clear: " + to_string(m, src));
    Monomial out(target->size());
    for (std::size_t v = 0; v < target->size(); ++v) out.set(v, m[src.require(target->name(v))]);
    terms.push_back({out, t.coefficient});
  }
  return Polynomial(target, std::move(terms));
}

Polynomial build_p() {
  auto param = build_parameterized_AB();
  Polynomial tr = hurwitz(param.a, param.b, 6, 3).trace();
  Polynomial scaled = tr * parse(param.ring, "b^3*u^2");
  return clear_laurent(scaled);
}

ProofStep check_parameterization() {
  ProofStep step;
  step.name = "parameterization";
  auto param = build_parameterized_AB();
  Polynomial det = clear_laurent(determinant(param.b) * parse(param.ring, "b*u^2"));
  Polynomial minor = clear_laurent((param.b(0, 0) * param.b(1, 1) - param.b(0, 1) * param.b(1, 0)));
  Polynomial u2 = parse(p_ring(), "u^2");
  const bool ok = det.is_zero() && minor == u2 && param.b.is_symmetric();
  step.status = ok ? StepStatus::verified : StepStatus::failed;
  step.summary = ok ? "B is symmetric, b*u^2*det(B) = 0 and a*b - x^2 = u^2"
                    : "parameterization identities do not hold";
  step.certificate = identity_certificate({{"b*u^2*det(B)", det}, {"a*b - x^2", minor}});
  return step;
}

ProofStep check_complex_reduction() {
  ProofStep step;
  step.name = "complex_reduction";
  // z and its conjugate zc are independent commuting symbols.
  auto ring = make_ring({"r", "s", "a", "b", "c", "x", "y", "z", "zc"});
  const Polynomial one(ring, Rational(1));
  PolyMatrix a = PolyMatrix::diagonal(ring, {one, var(ring, "r"), var(ring, "s")});
  PolyMatrix bm = parse_matrix("a, x, z; x, b, y; zc, y, c", ring);
  Polynomial w = hurwitz(a, bm, 6, 3).trace();

  const std::size_t zi = ring->require("z"), zci = ring->require("zc");
  std::vector<Term> parts[4];  // alpha (z*zc), beta (z), gamma (zc), delta (1)
  bool shape_ok = true;
  std::string bad_shape;
  for (const auto& t : w.terms()) {
    const unsigned ez = t.monomial[zi], ec = t.monomial[zci];
    int slot = -1;
    if (ez == 1 && ec == 1) slot = 0;
    else if (ez == 1 && ec == 0) slot = 1;
    else if (ez == 0 && ec == 1) slot = 2;
    else if (ez == 0 && ec == 0) slot = 3;
    if (slot < 0) {
      shape_ok = false;
      bad_shape = to_string(t.monomial, *ring);
      continue;
    }
    Monomial m = t.monomial;
    m.set(zi, 0);
    m.set(zci, 0);
    parts[slot].push_back({m, t.coefficient});
  }
  const char* labels[4] = {"alpha", "beta", "gamma", "delta"};
  std::vector<std::pair<std::string, Polynomial>> items;
  bool nonneg = true;
  std::string offending;
  for (int i = 0; i < 4; ++i) {
    Polynomial part(ring, parts[i]);
    std::string off;
    if (!all_coefficients_nonnegative(part, &off)) {
      nonneg = false;
      offending = std::string(labels[i]) + " term " + off;
    }
    items.emplace_back(labels[i], part);
  }
  // Hermitian symmetry: beta and gamma coincide (x, y are real here).
  const bool symmetric = Polynomial(ring, parts[1]) == Polynomial(ring, parts[2]);
  if (!shape_ok) {
    step.status = StepStatus::failed;
    step.summary = "trace has a term outside alpha*z*zc + beta*z + gamma*zc + delta: " + bad_shape;
  } else if (!nonneg) {
    step.status = StepStatus::failed;
    step.summary = "negative coefficient in " + offending;
  } else {
    step.status = StepStatus::verified;
    step.summary = std::string("alpha, beta, gamma, delta are coefficient-wise nonnegative") +
                   (symmetric ? "; beta = gamma" : "; beta != gamma");
  }
  step.certificate = identity_certificate(items);
  return step;
}

ProofStep check_b_zero_case() {
  ProofStep step;
  step.name = "b_zero_case";
  auto ring = make_ring({"r", "a", "c", "y", "z"});
  const Polynomial one(ring, Rational(1));
  PolyMatrix a = PolyMatrix::diagonal(ring, {one, var(ring, "r"), Polynomial(ring)});
  PolyMatrix bm = parse_matrix("a, 0, z; 0, 0, y; z, y, c", ring);
  Polynomial tr = hurwitz(a, bm, 6, 3).trace();
  Polynomial expected = parse(ring, "6*z^2*c + 24*a*z^2 + 20*a^3 + 6*r^3*y^2*c");
  Polynomial diff = tr - expected;
  std::string off;
  const bool nonneg = all_coefficients_nonnegative(tr, &off);
  step.status = diff.is_zero() && nonneg ? StepStatus::verified : StepStatus::failed;
  step.summary = diff.is_zero() ? "Tr S_{6,3} = 6*z^2*c + 24*a*z^2 + 20*a^3 + 6*r^3*y^2*c"
                                : "trace differs from the expected formula";
  step.certificate = identity_certificate({{"trace", tr}, {"difference", diff}});
  return step;
}

ProofStep check_degenerate_cases() {
  ProofStep step;
  step.name = "degenerate_cases";
  auto ring = make_ring({"a", "b", "c", "x", "y", "z"});
  PolyMatrix bm = parse_matrix("a, x, z; x, b, y; z, y, c", ring);
  Polynomial det = determinant(bm);
  Polynomial det_expected = parse(ring, "2*x*z*y + a*b*c - a*y^2 - x^2*c - z^2*b");
  Polynomial det_c0 = substitute(det, {{"c", Polynomial(ring)}});
  Polynomial det_c0_expected = parse(ring, "2*x*y*z - a*y^2 - z^2*b");
  // (a y^2 + b z^2)^2 - (2xyz)^2 = (a y^2 - b z^2)^2 + 4 y^2 z^2 (a b - x^2)
  auto P = [&](std::string_view text) { return parse(ring, text); };
  Polynomial sos1 = power(P("a*y^2 + b*z^2"), 2) - P("4*x^2*y^2*z^2") - power(P("a*y^2 - b*z^2"), 2) -
                    P("4*y^2*z^2") * P("a*b - x^2");
  // b (b z^2 + x^2 y^2 / b - 2xyz) = (b z - x y)^2
  Polynomial sos2 = P("b^2*z^2 + x^2*y^2 - 2*x*y*b*z") - power(P("b*z - x*y"), 2);
  const bool ok = (det - det_expected).is_zero() && (det_c0 - det_c0_expected).is_zero() && sos1.is_zero() &&
                  sos2.is_zero();
  step.status = ok ? StepStatus::verified : StepStatus::failed;
  step.summary = ok ? "det(B) expansion, c = 0 branch and a*b = x^2 branch identities hold"
                    : "a degenerate-case identity fails";
  step.certificate = identity_certificate({{"det(B) - expected", det - det_expected},
                                           {"det(B)|c=0 - expected", det_c0 - det_c0_expected},
                                           {"c=0 square identity residual", sos1},
                                           {"ab=x^2 square identity residual", sos2}});
  return step;
}

ProofStep build_p_step(const Polynomial& p) {
  ProofStep step;
  step.name = "build_p";
  bool integral = true;
  for (const auto& t : p.terms())
    if (t.coefficient.get_den() != 1) integral = false;
  // Homogeneity in (x, y, z, u, b): read the degree off the terms.
  std::optional<unsigned> degree;
  bool homogeneous = true;
  for (const auto& t : p.terms()) {
    unsigned d = t.monomial.total_degree() - t.monomial[0];
    if (!degree) degree = d;
    else if (*degree != d) homogeneous = false;
  }
  step.status = integral && homogeneous && !p.is_zero() ? StepStatus::verified : StepStatus::failed;
  std::ostringstream os;
  os << "p has " << p.term_count() << " integer terms";
  if (homogeneous && degree) os << ", homogeneous of degree " << *degree << " in x, y, z, u, b";
  step.summary = os.str();
  step.certificate = "p: " + p.to_string() + "\n";
  return step;
}

ProofStep negative_terms(const Polynomial& p) {
  ProofStep step;
  step.name = "negative_terms";
  std::vector<Term> neg;
  for (const auto& t : p.terms())
    if (t.coefficient < 0) neg.push_back(t);
  Polynomial negative(p.ring(), neg);
  const Polynomial common = parse_polynomial("-12*b^3*u^2*x*y*z", p.ring());
  const Polynomial factored = common * parse_polynomial("r^3 + r^2 + r + 1", p.ring());
  const Polynomial displayed = common * parse_polynomial("r^2 + r + 1", p.ring());
  // Each face v = 0 must leave only nonnegative coefficients.
  bool faces_ok = true;
  for (const char* v : {"x", "y", "z", "u", "b"}) {
    Polynomial face = substitute(p, {{v, Polynomial(p.ring())}});
    for (const auto& t : face.terms())
      if (t.coefficient < 0) faces_ok = false;
  }
  const bool matches = negative == factored;
  step.status = matches && faces_ok ? StepStatus::verified : StepStatus::failed;
  std::ostringstream os;
  os << "negative part = -12*b^3*u^2*x*y*z*(r^3 + r^2 + r + 1)" << (matches ? "" : " does not hold")
     << "; faces v = 0 nonnegative: " << (faces_ok ? "yes" : "no");
  step.summary = os.str();
  step.certificate = identity_certificate({{"negative part", negative},
                                           {"negative part - factored form", negative - factored},
                                           {"negative part - (r^2 + r + 1) form", negative - displayed}});
  return step;
}

}  // namespace bmv
