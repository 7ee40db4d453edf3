#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bmv/cert.hpp"
#include "bmv/numsearch.hpp"

namespace {

using namespace bmv;

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;
constexpr int kBudget = 3;

// Default budgets come from the environment so long jobs can be scripted.
constexpr const char* kEnvPairs = "BMV_BUDGET_PAIRS";
constexpr const char* kEnvSeconds = "BMV_BUDGET_SECONDS";

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// "@path" reads a file, "-" reads standard input, anything else is literal.
std::string read_arg(const std::string& value) {
  if (value == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  if (!value.empty() && value.front() == '@') {
    std::ifstream in(value.substr(1));
    if (!in) throw UsageError("cannot read " + value.substr(1));
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  return value;
}

std::string trim(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  return s.substr(i);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, sep);)
    if (!trim(item).empty()) out.push_back(trim(item));
  return out;
}

std::uint64_t env_or(const char* name, std::uint64_t fallback) {
  const char* v = std::getenv(name);
  return v ? std::stoull(v) : fallback;
}

double env_or(const char* name, double fallback) {
  const char* v = std::getenv(name);
  return v ? std::stod(v) : fallback;
}

struct BudgetArgs {
  std::uint64_t pairs = 0;
  double seconds = 0;

  void add_to(CLI::App* app, std::uint64_t default_pairs, double default_seconds) {
    pairs = env_or(kEnvPairs, default_pairs);
    seconds = env_or(kEnvSeconds, default_seconds);
    app->add_option("--budget-pairs", pairs, "S-pair budget (0 = unlimited)")->capture_default_str();
    app->add_option("--budget-seconds", seconds, "wall-clock budget (0 = unlimited)")->capture_default_str();
  }
  Budget budget() const {
    Budget b;
    b.max_pairs = pairs;
    b.max_seconds = seconds;
    return b;
  }
};

// Ring variables: --vars when given, otherwise identifiers in order of first
// appearance.
RingPtr ring_for(const std::string& vars, const std::string& text) {
  if (!vars.empty()) return make_ring(split(vars, ','));
  std::vector<std::string> names;
  for (std::size_t i = 0; i < text.size();) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (std::isalpha(c) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      std::string name = text.substr(i, j - i);
      if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
      i = j;
    } else if (std::isdigit(c)) {
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    } else {
      ++i;
    }
  }
  if (names.empty()) names.push_back("x");
  return make_ring(names);
}

Ideal read_ideal(const std::string& source, const std::string& vars) {
  const std::string text = read_arg(source == "-" ? source : "@" + source);
  auto lines = read_ideal_lines(text);
  std::string joined;
  for (const auto& l : lines) joined += l + "\n";
  RingPtr ring = ring_for(vars, joined);
  Ideal ideal(ring);
  for (const auto& l : lines) ideal.add(parse_polynomial(l, ring));
  return ideal;
}

MonomialOrder order_named(const std::string& name, const Ring& ring) {
  if (name == "grevlex") return MonomialOrder::grevlex(ring.size());
  if (name == "lex") return MonomialOrder::lex(ring.size());
  throw UsageError("unknown order: " + name);
}

void print_ideal(const Ideal& ideal) {
  std::cout << "# ring: ";
  for (std::size_t v = 0; v < ideal.ring()->size(); ++v) std::cout << (v ? "," : "") << ideal.ring()->name(v);
  std::cout << "\n";
  for (const auto& g : ideal.generators()) std::cout << g.to_string() << "\n";
}

struct MatrixArgs {
  std::string a, b, vars;
  bool example = false;

  void add_to(CLI::App* app) {
    app->add_option("--a", a, "matrix A: rows separated by ';', entries by ','");
    app->add_option("--b", b, "matrix B");
    app->add_option("--vars", vars, "ring variables, comma separated");
    app->add_flag("--example", example, "use A = diag(1, x1, x2) and the 3 x 3 example B");
  }
  std::pair<PolyMatrix, PolyMatrix> load() const {
    std::string at = a, bt = b;
    if (example) {
      at = "1, 0, 0; 0, x1, 0; 0, 0, x2";
      bt = "-2, 1, 0; -1, 2, 3; 1, -1, 3";
    }
    if (at.empty() || bt.empty()) throw UsageError("--a and --b are required (or --example)");
    at = read_arg(at);
    bt = read_arg(bt);
    RingPtr ring = ring_for(vars, at + ";" + bt);
    return {parse_matrix(trim(at), ring), parse_matrix(trim(bt), ring)};
  }
};

int run_hurwitz(const MatrixArgs& mats, unsigned m, unsigned k, bool brute) {
  auto [a, b] = mats.load();
  if (k > m) throw UsageError("--k must not exceed --m");
  std::cout << (brute ? hurwitz_bruteforce(a, b, m, k) : hurwitz(a, b, m, k)).to_string() << "\n";
  return kOk;
}

int run_trace_coeffs(const MatrixArgs& mats, unsigned m) {
  auto [a, b] = mats.load();
  std::vector<unsigned> levels{m};
  if (m > 0) levels.push_back(m - 1);
  for (unsigned l : levels) {
    auto coeffs = trace_coefficients(a, b, l);
    for (unsigned k = 0; k <= l; ++k)
      std::cout << "Tr S_{" << l << "," << k << "} = " << coeffs[k].to_string() << "\n";
  }
  return kOk;
}

int run_lemma1(const MatrixArgs& mats, unsigned m, unsigned k, unsigned symbolic) {
  std::optional<std::pair<PolyMatrix, PolyMatrix>> ab;
  if (symbolic) {
    auto names = symbolic_names("a", symbolic, true);
    auto bnames = symbolic_names("b", symbolic, false);
    names.insert(names.end(), bnames.begin(), bnames.end());
    RingPtr ring = make_ring(names);
    ab.emplace(symbolic_diagonal(ring, "a", symbolic), symbolic_matrix(ring, "b", symbolic, false));
  } else {
    ab.emplace(mats.load());
  }
  if (k >= m) throw UsageError("lemma1 needs k < m");
  Polynomial diff = lemma1_difference(ab->first, ab->second, m, k);
  std::cout << "difference: " << diff.to_string() << "\n";
  std::cout << "lemma1: " << (diff.is_zero() ? "holds" : "fails") << "\n";
  return diff.is_zero() ? kOk : kFailed;
}

int run_groebner(const std::string& src, const std::string& vars, const std::string& order, const BudgetArgs& budget,
                 bool stats) {
  Ideal ideal = read_ideal(src, vars);
  BuchbergerOptions opts;
  opts.budget = budget.budget();
  auto gb = buchberger(ideal, order_named(order, *ideal.ring()), opts);
  print_ideal(gb.ideal());
  if (stats) std::cerr << gb.stats.summary() << "\n";
  return kOk;
}

int run_saturate(const std::string& src, const std::string& vars, const std::string& by, bool unit_only,
                 const BudgetArgs& budget) {
  Ideal ideal = read_ideal(src, vars);
  Polynomial g = parse_polynomial(read_arg(by), ideal.ring());
  BuchbergerOptions opts;
  opts.budget = budget.budget();
  if (unit_only) {
    const bool unit = saturation_is_unit(ideal, g, opts);
    std::cout << "unit: " << (unit ? "yes" : "no") << "\n";
    return kOk;
  }
  Ideal sat = saturate(ideal, g, opts);
  auto gb = buchberger(sat, default_order(*sat.ring()), opts);
  print_ideal(gb.ideal());
  return kOk;
}

int run_eliminate(const std::string& src, const std::string& vars, const std::string& keep, const BudgetArgs& budget) {
  Ideal ideal = read_ideal(src, vars);
  BuchbergerOptions opts;
  opts.budget = budget.budget();
  print_ideal(eliminate(ideal, split(keep, ','), opts));
  return kOk;
}

int run_sturm(const std::string& poly, const std::string& interval, bool assert_none, bool show_chain) {
  UniPoly p = parse_unipoly(read_arg(poly));
  auto ends = split(interval, ',');
  if (ends.size() != 2) throw UsageError("--interval expects lo,hi");
  Rational lo(ends[0]), hi(ends[1]);
  lo.canonicalize();
  hi.canonicalize();
  if (!(lo < hi)) throw UsageError("empty interval");
  unsigned roots = 0;
  if (lo == 0 && hi == 1) {
    auto cert = no_roots_in_unit_interval(p);
    if (show_chain) std::cout << cert.to_string("x");
    else std::cout << "roots_in_open_interval: " << cert.roots << "\n";
    roots = cert.roots;
  } else {
    // Roots at the endpoints do not count; divide them out first.
    UniPoly q = squarefree_part(p);
    for (const Rational& e : {lo, hi})
      if (q.sign_at(e) == 0) q = divmod(q, UniPoly(std::vector<Rational>{-e, 1})).quotient;
    roots = count_roots_open(q, lo, hi);
    std::cout << "roots_in_open_interval: " << roots << "\n";
  }
  return assert_none && roots > 0 ? kFailed : kOk;
}

int run_build_p() {
  Polynomial p = build_p();
  std::cout << p.to_string() << "\n";
  std::cerr << "terms: " << p.term_count() << " sha256: " << sha256_hex(p.to_string()) << "\n";
  return kOk;
}

int status_code(const CertificationReport& report) {
  bool budget = false;
  for (const auto& s : report.steps) {
    if (s.status == StepStatus::failed) return kFailed;
    if (s.status == StepStatus::budget_exceeded) budget = true;
  }
  if (budget) return kBudget;
  return report.certified() ? kOk : kFailed;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

int run_certify(const BudgetArgs& budget, const std::vector<std::string>& slices, const std::string& resume,
                unsigned jobs, bool timings, const std::string& output, bool quiet) {
  CertifyOptions opts;
  opts.budget_pairs = budget.pairs;
  opts.budget_seconds = budget.seconds;
  for (const auto& s : slices)
    for (const auto& part : split(s, ';')) {
      if (part != "all" && part != "interior" && part != "slices" && part != "singles") SliceSpec::parse(part);
      opts.only.push_back(part);
    }
  opts.jobs = jobs;
  opts.timings = timings;
  std::optional<CertificationReport> prior;
  if (!resume.empty()) {
    prior = CertificationReport::parse(read_arg("@" + resume));
    opts.resume = &*prior;
  }
  if (!quiet)
    opts.on_step = [](const ProofStep& s) { std::cerr << "[" << to_string(s.status) << "] " << s.name << ": " << s.summary << "\n"; };
  auto report = certify_m6n3(opts);
  write_output(output, report.serialize());
  return status_code(report);
}

int run_slice(const std::string& fixed, const BudgetArgs& budget) {
  LadderOptions opts;
  opts.budget = budget.budget();
  ProofStep step = certify_slice(SliceSpec::parse(fixed), build_p(), opts);
  CertificationReport report;
  report.p_hash = sha256_hex(build_p().to_string());
  report.budget_pairs = budget.pairs;
  report.budget_seconds = budget.seconds;
  report.steps.push_back(step);
  std::cout << report.serialize();
  return status_code(report);
}

int run_scan(std::size_t n, unsigned m, std::uint64_t trials, std::uint64_t seed, std::size_t rank, double tol) {
  auto res = num::scan_coefficients(n, m, trials, seed, rank, tol);
  std::cout << res.serialize();
  return res.violations ? kFailed : kOk;
}

int run_minimize(const std::string& btext, unsigned m, unsigned k, unsigned starts, std::uint64_t seed) {
  PolyMatrix bm = parse_matrix(trim(read_arg(btext)));
  const std::size_t n = bm.size();
  Eigen::MatrixXd b(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (!bm(i, j).is_constant()) throw UsageError("B must be a constant matrix");
      b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = bm(i, j).constant_term().get_d();
    }
  auto res = num::minimize_box(b, m, k, starts, seed);
  std::cout << std::setprecision(17);
  std::cout << "seed: " << seed << "\nstarts: " << starts << "\npoint:";
  for (Eigen::Index i = 0; i < res.point.size(); ++i) std::cout << " " << res.point(i);
  std::cout << "\nvalue: " << res.value << "\niterations: " << res.iterations << "\n";
  std::cout << "theorem2_residual: " << num::theorem2_residual(res.point, b, m, k) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hurwitz products, trace coefficients and the m = 6, n = 3 certification"};
  app.require_subcommand(1);

  MatrixArgs mats;
  unsigned m = 0, k = 0, symbolic = 0, starts = 16;
  bool brute = false, stats = false, unit_only = false, assert_none = false, show_chain = false;
  bool timings = false, quiet = false;
  std::string ideal_src, vars, order = "grevlex", by, keep, poly, interval = "0,1", fixed, resume, output, bmat;
  std::vector<std::string> slices;
  unsigned jobs = 1;
  std::size_t n = 3, rank = 0;
  std::uint64_t trials = 10000, seed = 1;
  double tol = 1e-9;
  BudgetArgs budget;

  auto* hur = app.add_subcommand("hurwitz", "print S_{m,k}(A,B)");
  mats.add_to(hur);
  hur->add_option("--m", m)->required();
  hur->add_option("--k", k)->required();
  hur->add_flag("--bruteforce", brute, "sum all words instead of the recurrence");

  auto* tc = app.add_subcommand("trace-coeffs", "print Tr S_{m,k} and Tr S_{m-1,k} for all k");
  mats.add_to(tc);
  tc->add_option("--m", m)->required();

  auto* lem = app.add_subcommand("lemma1", "check (m-k) Tr S_{m,k} = m Tr[A S_{m-1,k}]");
  mats.add_to(lem);
  lem->add_option("--m", m)->required();
  lem->add_option("--k", k)->required();
  lem->add_option("--symbolic", symbolic, "use symbolic n x n matrices (A diagonal)");

  auto add_ideal = [&](CLI::App* sub) {
    sub->add_option("ideal", ideal_src, "ideal file ('-' for standard input)")->required();
    sub->add_option("--vars", vars, "ring variables, comma separated");
  };
  auto* gbc = app.add_subcommand("groebner", "reduced Gröbner basis of an ideal file");
  add_ideal(gbc);
  gbc->add_option("--order", order, "grevlex or lex")->capture_default_str();
  gbc->add_flag("--stats", stats, "engine counters on standard error");
  budget.add_to(gbc, 0, 0);

  auto* sat = app.add_subcommand("saturate", "saturation (I : g^inf)");
  add_ideal(sat);
  sat->add_option("--by", by, "the polynomial g")->required();
  sat->add_flag("--unit-only", unit_only, "only decide whether the saturation is <1>");
  budget.add_to(sat, 0, 0);

  auto* eli = app.add_subcommand("eliminate", "elimination ideal I ∩ Q[keep]");
  add_ideal(eli);
  eli->add_option("--keep", keep, "variables kept, comma separated")->required();
  budget.add_to(eli, 0, 0);

  auto* stu = app.add_subcommand("sturm", "count real roots in an open interval");
  stu->add_option("--poly", poly, "univariate polynomial")->required();
  stu->add_option("--interval", interval, "lo,hi")->capture_default_str();
  stu->add_flag("--assert-none", assert_none, "exit 1 when a root exists");
  stu->add_flag("--chain", show_chain, "print the full certificate on (0,1)");

  auto* bp = app.add_subcommand("build-p", "print p = b^3 u^2 Tr S_{6,3}(A,B)");

  auto* cer = app.add_subcommand("certify", "run the full certification and print the report");
  budget.add_to(cer, 1000000, 3600);
  cer->add_option("--slices", slices, "all, interior, slices, singles or slice names such as x or x,u; ';' separated");
  cer->add_option("--resume", resume, "prior report; verified steps are reused");
  cer->add_option("--jobs", jobs, "parallel Gröbner tasks")->capture_default_str();
  cer->add_flag("--timings", timings, "record wall time per step");
  cer->add_option("--output,-o", output, "report path (default standard output)");
  cer->add_flag("--quiet,-q", quiet, "no progress on standard error");

  auto* sl = app.add_subcommand("slice", "certify one boundary slice");
  sl->add_option("fixed", fixed, "variables set to 1, e.g. x or x,u")->required();
  budget.add_to(sl, 1000000, 3600);

  auto* sc = app.add_subcommand("scan", "random search for negative trace coefficients");
  sc->add_option("--n", n)->capture_default_str();
  sc->add_option("--m", m)->required();
  sc->add_option("--trials", trials)->capture_default_str();
  sc->add_option("--seed", seed)->capture_default_str();
  sc->add_option("--rank", rank, "rank of the samples (0 = full)")->capture_default_str();
  sc->add_option("--tolerance", tol)->capture_default_str();

  auto* mi = app.add_subcommand("minimize", "minimize Tr S_{m,k}(diag(1,x), B) over the box");
  mi->add_option("--b", bmat, "constant matrix B")->required();
  mi->add_option("--m", m)->required();
  mi->add_option("--k", k)->required();
  mi->add_option("--starts", starts)->capture_default_str();
  mi->add_option("--seed", seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*hur) return run_hurwitz(mats, m, k, brute);
    if (*tc) return run_trace_coeffs(mats, m);
    if (*lem) return run_lemma1(mats, m, k, symbolic);
    if (*gbc) return run_groebner(ideal_src, vars, order, budget, stats);
    if (*sat) return run_saturate(ideal_src, vars, by, unit_only, budget);
    if (*eli) return run_eliminate(ideal_src, vars, keep, budget);
    if (*stu) return run_sturm(poly, interval, assert_none, show_chain);
    if (*bp) return run_build_p();
    if (*cer) return run_certify(budget, slices, resume, jobs, timings, output, quiet);
    if (*sl) return run_slice(fixed, budget);
    if (*sc) return run_scan(n, m, trials, seed, rank, tol);
    if (*mi) return run_minimize(bmat, m, k, starts, seed);
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n" << e.stats().summary() << "\n";
    return kBudget;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kUsage;
}
