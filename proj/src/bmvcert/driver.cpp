#include <algorithm>
#include <atomic>
#include <mutex>
#include <sstream>
#include <thread>

#include "bmv/cert.hpp"

namespace bmv {

namespace {

const std::vector<std::string> kBoundaryVars = {"x", "y", "z", "u", "b"};

}  // namespace

std::string SliceSpec::name() const {
  std::string s;
  for (const auto& v : fixed) s += (s.empty() ? "" : ",") + v;
  return s;
}

std::vector<SliceSpec> SliceSpec::all() {
  std::vector<SliceSpec> out;
  for (std::size_t size = 1; size <= kBoundaryVars.size(); ++size)
    for (unsigned mask = 1; mask < (1u << kBoundaryVars.size()); ++mask) {
      if (static_cast<std::size_t>(__builtin_popcount(mask)) != size) continue;
      SliceSpec s;
      for (std::size_t v = 0; v < kBoundaryVars.size(); ++v)
        if (mask & (1u << v)) s.fixed.push_back(kBoundaryVars[v]);
      out.push_back(std::move(s));
    }
  // Within a size, order by the position pattern (x before y, ...).
  std::stable_sort(out.begin(), out.end(), [](const SliceSpec& a, const SliceSpec& b) {
    if (a.fixed.size() != b.fixed.size()) return a.fixed.size() < b.fixed.size();
    auto pos = [](const SliceSpec& s) {
      std::vector<std::size_t> p;
      for (const auto& v : s.fixed) p.push_back(std::find(kBoundaryVars.begin(), kBoundaryVars.end(), v) - kBoundaryVars.begin());
      return p;
    };
    return pos(a) < pos(b);
  });
  return out;
}

SliceSpec SliceSpec::parse(std::string_view text) {
  SliceSpec s;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    std::string v(text.substr(start, end - start));
    if (std::find(kBoundaryVars.begin(), kBoundaryVars.end(), v) == kBoundaryVars.end())
      throw std::invalid_argument("slice variable must be one of x, y, z, u, b: '" + v + "'");
    if (std::find(s.fixed.begin(), s.fixed.end(), v) != s.fixed.end())
      throw std::invalid_argument("slice variable repeated: " + v);
    s.fixed.push_back(v);
    start = end + 1;
  }
  std::sort(s.fixed.begin(), s.fixed.end(), [](const std::string& a, const std::string& b) {
    return std::find(kBoundaryVars.begin(), kBoundaryVars.end(), a) < std::find(kBoundaryVars.begin(), kBoundaryVars.end(), b);
  });
  return s;
}

CertificationReport certify_m6n3(const CertifyOptions& options) {
  CertificationReport report;
  report.budget_pairs = options.budget_pairs;
  report.budget_seconds = options.budget_seconds;
  report.timings = options.timings;

  std::mutex mu;
  auto emit = [&](const ProofStep& s) {
    if (options.on_step) {
      std::lock_guard lock(mu);
      options.on_step(s);
    }
  };
  auto push = [&](ProofStep s) {
    emit(s);
    report.steps.push_back(std::move(s));
  };

  push(check_complex_reduction());
  push(check_b_zero_case());
  push(check_degenerate_cases());
  push(check_parameterization());
  Polynomial p = build_p();
  report.p_hash = sha256_hex(p.to_string());
  push(build_p_step(p));
  push(negative_terms(p));

  // Gröbner tasks: the interior and every slice.
  struct Task {
    std::string name;
    std::optional<SliceSpec> slice;
  };
  std::vector<Task> tasks{{"interior", std::nullopt}};
  for (auto& s : SliceSpec::all()) tasks.push_back({"slice " + s.name(), s});
  auto selected = [&](const Task& t) {
    if (options.only.empty()) return true;
    for (const auto& f : options.only) {
      if (f == "all") return true;
      if (f == "interior" && !t.slice) return true;
      if (f == "slices" && t.slice) return true;
      if (f == "singles" && t.slice && t.slice->fixed.size() == 1) return true;
      if (t.slice && f != "interior" && f != "slices" && f != "singles" && SliceSpec::parse(f).name() == t.slice->name()) return true;
    }
    return false;
  };
  const bool resumable = options.resume && options.resume->p_hash == report.p_hash;

  std::vector<ProofStep> results(tasks.size());
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    results[i].name = tasks[i].name;
    if (!selected(tasks[i])) {
      results[i].status = StepStatus::skipped;
      results[i].summary = "not selected";
      continue;
    }
    if (resumable) {
      const ProofStep* prior = options.resume->find(tasks[i].name);
      if (prior && prior->status == StepStatus::verified) {
        results[i] = *prior;
        continue;
      }
    }
    pending.push_back(i);
  }

  LadderOptions ladder;
  ladder.budget.max_pairs = options.budget_pairs;
  ladder.budget.max_seconds = options.budget_seconds;
  ladder.budget.cancel = options.cancel;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t k = next++;
      if (k >= pending.size()) return;
      const Task& t = tasks[pending[k]];
      ProofStep s = t.slice ? certify_slice(*t.slice, p, ladder) : certify_interior(p, ladder);
      emit(s);
      results[pending[k]] = std::move(s);
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(pending.size())));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& s : results) report.steps.push_back(std::move(s));

  push(check_r_endpoints(p));
  push(check_interior_samples(p));
  return report;
}

CertificationReport rehearse_example() {
  CertificationReport report;
  auto ring = make_ring({"x1", "x2"});
  PolyMatrix a = parse_matrix("1, 0, 0; 0, x1, 0; 0, 0, x2", ring);
  PolyMatrix b = parse_matrix("-2, 1, 0; -1, 2, 3; 1, -1, 3", ring);
  Polynomial q = trace_coefficients(a, b, 4)[2];
  report.p_hash = sha256_hex(q.to_string());

  ProofStep lemma;
  lemma.name = "example_lemma1";
  Polynomial diff = lemma1_difference(a, b, 4, 2);
  lemma.status = diff.is_zero() ? StepStatus::verified : StepStatus::failed;
  lemma.summary = "2*Tr S_{4,2} - 4*Tr[A S_{3,2}] = " + diff.to_string();
  lemma.certificate = "Tr S_{4,2}: " + q.to_string() + "\n";
  report.steps.push_back(lemma);

  LadderOptions opts;
  opts.budget.max_seconds = 60;
  report.steps.push_back(certify_critical_points("example_critical_points", q, {"x1", "x2"}, opts));
  return report;
}

}  // namespace bmv
