#include <openssl/evp.h>

#include <iomanip>
#include <sstream>

#include "bmv/cert.hpp"

namespace bmv {

std::string to_string(StepStatus s) {
  switch (s) {
    case StepStatus::verified: return "verified";
    case StepStatus::failed: return "failed";
    case StepStatus::budget_exceeded: return "budget-exceeded";
    case StepStatus::skipped: return "skipped";
  }
  return "skipped";
}

StepStatus parse_status(std::string_view s) {
  if (s == "verified") return StepStatus::verified;
  if (s == "failed") return StepStatus::failed;
  if (s == "budget-exceeded") return StepStatus::budget_exceeded;
  if (s == "skipped") return StepStatus::skipped;
  throw std::invalid_argument("unknown step status: " + std::string(s));
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream os;
  for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return os.str();
}

std::string ProofStep::content_hash() const {
  std::string cert = certificate;
  if (!cert.empty() && cert.back() != '\n') cert += '\n';
  return sha256_hex(name + "\n" + to_string(status) + "\n" + summary + "\n" + cert);
}

bool CertificationReport::certified() const {
  bool any = false;
  for (const auto& s : steps) {
    if (s.status == StepStatus::failed || s.status == StepStatus::budget_exceeded) return false;
    if (s.status == StepStatus::verified) any = true;
  }
  return any;
}

const ProofStep* CertificationReport::find(std::string_view name) const {
  for (const auto& s : steps)
    if (s.name == name) return &s;
  return nullptr;
}

namespace {

constexpr std::string_view kMagic = "bmv-certification-report 1";

std::vector<std::string> lines_of(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    out.emplace_back(text.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

std::string value_after(const std::string& line, std::string_view key) {
  if (line.rfind(key, 0) != 0 || line.size() < key.size() + 1 || line[key.size()] != ':')
    throw std::invalid_argument("report: expected '" + std::string(key) + ":' but found '" + line + "'");
  std::string v = line.substr(key.size() + 1);
  if (!v.empty() && v[0] == ' ') v.erase(0, 1);
  return v;
}

}  // namespace

std::string CertificationReport::serialize() const {
  std::ostringstream os;
  os << kMagic << "\n";
  os << "overall: " << (certified() ? "certified" : "incomplete") << "\n";
  os << "p_sha256: " << p_hash << "\n";
  os << "budget_pairs: " << budget_pairs << "\n";
  os << "budget_seconds: " << budget_seconds << "\n";
  os << "note: minimizer existence on the compact box is argued in prose and not computed; "
        "the r in {0,1} faces rely on an external theorem and are only sampled here\n";
  os << "steps: " << steps.size() << "\n";
  for (const auto& s : steps) {
    os << "\n[step]\n";
    os << "name: " << s.name << "\n";
    os << "status: " << to_string(s.status) << "\n";
    if (timings) os << "seconds: " << std::fixed << std::setprecision(3) << s.seconds << std::defaultfloat << "\n";
    os << "counters: " << s.counters << "\n";
    os << "summary: " << s.summary << "\n";
    os << "hash: " << s.content_hash() << "\n";
    auto cert_lines = lines_of(s.certificate);
    os << "certificate_lines: " << cert_lines.size() << "\n";
    for (const auto& l : cert_lines) os << "| " << l << "\n";
    os << "[end]\n";
  }
  return os.str();
}

CertificationReport CertificationReport::parse(std::string_view text) {
  auto lines = lines_of(text);
  std::size_t i = 0;
  auto next = [&]() -> const std::string& {
    while (i < lines.size() && lines[i].empty()) ++i;
    if (i >= lines.size()) throw std::invalid_argument("report: unexpected end of input");
    return lines[i++];
  };
  if (next() != kMagic) throw std::invalid_argument("report: bad header");
  CertificationReport rep;
  value_after(next(), "overall");
  rep.p_hash = value_after(next(), "p_sha256");
  rep.budget_pairs = std::stoull(value_after(next(), "budget_pairs"));
  rep.budget_seconds = std::stod(value_after(next(), "budget_seconds"));
  value_after(next(), "note");
  const std::size_t count = std::stoull(value_after(next(), "steps"));
  for (std::size_t k = 0; k < count; ++k) {
    if (next() != "[step]") throw std::invalid_argument("report: expected [step]");
    ProofStep s;
    s.name = value_after(next(), "name");
    s.status = parse_status(value_after(next(), "status"));
    std::string line = next();
    if (line.rfind("seconds:", 0) == 0) {
      s.seconds = std::stod(value_after(line, "seconds"));
      rep.timings = true;
      line = next();
    }
    s.counters = value_after(line, "counters");
    s.summary = value_after(next(), "summary");
    std::string hash = value_after(next(), "hash");
    const std::size_t n = std::stoull(value_after(next(), "certificate_lines"));
    std::string cert;
    for (std::size_t c = 0; c < n; ++c) {
      if (i >= lines.size() || lines[i].rfind("| ", 0) != 0) throw std::invalid_argument("report: bad certificate line");
      cert += lines[i++].substr(2) + "\n";
    }
    s.certificate = cert;
    if (s.content_hash() != hash) throw std::invalid_argument("report: hash mismatch in step " + s.name);
    if (next() != "[end]") throw std::invalid_argument("report: expected [end]");
    rep.steps.push_back(std::move(s));
  }
  return rep;
}

}  // namespace bmv
