#pragma once

// Packed-monomial Gröbner engine. Internal to idealkit.

#include <array>
#include <chrono>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bmv/ideal.hpp"
#include "bmv/polynomial.hpp"

namespace bmv::gb {

inline constexpr std::size_t kMaxVars = 8;
inline constexpr unsigned kMaxDegree = 30000;

/// Exponents and order key packed as four 16-bit lanes per word. The key lanes
/// hold the order's weight-row dot products, so comparison is a two-word
/// lexicographic compare and multiplication is lane-wise addition.
struct Mon {
  std::array<std::uint64_t, 2> key{};
  std::array<std::uint64_t, 2> exp{};

  bool operator==(const Mon& o) const { return exp == o.exp; }
};

inline int cmp(const Mon& a, const Mon& b) {
  if (a.key[0] != b.key[0]) return a.key[0] < b.key[0] ? -1 : 1;
  if (a.key[1] != b.key[1]) return a.key[1] < b.key[1] ? -1 : 1;
  return 0;
}

struct ITerm {
  Mon m;
  mpz_class c;
};

struct IPoly {
  std::vector<ITerm> terms;  // strictly descending, nonzero coefficients
  unsigned sugar = 0;

  bool empty() const { return terms.empty(); }
  const Mon& lm() const { return terms.front().m; }
  const mpz_class& lc() const { return terms.front().c; }
};

class Context {
 public:
  Context(std::size_t nvars, const MonomialOrder& order);

  std::size_t nvars() const { return nvars_; }
  const MonomialOrder& order() const { return order_; }

  Mon pack(const Monomial& m) const;
  Monomial unpack(const Mon& m) const;
  unsigned exponent(const Mon& m, std::size_t var) const {
    return static_cast<unsigned>((m.exp[var / 4] >> (16 * (var % 4))) & 0xffff);
  }

  Mon mul(const Mon& a, const Mon& b) const;
  /// a / b; requires divides(b, a).
  static Mon quo(const Mon& a, const Mon& b) {
    return Mon{{a.key[0] - b.key[0], a.key[1] - b.key[1]}, {a.exp[0] - b.exp[0], a.exp[1] - b.exp[1]}};
  }
  static bool divides(const Mon& a, const Mon& b) {
    constexpr std::uint64_t high = 0x8000800080008000ULL;
    return (((b.exp[0] | high) - a.exp[0]) & high) == high && (((b.exp[1] | high) - a.exp[1]) & high) == high;
  }
  Mon lcm(const Mon& a, const Mon& b) const;
  bool coprime(const Mon& a, const Mon& b) const;
  static unsigned degree(const Mon& m) {
    constexpr std::uint64_t ones = 0x0001000100010001ULL;
    return static_cast<unsigned>(((m.exp[0] * ones) >> 48) + ((m.exp[1] * ones) >> 48));
  }
  /// Necessary-condition bitmask for divisibility tests.
  std::uint32_t divmask(const Mon& m) const;
  bool is_one(const Mon& m) const { return m.exp[0] == 0 && m.exp[1] == 0; }

  IPoly from_polynomial(const Polynomial& f) const;
  Polynomial to_polynomial(const IPoly& f, const RingPtr& ring, bool monic) const;

 private:
  void set_key(Mon& m) const;

  std::size_t nvars_;
  MonomialOrder order_;
  std::vector<std::vector<unsigned>> rows_;
};

struct Reducer {
  const IPoly* poly;
  std::uint32_t mask;
};

/// Internal budget signal; converted to BudgetExceeded at the API boundary.
struct Exhausted {
  std::string what;
  EngineStats stats;
  std::vector<IPoly> partial;
};

class Deadline {
 public:
  explicit Deadline(const Budget& budget);
  /// Throws Exhausted when any limit is hit. `terms` is the current working size.
  void check(const EngineStats& stats, std::size_t terms) const;
  double elapsed() const;

 private:
  Budget budget_;
  std::chrono::steady_clock::time_point start_;
};

enum class DivisorRule { first, shortest };

struct ReduceOptions {
  bool full = true;  // reduce every term, not only the leading one
  DivisorRule rule = DivisorRule::shortest;
  bool track_scale = false;
};

/// Fraction-free reduction. On return `f` is primitive with positive leading
/// coefficient. With track_scale, `scale` satisfies
///   result = scale * input  (mod the reducers).
void reduce(const Context& ctx, IPoly& f, std::span<const Reducer> reducers, const ReduceOptions& opts,
            EngineStats& stats, const Deadline* deadline, mpq_class* scale = nullptr);

IPoly s_poly(const Context& ctx, const IPoly& f, const IPoly& g);

void make_primitive(IPoly& f);

struct RunResult {
  std::vector<IPoly> basis;  // reduced, primitive, ascending leading monomials
  EngineStats stats;
  bool unit = false;
};

RunResult run_buchberger(const Context& ctx, std::vector<IPoly> inputs, const BuchbergerOptions& options);

}  // namespace bmv::gb
