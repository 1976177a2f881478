#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ulat/error.hpp"
#include "ulat/finring/local.hpp"
#include "ulat/k2/symbol.hpp"

namespace ulat {

enum class Rule {
  BASE_SPLIT,
  BIMULT,
  SKEW,
  U_MINUS_U,
  U_ONE_MINUS_U,
  DS1,
  DS2,
  I1,
  I2,
  COR36,
  CONGRUENCE_ABSORB,
  THETA_POWER,
  DEFER_HIGH_LEVEL,
};

inline constexpr std::string_view kRuleNames[] = {
    "BASE_SPLIT", "BIMULT", "SKEW", "U_MINUS_U", "U_ONE_MINUS_U", "DS1", "DS2",
    "I1", "I2", "COR36", "CONGRUENCE_ABSORB", "THETA_POWER", "DEFER_HIGH_LEVEL"};

inline std::string_view rule_name(Rule r) { return kRuleNames[static_cast<int>(r)]; }

inline std::optional<Rule> rule_from_name(std::string_view s) {
  for (int i = 0; i < static_cast<int>(std::size(kRuleNames)); ++i)
    if (kRuleNames[i] == s) return static_cast<Rule>(i);
  return std::nullopt;
}

using ParamValue = std::variant<std::int64_t, RingElement, std::vector<RingElement>>;

/// One rewriting step: consumed = produced * deferred holds exactly in K2,
/// and every deferred symbol has level >= n + 1.
struct CertStep {
  Rule rule;
  std::map<std::string, ParamValue> params;
  SymProduct consumed, produced, deferred;
  int n = 0;
};

/// {theta, s0} * prod_j {1 - a_j, s_j}; entries equal to 1 are suppressed.
struct TForm {
  RingElement theta;
  std::vector<RingElement> gens;
  RingElement s0;
  std::vector<RingElement> s;

  SymProduct symbols(const FiniteRing& R) const {
    SymProduct out;
    if (!is_trivial_symbol(R, {theta, s0, 1})) out.push_back({theta, s0, 1});
    for (std::size_t j = 0; j < gens.size(); ++j) {
      const Symbol sym{R.one_minus(gens[j]), s[j], 1};
      if (!is_trivial_symbol(R, sym)) out.push_back(sym);
    }
    return out;
  }
};

struct Certificate {
  Symbol input;
  std::vector<CertStep> steps;
  TForm tform;
  int rounds = 0;
};

struct CheckResult {
  bool ok = true;
  std::size_t step = 0;
  std::string reason;

  explicit operator bool() const { return ok; }
};

// ---------------------------------------------------------------------------
// Rule templates. The rewriter and the checker instantiate the same schema
// from the recorded parameters; the checker also validates preconditions.

namespace detail {

inline const RingElement& elem(const CertStep& s, const std::string& k) {
  auto it = s.params.find(k);
  if (it == s.params.end() || !std::holds_alternative<RingElement>(it->second))
    throw Error(Errc::PreconditionFailed, "missing element parameter " + k);
  return std::get<RingElement>(it->second);
}

inline std::int64_t integer(const CertStep& s, const std::string& k) {
  auto it = s.params.find(k);
  if (it == s.params.end() || !std::holds_alternative<std::int64_t>(it->second))
    throw Error(Errc::PreconditionFailed, "missing integer parameter " + k);
  return std::get<std::int64_t>(it->second);
}

inline const std::vector<RingElement>& elems(const CertStep& s, const std::string& k) {
  auto it = s.params.find(k);
  if (it == s.params.end() || !std::holds_alternative<std::vector<RingElement>>(it->second))
    throw Error(Errc::PreconditionFailed, "missing list parameter " + k);
  return std::get<std::vector<RingElement>>(it->second);
}

inline void require(bool cond, const std::string& what) {
  if (!cond) throw Error(Errc::PreconditionFailed, what);
}

inline void require_unit(const FiniteRing& R, const RingElement& x, const std::string& name) {
  require(R.inverse(x).has_value(), name + " is not a unit");
}

inline void require_in_ideal(const LocalStructure& L, const RingElement& x, const std::string& name) {
  require(L.maximal_ideal.contains(x), name + " is not in the maximal ideal");
}

inline RingElement upow(const FiniteRing& R, const RingElement& x, std::int64_t e) {
  if (e >= 0) return R.pow(x, static_cast<std::uint64_t>(e));
  return R.pow(R.inverse_or_throw(x), static_cast<std::uint64_t>(-e));
}

}  // namespace detail

inline CertStep base_split_step(const LocalStructure& L, std::int64_t side, const RingElement& a,
                                const RingElement& b, std::int64_t l, const RingElement& split) {
  using namespace detail;
  const FiniteRing& R = L.R();
  require(side == 0 || side == 1, "side must be 0 or 1");
  require(0 <= l && l < static_cast<std::int64_t>(L.residue_units()), "exponent l out of range");
  require_in_ideal(L, R.sub(split, R.one()), "split factor - 1");
  require(R.mul(upow(R, L.theta, l), split) == (side == 0 ? a : b), "argument != theta^l * split factor");
  CertStep s{Rule::BASE_SPLIT, {{"side", side}, {"a", a}, {"b", b}, {"l", l}, {"split", split}}, {}, {}, {}, 0};
  s.consumed = {{a, b, 1}};
  if (side == 0) {
    s.produced = {{L.theta, upow(R, b, l), 1}};
    s.deferred = {{split, b, 1}};
  } else {
    s.produced = {{L.theta, upow(R, a, -l), 1}};
    s.deferred = {{a, split, 1}};
  }
  return s;
}

inline CertStep theta_power_step(const LocalStructure& L, const RingElement& v, const RingElement& z,
                                 std::int64_t l, const RingElement& v_prime, int n) {
  using namespace detail;
  const FiniteRing& R = L.R();
  require(0 <= l && l < static_cast<std::int64_t>(L.residue_units()), "exponent l out of range");
  require_in_ideal(L, R.sub(v_prime, R.one()), "v' - 1");
  require(R.mul(upow(R, L.theta, l), v_prime) == v, "v != theta^l * v'");
  CertStep s{Rule::THETA_POWER, {{"v", v}, {"Z", z}, {"l", l}, {"v_prime", v_prime}}, {}, {}, {}, n};
  s.consumed = {{v, z, -1}};
  s.produced = {{L.theta, upow(R, z, -l), 1}};
  s.deferred = {{v_prime, z, -1}};
  return s;
}

inline CertStep congruence_step(const LocalStructure& L, const RingElement& x, const RingElement& y,
                                const RingElement& b, std::int64_t t, int n) {
  using namespace detail;
  const FiniteRing& R = L.R();
  require_in_ideal(L, R.sub(x, R.one()), "x - 1");
  require_in_ideal(L, R.sub(y, R.one()), "y - 1");
  require(t == level(L, R.one_minus(x)), "t is not the level of 1 - x");
  const std::size_t next = std::min<std::size_t>(static_cast<std::size_t>(t) + 1, L.ideal_powers.size() - 1);
  require(L.ideal_powers[next].contains(R.sub(x, y)), "x and y differ outside I^(t+1)");
  CertStep s{Rule::CONGRUENCE_ABSORB, {{"x", x}, {"y", y}, {"b", b}, {"t", t}}, {}, {}, {}, n};
  s.consumed = {{x, b, 1}};
  s.produced = {{y, b, 1}};
  s.deferred = {{R.mul(x, R.inverse_or_throw(y)), b, 1}};
  return s;
}

/// Identity (1) solved for {1-qv, 1-p}: with Z = 1 - pqv,
/// {1-qv,1-p} = {v,Z}^-1 {1-q,1-pv} * {1-qv,Z}{1-p,Z}^-1{1-pv,Z}{1-q,Z}^-1.
inline CertStep i1_step(const LocalStructure& L, const RingElement& v, const RingElement& p,
                        const RingElement& q, int n) {
  using namespace detail;
  const FiniteRing& R = L.R();
  require_unit(R, v, "v");
  require_in_ideal(L, p, "p");
  require_in_ideal(L, q, "q");
  const RingElement qv = R.mul(q, v), pv = R.mul(p, v), z = R.one_minus(R.mul(p, qv));
  for (const auto& [x, name] : {std::pair{R.one_minus(p), "1-p"}, {R.one_minus(q), "1-q"},
                                {R.one_minus(qv), "1-qv"}, {R.one_minus(pv), "1-pv"}, {z, "1-pqv"}})
    require_unit(R, x, name);
  if (level_add(level(L, p), level(L, q)) < n)
    throw Error(Errc::LevelTooLow, "l(p) + l(q) < n in (i1)");
  CertStep s{Rule::I1, {{"v", v}, {"p", p}, {"q", q}}, {}, {}, {}, n};
  s.consumed = {{R.one_minus(qv), R.one_minus(p), 1}};
  s.produced = {{v, z, -1}, {R.one_minus(q), R.one_minus(pv), 1}};
  s.deferred = {{R.one_minus(qv), z, 1}, {R.one_minus(p), z, -1}, {R.one_minus(pv), z, 1},
                {R.one_minus(q), z, -1}};
  return s;
}

/// Identity (2) solved for {1-pq, 1-r}: with W = 1 - pqr,
/// {1-pq,1-r} = {1-p,1-qr}{1-q,1-pr}{-1,W} * {1-qr,W}{1-p,W}^-1{1-pr,W}{1-q,W}^-1{1-pq,W}{1-r,W}^-1.
inline CertStep i2_step(const LocalStructure& L, const RingElement& p, const RingElement& q,
                        const RingElement& r, int n) {
  using namespace detail;
  const FiniteRing& R = L.R();
  require_in_ideal(L, p, "p");
  require_in_ideal(L, q, "q");
  require_in_ideal(L, r, "r");
  const RingElement pq = R.mul(p, q), pr = R.mul(p, r), qr = R.mul(q, r);
  const RingElement w = R.one_minus(R.mul(pq, r));
  if (level_add(level_add(level(L, p), level(L, q)), level(L, r)) < n)
    throw Error(Errc::LevelTooLow, "l(p) + l(q) + l(r) < n in (i2)");
  CertStep s{Rule::I2, {{"p", p}, {"q", q}, {"r", r}}, {}, {}, {}, n};
  s.consumed = {{R.one_minus(pq), R.one_minus(r), 1}};
  s.produced = {{R.one_minus(p), R.one_minus(qr), 1}, {R.one_minus(q), R.one_minus(pr), 1},
                {R.neg(R.one()), w, 1}};
  s.deferred = {{R.one_minus(qr), w, 1}, {R.one_minus(p), w, -1}, {R.one_minus(pr), w, 1},
                {R.one_minus(q), w, -1}, {R.one_minus(pq), w, 1},  {R.one_minus(r), w, -1}};
  return s;
}

/// Repeated (i2): {1 - q_1...q_t, 1 - r} = prod_i {1 - q_i, 1 - u_i} times the
/// residual symbols {-1, W_k}, with u_i = r * prod_{j != i} q_j.
inline CertStep cor36_step(const LocalStructure& L, const std::vector<RingElement>& qs,
                           const RingElement& r, int n) {
  using namespace detail;
  const FiniteRing& R = L.R();
  require(qs.size() >= 2, "COR36 needs at least two factors");
  for (const auto& x : qs) require_in_ideal(L, x, "q_i");
  require_in_ideal(L, r, "r");
  int total = level(L, r);
  for (const auto& x : qs) total = level_add(total, level(L, x));
  if (total < n) throw Error(Errc::LevelTooLow, "l(r) + sum l(q_i) < n in Corollary-style expansion");

  CertStep s{Rule::COR36, {{"q", qs}, {"r", r}}, {}, {}, {}, n};
  RingElement all = R.one();
  for (const auto& x : qs) all = R.mul(all, x);
  s.consumed = {{R.one_minus(all), R.one_minus(r), 1}};
  SymProduct residual;
  RingElement rr = r;
  for (std::size_t k = 0; k + 1 < qs.size(); ++k) {
    RingElement rest = R.one();
    for (std::size_t j = k + 1; j < qs.size(); ++j) rest = R.mul(rest, qs[j]);
    const CertStep sub = i2_step(L, qs[k], rest, rr, n);
    s.produced.push_back(sub.produced[0]);
    residual.push_back(sub.produced[2]);
    s.deferred.insert(s.deferred.end(), sub.deferred.begin(), sub.deferred.end());
    rr = R.mul(qs[k], rr);
    if (k + 2 == qs.size()) s.produced.push_back(sub.produced[1]);
  }
  s.produced.insert(s.produced.end(), residual.begin(), residual.end());
  return s;
}

inline CertStep defer_step(const LocalStructure& L, const RingElement& x, const RingElement& y,
                           std::int64_t e, int n) {
  detail::require(e == 1 || e == -1, "exponent must be +-1");
  CertStep s{Rule::DEFER_HIGH_LEVEL, {{"x", x}, {"y", y}, {"e", e}}, {}, {}, {}, n};
  s.consumed = {{x, y, static_cast<int>(e)}};
  s.deferred = {{x, y, static_cast<int>(e)}};
  (void)L;
  return s;
}

/// Left and right symbol lists of a Dennis-Stein identity instance.
struct DsInstance {
  SymProduct left, right;
};

/// Checks the unit hypotheses and instantiates identity (1) (DS1, uses v,p,q)
/// or identity (2) (DS2, uses p,q,r).
inline DsInstance ds_check(const FiniteRing& R, Rule rule, const RingElement& v, const RingElement& p,
                           const RingElement& q, const RingElement& r) {
  using namespace detail;
  auto inv = [&](const RingElement& x) { return R.inverse_or_throw(x); };
  auto pair_term = [&](const RingElement& num, const RingElement& den, const RingElement& top) {
    // { -num/den, top/den }
    return Symbol{R.neg(R.mul(num, inv(den))), R.mul(top, inv(den)), 1};
  };
  if (rule == Rule::DS1) {
    const RingElement qv = R.mul(q, v), pv = R.mul(p, v), z = R.one_minus(R.mul(p, qv));
    for (const auto& [x, name] :
         {std::pair{v, "v"}, {R.one_minus(p), "1-p"}, {R.one_minus(q), "1-q"}, {R.one_minus(qv), "1-qv"},
          {R.one_minus(pv), "1-pv"}, {z, "1-pqv"}})
      require_unit(R, x, name);
    return {{{v, z, 1}},
            {pair_term(R.one_minus(qv), R.one_minus(p), z), pair_term(R.one_minus(pv), R.one_minus(q), z)}};
  }
  require(rule == Rule::DS2, "ds_check takes DS1 or DS2");
  const RingElement pq = R.mul(p, q), pr = R.mul(p, r), qr = R.mul(q, r);
  const RingElement w = R.one_minus(R.mul(pq, r));
  for (const auto& [x, name] :
       {std::pair{R.one_minus(p), "1-p"}, {R.one_minus(q), "1-q"}, {R.one_minus(r), "1-r"},
        {R.one_minus(pq), "1-pq"}, {R.one_minus(pr), "1-pr"}, {R.one_minus(qr), "1-qr"}, {w, "1-pqr"}})
    require_unit(R, x, name);
  return {{pair_term(R.one_minus(qr), R.one_minus(p), w), pair_term(R.one_minus(pr), R.one_minus(q), w),
           pair_term(R.one_minus(pq), R.one_minus(r), w)},
          {}};
}

inline CertStep ds_step(const LocalStructure& L, Rule rule, const RingElement& v, const RingElement& p,
                        const RingElement& q, const RingElement& r, int n) {
  const DsInstance d = ds_check(L.R(), rule, v, p, q, r);
  CertStep s{rule, {{"v", v}, {"p", p}, {"q", q}, {"r", r}}, d.left, d.right, {}, n};
  return s;
}

// ---------------------------------------------------------------------------
// Replay

namespace detail {

using SymKey = std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>>;

inline SymKey sym_key(const Symbol& s) {
  return {{s.a.coeffs.begin(), s.a.coeffs.end()}, {s.b.coeffs.begin(), s.b.coeffs.end()}};
}

inline std::string sym_string(const Symbol& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.a.coeffs.size(); ++i) out += (i ? "," : "") + std::to_string(s.a.coeffs[i]);
  out += " | ";
  for (std::size_t i = 0; i < s.b.coeffs.size(); ++i) out += (i ? "," : "") + std::to_string(s.b.coeffs[i]);
  return out + "}^" + std::to_string(s.e);
}

// consumed and produced all share one argument and the other arguments agree
// as products.
inline bool bimult_ok(const FiniteRing& R, const CertStep& s) {
  std::vector<Symbol> all(s.consumed);
  all.insert(all.end(), s.produced.begin(), s.produced.end());
  if (all.empty() || !s.deferred.empty()) return false;
  for (int shared = 0; shared < 2; ++shared) {
    const RingElement& key = shared == 0 ? all[0].a : all[0].b;
    bool same = true;
    for (const auto& x : all) same = same && (shared == 0 ? x.a : x.b) == key;
    if (!same) continue;
    auto product = [&](const SymProduct& list) {
      RingElement acc = R.one();
      for (const auto& x : list) acc = R.mul(acc, upow(R, shared == 0 ? x.b : x.a, x.e));
      return acc;
    };
    if (product(s.consumed) == product(s.produced)) return true;
  }
  return false;
}

inline void validate_step(const LocalStructure& L, const CertStep& s) {
  const FiniteRing& R = L.R();
  for (const SymProduct* list : {&s.consumed, &s.produced, &s.deferred})
    for (const auto& x : *list) {
      require(x.e == 1 || x.e == -1, "symbol exponent must be +-1");
      require(x.a.coeffs.size() == R.dim() && x.b.coeffs.size() == R.dim(), "symbol argument has wrong length");
      require(R.reduce(x.a.coeffs) == x.a && R.reduce(x.b.coeffs) == x.b, "symbol argument not reduced");
      require_unit(R, x.a, "symbol argument");
      require_unit(R, x.b, "symbol argument");
    }
  auto same_lists = [&](const CertStep& t) {
    require(t.consumed == s.consumed, "consumed symbols do not match the rule instance");
    require(t.produced == s.produced, "produced symbols do not match the rule instance");
    require(t.deferred == s.deferred, "deferred symbols do not match the rule instance");
  };
  switch (s.rule) {
    case Rule::BASE_SPLIT:
      require(s.params.size() == 5, "unexpected parameters");
      same_lists(base_split_step(L, integer(s, "side"), elem(s, "a"), elem(s, "b"), integer(s, "l"),
                                 elem(s, "split")));
      break;
    case Rule::THETA_POWER:
      require(s.params.size() == 4, "unexpected parameters");
      same_lists(theta_power_step(L, elem(s, "v"), elem(s, "Z"), integer(s, "l"), elem(s, "v_prime"), s.n));
      break;
    case Rule::CONGRUENCE_ABSORB:
      require(s.params.size() == 4, "unexpected parameters");
      same_lists(congruence_step(L, elem(s, "x"), elem(s, "y"), elem(s, "b"), integer(s, "t"), s.n));
      break;
    case Rule::I1:
      require(s.params.size() == 3, "unexpected parameters");
      same_lists(i1_step(L, elem(s, "v"), elem(s, "p"), elem(s, "q"), s.n));
      break;
    case Rule::I2:
      require(s.params.size() == 3, "unexpected parameters");
      same_lists(i2_step(L, elem(s, "p"), elem(s, "q"), elem(s, "r"), s.n));
      break;
    case Rule::COR36:
      require(s.params.size() == 2, "unexpected parameters");
      same_lists(cor36_step(L, elems(s, "q"), elem(s, "r"), s.n));
      break;
    case Rule::DEFER_HIGH_LEVEL:
      require(s.params.size() == 3, "unexpected parameters");
      same_lists(defer_step(L, elem(s, "x"), elem(s, "y"), integer(s, "e"), s.n));
      break;
    case Rule::DS1:
    case Rule::DS2:
      require(s.params.size() == 4, "unexpected parameters");
      same_lists(ds_step(L, s.rule, elem(s, "v"), elem(s, "p"), elem(s, "q"), elem(s, "r"), s.n));
      break;
    case Rule::BIMULT:
      require(s.params.empty(), "unexpected parameters");
      require(bimult_ok(R, s), "not an instance of bimultiplicativity");
      break;
    case Rule::SKEW:
      require(s.params.empty() && s.deferred.empty(), "unexpected parameters");
      require(s.consumed.size() == 1 && s.produced.size() == 1, "SKEW rewrites one symbol");
      require(s.produced[0] == Symbol{s.consumed[0].b, s.consumed[0].a, -s.consumed[0].e},
              "not an instance of skew-symmetry");
      break;
    case Rule::U_MINUS_U:
    case Rule::U_ONE_MINUS_U: {
      require(s.params.empty() && s.deferred.empty() && s.produced.empty(), "unexpected parameters");
      require(s.consumed.size() == 1, "rule removes one symbol");
      const Symbol& x = s.consumed[0];
      const RingElement expect = s.rule == Rule::U_MINUS_U ? R.neg(x.a) : R.one_minus(x.a);
      require(x.b == expect, "second argument does not match the rule");
      break;
    }
  }
  for (const auto& x : s.deferred)
    require(symbol_level(L, x) >= s.n + 1, "deferred symbol below level n+1: " + sym_string(x));
}

}  // namespace detail

/// Replays the certificate: every step is a valid rule instance and the symbol
/// state, an element of the free abelian group on nontrivial symbols, evolves
/// from the input to exactly the T-form symbols. Counts may go negative
/// mid-way; each step multiplies by produced * deferred / consumed, which is 1
/// in K2, so only the endpoints matter.
inline CheckResult check_certificate(const LocalStructure& L, const Certificate& c) {
  const FiniteRing& R = L.R();
  using detail::SymKey;
  std::map<SymKey, std::int64_t> state;
  auto add = [&](const Symbol& s, int sign) {
    if (is_trivial_symbol(R, s)) return;
    auto& v = state[detail::sym_key(s)];
    v += sign * s.e;
    if (v == 0) state.erase(detail::sym_key(s));
  };
  auto fail = [](std::size_t i, const std::string& why) { return CheckResult{false, i, why}; };

  try {
    detail::require_unit(R, c.input.a, "input a");
    detail::require_unit(R, c.input.b, "input b");
  } catch (const Error& e) {
    return fail(0, e.what());
  }
  add(c.input, 1);
  int last_n = 0;
  for (std::size_t i = 0; i < c.steps.size(); ++i) {
    const CertStep& s = c.steps[i];
    if (s.n < last_n) return fail(i, "stage level decreased");
    last_n = s.n;
    try {
      detail::validate_step(L, s);
    } catch (const Error& e) {
      return fail(i, std::string(rule_name(s.rule)) + ": " + e.what());
    }
    for (const auto& x : s.consumed) add(x, -1);
    for (const auto& x : s.produced) add(x, 1);
    for (const auto& x : s.deferred) add(x, 1);
  }

  if (c.tform.theta != L.theta) return fail(c.steps.size(), "T-form theta differs from the local structure");
  if (c.tform.gens != L.min_gens) return fail(c.steps.size(), "T-form generators differ from min_generators");
  if (c.tform.s.size() != c.tform.gens.size()) return fail(c.steps.size(), "T-form has wrong arity");
  std::map<SymKey, std::int64_t> expect;
  for (const auto& x : c.tform.symbols(R)) {
    if (!R.inverse(x.b)) return fail(c.steps.size(), "T-form entry is not a unit");
    expect[detail::sym_key(x)] += 1;
  }
  if (expect != state) return fail(c.steps.size(), "final symbols differ from the T-form");
  return {};
}

}  // namespace ulat
