#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ulat/error.hpp"
#include "ulat/finring/local.hpp"
#include "ulat/finring/ring.hpp"

namespace ulat {

/// Steinberg symbol {a,b}^e with a, b units and e = +-1.
struct Symbol {
  RingElement a, b;
  int e = 1;

  friend bool operator==(const Symbol&, const Symbol&) = default;
};

using SymProduct = std::vector<Symbol>;

inline bool is_trivial_symbol(const FiniteRing& R, const Symbol& s) { return R.is_one(s.a) || R.is_one(s.b); }

/// l(a-1) + l(b-1), infinite when either argument is 1.
inline int symbol_level(const LocalStructure& L, const Symbol& s) {
  const FiniteRing& R = L.R();
  return level_add(level(L, R.sub(s.a, R.one())), level(L, R.sub(s.b, R.one())));
}

struct BaseSplit {
  std::int64_t l;
  RingElement a_prime;
};

/// a = theta^l * a' with a' in 1 + I and 0 <= l < q - 1.
inline BaseSplit base_split(const LocalStructure& L, const RingElement& a) {
  const FiniteRing& R = L.R();
  if (!R.inverse(a)) throw Error(Errc::NotUnit, "base_split needs a unit");
  const auto order = static_cast<std::int64_t>(L.residue_units());
  RingElement power = R.one();
  for (std::int64_t l = 0; l < order; ++l) {
    if (L.maximal_ideal.contains(R.sub(a, power)))
      return {l, R.mul(a, R.inverse_or_throw(power))};
    power = R.mul(power, L.theta);
  }
  throw Error(Errc::NotLocal, "residue of a is not a power of theta");
}

/// Residue characteristic p and degree f with q = p^f.
inline std::pair<std::int64_t, int> residue_char_degree(const LocalStructure& L) {
  std::uint64_t q = L.residue_size;
  std::int64_t p = 2;
  while (q % static_cast<std::uint64_t>(p) != 0) ++p;
  int f = 0;
  while (q > 1) {
    q /= static_cast<std::uint64_t>(p);
    ++f;
  }
  return {p, f};
}

struct MonomialTerm {
  RingElement v;         ///< unit coefficient
  std::vector<int> gens;  ///< indices into min_gens, non-decreasing, length t
};

struct MonomialDecomposition {
  int t = 0;
  std::vector<MonomialTerm> terms;
  RingElement product;  ///< prod (1 - v_i * monomial_i), congruent to 1 - r mod I^(t+1)
};

inline RingElement monomial_value(const LocalStructure& L, const std::vector<int>& gens) {
  RingElement m = L.R().one();
  for (int g : gens) m = L.R().mul(m, L.min_gens[static_cast<std::size_t>(g)]);
  return m;
}

namespace detail {

inline void multisets(int g, int t, int from, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == t) {
    out.push_back(cur);
    return;
  }
  for (int i = from; i < g; ++i) {
    cur.push_back(i);
    multisets(g, t, i, cur, out);
    cur.pop_back();
  }
}

}  // namespace detail

/// r = sum v_i * (a_{m_1,i} ... a_{m_t,i}) mod I^(t+1) with t = level(r) and
/// unit coefficients, solved exactly on the additive generators theta^e * mu.
inline MonomialDecomposition monomial_decompose(const LocalStructure& L, const RingElement& r) {
  const FiniteRing& R = L.R();
  if (R.is_zero(r)) throw Error(Errc::ZeroElement, "monomial_decompose needs r != 0");
  if (!L.maximal_ideal.contains(r)) throw Error(Errc::NotInIdeal, "r is not in the maximal ideal");
  MonomialDecomposition out;
  out.t = level(L, r);
  const int t = out.t;
  const int f = residue_char_degree(L).second;

  std::vector<std::vector<int>> monos;
  std::vector<int> cur;
  detail::multisets(static_cast<int>(L.min_gens.size()), t, 0, cur, monos);

  std::vector<RingElement> theta_pow{R.one()};
  for (int e = 1; e < f; ++e) theta_pow.push_back(R.mul(theta_pow.back(), L.theta));

  // Graph rows (g_k | e_k) over G + T, plus the generators of I^(t+1).
  std::vector<RingElement> gens;
  for (const auto& m : monos) {
    const RingElement mv = monomial_value(L, m);
    for (int e = 0; e < f; ++e) gens.push_back(R.mul(theta_pow[static_cast<std::size_t>(e)], mv));
  }
  const std::size_t b = R.dim(), k = gens.size();
  std::vector<std::int64_t> orders = R.orders();
  for (const auto& g : gens) orders.push_back(detail::additive_order(g.coeffs, R.orders()));
  AdditiveSubgroup graph(orders);
  for (std::size_t i = 0; i < k; ++i) {
    Coeffs row = gens[i].coeffs;
    row.resize(b + k, 0);
    row[b + i] = 1 % orders[b + i];
    graph.insert(row);
  }
  const Ideal& next = L.ideal_powers[std::min<std::size_t>(static_cast<std::size_t>(t) + 1, L.ideal_powers.size() - 1)];
  for (const auto& h : next.span.generators()) {
    Coeffs row = h;
    row.resize(b + k, 0);
    graph.insert(row);
  }
  Coeffs target = r.coeffs;
  target.resize(b + k, 0);
  const Coeffs rem = graph.remainder(target, b);
  for (std::size_t i = 0; i < b; ++i)
    if (rem[i] != 0) throw Error(Errc::NotInIdeal, "r is not spanned by degree-t monomials");

  out.product = R.one();
  for (std::size_t m = 0; m < monos.size(); ++m) {
    RingElement c = R.zero();
    for (int e = 0; e < f; ++e) {
      const std::size_t idx = m * static_cast<std::size_t>(f) + static_cast<std::size_t>(e);
      const std::int64_t n = detail::mod(-rem[b + idx], orders[b + idx]);
      c = R.add(c, R.scale(n, theta_pow[static_cast<std::size_t>(e)]));
    }
    if (L.maximal_ideal.contains(c)) continue;  // c * mu lies in I^(t+1)
    const RingElement term = R.mul(c, monomial_value(L, monos[m]));
    if (R.is_zero(term)) continue;
    out.terms.push_back({c, monos[m]});
    out.product = R.mul(out.product, R.one_minus(term));
  }
  return out;
}

}  // namespace ulat
