#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "ulat/error.hpp"
#include "ulat/finring/radical.hpp"
#include "ulat/finring/ring.hpp"

namespace ulat {

/// Levels are naturals; the zero element has infinite level.
inline constexpr int kInfiniteLevel = std::numeric_limits<int>::max();

inline int level_add(int a, int b) {
  if (a == kInfiniteLevel || b == kInfiniteLevel) return kInfiniteLevel;
  return a + b;
}

struct LocalStructure {
  const FiniteRing* ring = nullptr;
  Ideal maximal_ideal;
  int nilpotency_index = 0;          ///< nu with I^nu = 0 and I^(nu-1) != 0
  RingElement theta;                 ///< residue generates the residue field's unit group
  std::uint64_t residue_size = 0;    ///< q = |R / I|
  std::vector<Ideal> ideal_powers;   ///< I^0 = R, I^1, ..., I^nu = 0
  std::vector<RingElement> min_gens;

  const FiniteRing& R() const { return *ring; }
  std::uint64_t residue_units() const { return residue_size - 1; }
};

namespace detail {

inline std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
  std::vector<std::uint64_t> ps;
  for (std::uint64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      ps.push_back(p);
      while (n % p == 0) n /= p;
    }
  if (n > 1) ps.push_back(n);
  return ps;
}

}  // namespace detail

/// Local data of R. The ring must outlive the result.
inline LocalStructure local_structure(const FiniteRing& R) {
  LocalStructure L;
  L.ring = &R;
  L.maximal_ideal = nilradical(R);
  const Ideal& I = L.maximal_ideal;

  R.for_each_element([&](const RingElement& a) {
    if (!I.contains(a) && !R.is_unit(a))
      throw Error(Errc::NotLocal, R.label() + " has an element that is neither a unit nor nilpotent");
  });
  L.residue_size = R.size() / I.size();

  // Generator of the residue unit group: order q-1 modulo I.
  const std::uint64_t q1 = L.residue_units();
  const auto primes = detail::prime_divisors(q1);
  R.for_each_element([&](const RingElement& a) {
    if (!L.theta.coeffs.empty() || I.contains(a)) return;
    for (auto p : primes)
      if (I.contains(R.sub(R.pow(a, q1 / p), R.one()))) return;
    L.theta = a;
  });

  std::vector<RingElement> all;
  for (std::size_t j = 0; j < R.dim(); ++j) all.push_back(R.basis(j));
  L.ideal_powers.push_back(make_ideal(R, {R.one()}));
  L.ideal_powers.push_back(I);
  while (!L.ideal_powers.back().is_zero()) {
    std::vector<RingElement> prods;
    for (const auto& x : L.ideal_powers.back().span.generators())
      for (const auto& g : I.span.generators()) prods.push_back(R.mul(RingElement(x), RingElement(g)));
    L.ideal_powers.push_back(make_ideal(R, std::move(prods)));
  }
  L.nilpotency_index = static_cast<int>(L.ideal_powers.size()) - 1;

  // Lifts of a residue-field basis of I / I^2, chosen greedily.
  const auto& sq = L.ideal_powers[std::min<std::size_t>(2, L.ideal_powers.size() - 1)];
  for (const auto& x : I.span.generators()) {
    AdditiveSubgroup cur = R.ideal(L.min_gens);
    for (const auto& y : sq.span.generators()) cur.insert(y);
    if (!cur.contains(x)) L.min_gens.emplace_back(x);
  }
  return L;
}

/// Largest n with a in I^n; infinite for zero.
inline int level(const LocalStructure& L, const RingElement& a) {
  if (L.R().is_zero(a)) return kInfiniteLevel;
  int n = 0;
  while (n + 1 < static_cast<int>(L.ideal_powers.size()) && L.ideal_powers[n + 1].contains(a)) ++n;
  return n;
}

inline const std::vector<RingElement>& min_generators(const LocalStructure& L) { return L.min_gens; }

}  // namespace ulat
