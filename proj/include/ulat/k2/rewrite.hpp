#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "ulat/error.hpp"
#include "ulat/finring/local.hpp"
#include "ulat/k2/certificate.hpp"
#include "ulat/k2/symbol.hpp"

namespace ulat {

inline CertStep apply_i1(const LocalStructure& L, const RingElement& v, const RingElement& p,
                         const RingElement& q, int n) {
  return i1_step(L, v, p, q, n);
}

/// Factors {1 - q_i, 1 - u_i} with the step trail (empty for a single factor).
inline std::pair<SymProduct, std::vector<CertStep>> cor36_expand(const LocalStructure& L,
                                                                 const std::vector<RingElement>& qs,
                                                                 const RingElement& r, int n) {
  const FiniteRing& R = L.R();
  if (qs.empty()) throw Error(Errc::PreconditionFailed, "empty factor list");
  if (qs.size() == 1) {
    int lv = level_add(level(L, qs[0]), level(L, r));
    if (lv < n) throw Error(Errc::LevelTooLow, "l(r) + l(q) < n");
    return {{{R.one_minus(qs[0]), R.one_minus(r), 1}}, {}};
  }
  CertStep s = cor36_step(L, qs, r, n);
  SymProduct factors(s.produced.begin(), s.produced.begin() + static_cast<std::ptrdiff_t>(qs.size()));
  return {std::move(factors), {std::move(s)}};
}

namespace detail {

class Rewriter {
 public:
  explicit Rewriter(const LocalStructure& L) : L_(L), R_(L.R()) {
    const auto [p, f] = residue_char_degree(L);
    odd_char_ = p != 2;
    acc_.theta = L.theta;
    acc_.gens = L.min_gens;
    acc_.s0 = R_.one();
    acc_.s.assign(L.min_gens.size(), R_.one());
    for (const auto& g : L.min_gens) gen_first_.push_back(R_.one_minus(g));
  }

  Certificate run(const RingElement& a, const RingElement& b) {
    if (!R_.inverse(a) || !R_.inverse(b)) throw Error(Errc::NotUnit, "symbol arguments must be units");
    cert_.input = {a, b, 1};
    if (!is_trivial_symbol(R_, cert_.input)) base_round(a, b);
    cert_.rounds = 1;
    int last = 0;
    while (true) {
      merge_work(last);
      if (work_.empty()) break;
      int n = kInfiniteLevel;
      for (const auto& s : work_) n = std::min(n, symbol_level(L_, s));
      if (n <= last || n >= 2 * L_.nilpotency_index - 1)
        throw Error(Errc::PreconditionFailed, "level bookkeeping violated at round " + std::to_string(n));
      last = n;
      ++cert_.rounds;
      std::vector<Symbol> now, later;
      for (auto& s : work_) (symbol_level(L_, s) == n ? now : later).push_back(std::move(s));
      work_ = std::move(later);
      for (const auto& s : now) process(s, n);
    }
    cert_.tform = acc_;
    return std::move(cert_);
  }

 private:
  void emit(CertStep s) { cert_.steps.push_back(std::move(s)); }

  void base_round(const RingElement& a, const RingElement& b) {
    const BaseSplit sa = base_split(L_, a);
    if (sa.l != 0) {
      CertStep s = base_split_step(L_, 0, a, b, sa.l, sa.a_prime);
      const Symbol theta_part = s.produced[0];
      emit(std::move(s));
      route(theta_part, 0);
    }
    if (R_.is_one(sa.a_prime)) return;
    const BaseSplit sb = base_split(L_, b);
    if (sb.l != 0) {
      CertStep s = base_split_step(L_, 1, sa.a_prime, b, sb.l, sb.a_prime);
      const Symbol theta_part = s.produced[0];
      emit(std::move(s));
      route(theta_part, 0);
    }
    push_work({sa.a_prime, sb.a_prime, 1}, 0);
  }

  void push_work(const Symbol& s, int n) {
    if (is_trivial_symbol(R_, s)) return;
    route(s, n);
  }

  /// T-form shaped symbols go into the accumulators; everything else waits.
  void route(const Symbol& s, int n) {
    if (is_trivial_symbol(R_, s)) return;
    if (s.a == L_.theta) {
      accumulate(acc_.s0, s, n);
      return;
    }
    for (std::size_t j = 0; j < gen_first_.size(); ++j)
      if (s.a == gen_first_[j]) {
        accumulate(acc_.s[j], s, n);
        return;
      }
    work_.push_back(s);
  }

  void accumulate(RingElement& slot, const Symbol& s, int n) {
    const RingElement merged = R_.mul(slot, upow(R_, s.b, s.e));
    emit(CertStep{Rule::BIMULT, {}, {{s.a, slot, 1}, s}, {{s.a, merged, 1}}, {}, n});
    slot = merged;
  }

  // Combines pending symbols that share a first argument into one.
  void merge_work(int n) {
    std::vector<Symbol> merged;
    std::vector<std::vector<Symbol>> groups;
    for (const auto& s : work_) {
      if (is_trivial_symbol(R_, s)) continue;
      auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g[0].a == s.a; });
      if (it == groups.end())
        groups.push_back({s});
      else
        it->push_back(s);
    }
    work_.clear();
    for (auto& g : groups) {
      if (g.size() == 1 && g[0].e == 1) {
        work_.push_back(g[0]);
        continue;
      }
      RingElement prod = R_.one();
      for (const auto& s : g) prod = R_.mul(prod, upow(R_, s.b, s.e));
      const Symbol out{g[0].a, prod, 1};
      emit(CertStep{Rule::BIMULT, {}, g, {out}, {}, n});
      if (!is_trivial_symbol(R_, out)) work_.push_back(out);
    }
  }

  void process(const Symbol& sym, int n) {
    const RingElement& x = sym.a;
    const RingElement& y = sym.b;
    const RingElement q = R_.one_minus(y);
    const MonomialDecomposition md = monomial_decompose(L_, R_.one_minus(x));
    const int t = md.t;

    if (md.product != x) {
      CertStep s = congruence_step(L_, x, md.product, y, t, n);
      const Symbol late = s.deferred[0];
      emit(std::move(s));
      push_work(late, n);
    }
    std::vector<RingElement> firsts;
    for (const auto& term : md.terms)
      firsts.push_back(R_.one_minus(R_.mul(term.v, monomial_value(L_, term.gens))));
    if (firsts.size() > 1) {
      CertStep s{Rule::BIMULT, {}, {{md.product, y, 1}}, {}, {}, n};
      for (const auto& f : firsts) s.produced.push_back({f, y, 1});
      emit(std::move(s));
    }

    for (const auto& term : md.terms) {
      std::vector<RingElement> qs;
      for (std::size_t k = 0; k < term.gens.size(); ++k) {
        const RingElement& g = L_.min_gens[static_cast<std::size_t>(term.gens[k])];
        qs.push_back(k == 0 ? R_.mul(term.v, g) : g);
      }
      auto [factors, trail] = cor36_expand(L_, qs, q, n);
      for (auto& s : trail) {
        const SymProduct late = s.deferred;
        const SymProduct residual(s.produced.begin() + static_cast<std::ptrdiff_t>(qs.size()),
                                  s.produced.end());
        emit(std::move(s));
        for (const auto& d : late) push_work(d, n);
        for (const auto& res : residual) absorb_minus_one(res, n);
      }
      for (std::size_t k = 1; k < factors.size(); ++k) route(factors[k], n);
      first_factor(term, factors[0], n);
    }
  }

  // {1 - v a, 1 - u}: T-form when v = 1, otherwise (i1) then theta powers.
  void first_factor(const MonomialTerm& term, const Symbol& f, int n) {
    if (is_trivial_symbol(R_, f)) return;
    if (R_.is_one(term.v)) {
      route(f, n);
      return;
    }
    const RingElement& a = L_.min_gens[static_cast<std::size_t>(term.gens[0])];
    const RingElement u = R_.one_minus(f.b);
    CertStep s = apply_i1(L_, term.v, u, a, n);
    const Symbol vz = s.produced[0], tform_part = s.produced[1];
    const SymProduct late = s.deferred;
    emit(std::move(s));
    for (const auto& d : late) push_work(d, n);
    route(tform_part, n);
    if (is_trivial_symbol(R_, vz)) return;
    const BaseSplit sv = base_split(L_, vz.a);
    CertStep tp = theta_power_step(L_, vz.a, vz.b, sv.l, sv.a_prime, n);
    const Symbol theta_part = tp.produced[0], rest = tp.deferred[0];
    emit(std::move(tp));
    route(theta_part, n);
    push_work(rest, n);
  }

  // {-1, W}: deferred in residue characteristic 2, cancelled exactly otherwise
  // by writing W = Y^2 inside the odd-order group 1 + I.
  void absorb_minus_one(const Symbol& s, int n) {
    if (is_trivial_symbol(R_, s)) return;
    if (!odd_char_) {
      emit(defer_step(L_, s.a, s.b, s.e, n));
      push_work(s, n);
      return;
    }
    const RingElement y = R_.pow(s.b, (L_.maximal_ideal.size() + 1) / 2);
    emit(CertStep{Rule::BIMULT, {}, {s}, {{s.a, y, s.e}, {s.a, y, s.e}}, {}, n});
    emit(CertStep{Rule::BIMULT, {}, {{s.a, y, s.e}, {s.a, y, s.e}}, {{R_.one(), y, s.e}}, {}, n});
  }

  const LocalStructure& L_;
  const FiniteRing& R_;
  bool odd_char_ = true;
  std::vector<RingElement> gen_first_;
  TForm acc_;
  std::vector<Symbol> work_;
  Certificate cert_;
};

}  // namespace detail

/// Rewrites {a,b} into T-form with a replayable certificate.
inline Certificate rewrite_symbol(const LocalStructure& L, const RingElement& a, const RingElement& b) {
  return detail::Rewriter(L).run(a, b);
}

}  // namespace ulat
