#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ulat/error.hpp"
#include "ulat/finring/radical.hpp"
#include "ulat/finring/ring.hpp"
#include "ulat/matgroup/matrix.hpp"

namespace ulat {

enum class Side { Left, Right };

struct Slot {
  Side side;
  int i, j;  // 1-based
  int stage;  // m of the stage that owns the slot

  friend bool operator==(const Slot&, const Slot&) = default;
};

/// Data-independent slot order: stages m = d, ..., 2 with 3m - 2 slots each.
struct SlotSchedule {
  std::size_t d = 0;
  std::vector<Slot> slots;

  std::size_t bound() const { return slots.size(); }
};

inline std::size_t schedule_length(std::size_t d) { return (3 * d * d - d - 2) / 2; }

inline SlotSchedule schedule(std::size_t d) {
  if (d < 2) throw Error(Errc::BadDimension, "schedule needs d >= 2");
  SlotSchedule s{d, {}};
  for (int m = static_cast<int>(d); m >= 2; --m) {
    for (int i = 1; i < m; ++i) s.slots.push_back({Side::Right, i, m, m});  // pivot creation
    s.slots.push_back({Side::Left, m, 1, m});                             // entry (m,m) := 1
    for (int i = 1; i < m; ++i) s.slots.push_back({Side::Left, i, m, m});   // clear column m
    for (int j = 1; j < m; ++j) s.slots.push_back({Side::Right, m, j, m});  // clear row m
  }
  return s;
}

struct ElemFactor {
  Side side;
  int i, j;
  RingElement r;
};

/// One factor per schedule slot (zero parameters allowed).
///
/// The word stands for the matrix  L_1 L_2 ... L_p * R_q ... R_2 R_1, where
/// L_1.. are the left factors and R_1.. the right factors, each in schedule
/// order. Replaying the schedule backwards from Id, multiplying left factors
/// on the left and right factors on the right, produces exactly this matrix.
struct ElemWord {
  std::vector<ElemFactor> factors;
  std::size_t bound = 0;

  std::size_t nonzero_length() const {
    std::size_t n = 0;
    for (const auto& f : factors)
      n += std::any_of(f.r.coeffs.begin(), f.r.coeffs.end(), [](std::int64_t c) { return c != 0; });
    return n;
  }
};

inline Matrix replay(const FiniteRing& R, const ElemWord& w, std::size_t d) {
  Matrix x = identity(R, d);
  for (auto it = w.factors.rbegin(); it != w.factors.rend(); ++it) {
    if (it->side == Side::Left)
      add_row_multiple(R, x, it->i, it->j, it->r);
    else
      add_col_multiple(R, x, it->i, it->j, it->r);
  }
  return x;
}

/// Nonzero factor count per stage, indexed like the schedule's stages (m = d first).
inline std::vector<std::size_t> stage_counts(const ElemWord& w, const SlotSchedule& s) {
  std::vector<std::size_t> counts(s.d - 1, 0);
  for (std::size_t k = 0; k < w.factors.size() && k < s.slots.size(); ++k)
    if (std::any_of(w.factors[k].r.coeffs.begin(), w.factors[k].r.coeffs.end(),
                    [](std::int64_t c) { return c != 0; }))
      ++counts[s.d - static_cast<std::size_t>(s.slots[k].stage)];
  return counts;
}

/// True iff the factors sit on the schedule for M's dimension, the nonzero
/// count respects the bound, and the word's matrix is M.
inline bool verify_word(const FiniteRing& R, const ElemWord& w, const Matrix& M) {
  const SlotSchedule s = schedule(M.d);
  if (w.factors.size() != s.slots.size()) return false;
  for (std::size_t k = 0; k < s.slots.size(); ++k) {
    const auto& f = w.factors[k];
    if (f.side != s.slots[k].side || f.i != s.slots[k].i || f.j != s.slots[k].j) return false;
    if (f.r.coeffs.size() != R.dim()) return false;
  }
  if (w.nonzero_length() > w.bound || w.bound > s.bound()) return false;
  return replay(R, w, M.d) == M;
}

/// Fixed-schedule reduction of M in SL_d(R) for a local ring R.
inline ElemWord factor_local(const FiniteRing& R, const Matrix& M) {
  if (!R.is_one(det(R, M))) throw Error(Errc::NotSL, "determinant is not 1");
  const std::size_t d = M.d;
  const SlotSchedule s = schedule(d);
  ElemWord w{{}, s.bound()};
  w.factors.reserve(s.slots.size());
  Matrix x = M;
  std::size_t k = 0;
  // Records the inverse of the operation applied to x.
  auto apply = [&](const RingElement& r) {
    const Slot& slot = s.slots[k++];
    if (slot.side == Side::Left)
      add_row_multiple(R, x, slot.i, slot.j, r);
    else
      add_col_multiple(R, x, slot.i, slot.j, r);
    w.factors.push_back({slot.side, slot.i, slot.j, R.neg(r)});
  };

  for (int m = static_cast<int>(d); m >= 2; --m) {
    const auto um = static_cast<std::size_t>(m);
    bool settled = R.is_one(x.at(um - 1, um - 1));
    for (std::size_t i = 0; i + 1 < um && settled; ++i)
      settled = R.is_zero(x.at(i, um - 1)) && R.is_zero(x.at(um - 1, i));
    if (settled) {  // row and column m are already standard
      for (int t = 0; t < 3 * m - 2; ++t) apply(R.zero());
      continue;
    }
    std::optional<int> pivot;
    if (!R.inverse(x.at(0, um - 1))) {
      for (int i = 1; i < m && !pivot; ++i)
        if (R.inverse(x.at(0, static_cast<std::size_t>(i) - 1))) pivot = i;
      if (!pivot) throw Error(Errc::NotLocal, "first row has no unit entry; ring is not local");
    }
    for (int i = 1; i < m; ++i) apply(pivot && *pivot == i ? R.one() : R.zero());

    const RingElement inv = R.inverse_or_throw(x.at(0, um - 1));
    apply(R.mul(R.one_minus(x.at(um - 1, um - 1)), inv));
    for (int i = 1; i < m; ++i) apply(R.neg(x.at(static_cast<std::size_t>(i) - 1, um - 1)));
    for (int j = 1; j < m; ++j) apply(R.neg(x.at(um - 1, static_cast<std::size_t>(j) - 1)));
  }
  return w;
}

/// Factorization over any finite commutative ring through its local
/// decomposition; the decomposition is computed once per ring.
class SlFactorizer {
 public:
  explicit SlFactorizer(const FiniteRing& R) : R_(R), dec_(decompose_local(R)) {}

  const Decomposition& decomposition() const { return dec_; }

  ElemWord factor(const Matrix& M) const {
    if (!R_.is_one(det(R_, M))) throw Error(Errc::NotSL, "determinant is not 1");
    if (dec_.components.size() == 1) {
      const Component& c = dec_.components[0];
      return lift(0, factor_local(c.ring, project(0, M)));
    }
    ElemWord out;
    for (std::size_t c = 0; c < dec_.components.size(); ++c) {
      ElemWord part = lift(c, factor_local(dec_.components[c].ring, project(c, M)));
      if (c == 0) {
        out = std::move(part);
        continue;
      }
      for (std::size_t k = 0; k < out.factors.size(); ++k)
        out.factors[k].r = R_.add(out.factors[k].r, part.factors[k].r);
    }
    return out;
  }

 private:
  Matrix project(std::size_t c, const Matrix& M) const {
    Matrix p{M.d, {}};
    for (const auto& x : M.e) p.e.push_back(dec_.project(R_, c, x));
    return p;
  }
  ElemWord lift(std::size_t c, ElemWord w) const {
    for (auto& f : w.factors) f.r = dec_.section(R_, c, f.r);
    return w;
  }

  const FiniteRing& R_;
  Decomposition dec_;
};

inline ElemWord factor(const FiniteRing& R, const Matrix& M) { return SlFactorizer(R).factor(M); }

}  // namespace ulat
