#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ulat/error.hpp"
#include "ulat/finring/ring.hpp"
#include "ulat/matgroup/matrix.hpp"

namespace ulat {

/// x_{i,j}(r); the inverse generator is x_{i,j}(-r).
struct StGenerator {
  int i, j;
  RingElement r;

  friend bool operator==(const StGenerator&, const StGenerator&) = default;
};

using StWord = std::vector<StGenerator>;

/// Merges adjacent generators on the same site and drops zero parameters.
/// A single stack pass already reaches the fixed point.
inline StWord st_reduce(const FiniteRing& R, const StWord& w) {
  StWord out;
  for (const auto& g : w) {
    if (R.is_zero(g.r)) continue;
    if (!out.empty() && out.back().i == g.i && out.back().j == g.j) {
      out.back().r = R.add(out.back().r, g.r);
      if (R.is_zero(out.back().r)) out.pop_back();
    } else {
      out.push_back(g);
    }
  }
  return out;
}

inline StWord st_inverse(const FiniteRing& R, const StWord& w) {
  StWord out(w.rbegin(), w.rend());
  for (auto& g : out) g.r = R.neg(g.r);
  return out;
}

inline StWord st_concat(StWord a, const StWord& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

inline Matrix phi(const FiniteRing& R, const StWord& w, std::size_t d) {
  Matrix m = identity(R, d);
  for (const auto& g : w) {
    if (g.i == g.j || g.i < 1 || g.j < 1 || static_cast<std::size_t>(g.i) > d ||
        static_cast<std::size_t>(g.j) > d)
      throw Error(Errc::InvalidRing, "Steinberg generator site outside 1..d");
    add_col_multiple(R, m, g.i, g.j, g.r);  // m <- m * (Id + r e_ij)
  }
  return m;
}

/// w_ij(u) = x_ij(u) x_ji(-u^-1) x_ij(u)
inline StWord w_word(const FiniteRing& R, int i, int j, const RingElement& u) {
  const RingElement inv = R.inverse_or_throw(u);
  return {{i, j, u}, {j, i, R.neg(inv)}, {i, j, u}};
}

/// h_ij(u) = w_ij(u) w_ij(-1)
inline StWord h_word(const FiniteRing& R, int i, int j, const RingElement& u) {
  return st_concat(w_word(R, i, j, u), w_word(R, i, j, R.neg(R.one())));
}

/// {u,v}_ij = h_ij(uv) h_ij(u)^-1 h_ij(v)^-1, 18 generators before reduction.
inline StWord symbol_word(const FiniteRing& R, const RingElement& u, const RingElement& v, int i = 1,
                          int j = 2) {
  StWord w = h_word(R, i, j, R.mul(u, v));
  w = st_concat(std::move(w), st_inverse(R, h_word(R, i, j, u)));
  return st_concat(std::move(w), st_inverse(R, h_word(R, i, j, v)));
}

struct RelationReport {
  std::size_t checked = 0;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

/// Checks the phi-images of the three defining relations on `samples` random
/// parameter pairs for every index pattern. Relation 3 covers every pair of
/// sites (i,j), (k,l) with j != k and i != l.
inline RelationReport check_relations(const FiniteRing& R, std::size_t d, std::size_t samples,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  RelationReport rep;
  const int n = static_cast<int>(d);
  auto sample = [&] { return R.element_at(rng() % R.size()); };
  auto fail = [&](const std::string& what) { rep.failures.push_back(what); };
  const Matrix id = identity(R, d);

  for (std::size_t s = 0; s < samples; ++s) {
    const RingElement u = sample(), v = sample();
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        if (i == j) continue;
        ++rep.checked;
        if (phi(R, {{i, j, u}, {i, j, v}}, d) != phi(R, {{i, j, R.add(u, v)}}, d))
          fail("relation 1 at (" + std::to_string(i) + "," + std::to_string(j) + ")");
        for (int k = 1; k <= n; ++k) {
          if (k == i || k == j) continue;
          const StWord comm{{i, j, u}, {j, k, v}, {i, j, R.neg(u)}, {j, k, R.neg(v)}};
          ++rep.checked;
          if (phi(R, comm, d) != phi(R, {{i, k, R.mul(u, v)}}, d))
            fail("relation 2 at (" + std::to_string(i) + "," + std::to_string(j) + "," +
                 std::to_string(k) + ")");
        }
        for (int k = 1; k <= n; ++k)
          for (int l = 1; l <= n; ++l) {
            if (k == l || j == k || i == l) continue;
            const StWord comm{{i, j, u}, {k, l, v}, {i, j, R.neg(u)}, {k, l, R.neg(v)}};
            ++rep.checked;
            if (phi(R, comm, d) != id)
              fail("relation 3 at (" + std::to_string(i) + "," + std::to_string(j) + "),(" +
                   std::to_string(k) + "," + std::to_string(l) + ")");
          }
      }
  }
  return rep;
}

}  // namespace ulat
