#pragma once

// Subgroups of finite abelian groups Z/m_1 + ... + Z/m_b held in echelon
// (Hermite) form, plus a diagonalisation routine that turns a presentation
// into an explicit direct sum of cyclic groups.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "ulat/error.hpp"

namespace ulat {

using Coeffs = boost::container::small_vector<std::int64_t, 6>;

namespace detail {

inline std::int64_t mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

inline std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
  __int128 r = static_cast<__int128>(a) * b % m;
  if (r < 0) r += m;
  return static_cast<std::int64_t>(r);
}

struct Egcd {
  std::int64_t g, s, t;  // s*a + t*b = g
};

inline Egcd egcd(std::int64_t a, std::int64_t b) {
  std::int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    std::int64_t q = old_r / r;
    std::tie(old_r, r) = std::pair{r, old_r - q * r};
    std::tie(old_s, s) = std::pair{s, old_s - q * s};
    std::tie(old_t, t) = std::pair{t, old_t - q * t};
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

/// Additive order of `x` in the group with the given cyclic orders.
inline std::int64_t additive_order(const Coeffs& x,
                                   const std::vector<std::int64_t>& orders) {
  std::int64_t o = 1;
  for (std::size_t i = 0; i < orders.size(); ++i)
    o = std::lcm(o, orders[i] / std::gcd(mod(x[i], orders[i]), orders[i]));
  return o;
}

}  // namespace detail

/// A subgroup of the finite abelian group G = Z/m_1 + ... + Z/m_b.
///
/// Stored as one row per coordinate: row i has zeros before column i and the
/// value p_i (a divisor of m_i) at column i. p_i == m_i marks an empty row.
/// Every element of the subgroup is uniquely sum c_i * row_i with
/// 0 <= c_i < m_i / p_i, which makes membership, canonical remainders and
/// enumeration straightforward.
class AdditiveSubgroup {
 public:
  AdditiveSubgroup() = default;

  explicit AdditiveSubgroup(std::vector<std::int64_t> orders)
      : orders_(std::move(orders)),
        pivots_(orders_),
        rows_(orders_.size(), Coeffs(orders_.size(), 0)) {}

  std::size_t ambient_dim() const { return orders_.size(); }
  const std::vector<std::int64_t>& orders() const { return orders_; }
  const std::vector<std::int64_t>& pivots() const { return pivots_; }
  const Coeffs& row(std::size_t i) const { return rows_[i]; }
  bool row_empty(std::size_t i) const { return pivots_[i] == orders_[i]; }

  void insert(const Coeffs& v) {
    std::vector<Coeffs> queue{normalized(v)};
    while (!queue.empty()) {
      Coeffs x = std::move(queue.back());
      queue.pop_back();
      for (std::size_t i = 0; i < orders_.size(); ++i) {
        x[i] = detail::mod(x[i], orders_[i]);
        if (x[i] == 0) continue;
        const std::int64_t p = pivots_[i];
        if (x[i] % p == 0 && !row_empty(i)) {
          sub_multiple(x, x[i] / p, rows_[i], i);
          continue;
        }
        const auto [g, s, t] = detail::egcd(p, x[i]);
        Coeffs fresh(orders_.size(), 0);
        Coeffs rest(orders_.size(), 0);
        for (std::size_t j = i + 1; j < orders_.size(); ++j) {
          const std::int64_t m = orders_[j];
          fresh[j] = detail::mod(detail::mulmod(s, rows_[i][j], m) +
                                     detail::mulmod(t, x[j], m),
                                 m);
          rest[j] = detail::mod(detail::mulmod(p / g, x[j], m) -
                                    detail::mulmod(x[i] / g, rows_[i][j], m),
                                m);
        }
        fresh[i] = g;
        rows_[i] = std::move(fresh);
        pivots_[i] = g;
        queue.push_back(std::move(rest));
        break;
      }
    }
    canonicalize();
  }

  /// Canonical representative of v modulo the subgroup, reducing only the
  /// first `ncols` coordinates (all of them by default).
  Coeffs remainder(const Coeffs& v, std::size_t ncols = static_cast<std::size_t>(-1)) const {
    Coeffs x = normalized(v);
    const std::size_t n = std::min(ncols, orders_.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (row_empty(i)) continue;
      sub_multiple(x, x[i] / pivots_[i], rows_[i], i);
    }
    return x;
  }

  bool contains(const Coeffs& v) const {
    const Coeffs r = remainder(v);
    return std::all_of(r.begin(), r.end(), [](std::int64_t c) { return c == 0; });
  }

  /// Coefficients c with v = sum c_i row_i, 0 <= c_i < m_i / p_i; empty when
  /// v is not in the subgroup.
  std::optional<Coeffs> coordinates(const Coeffs& v) const {
    Coeffs x = normalized(v);
    Coeffs c(orders_.size(), 0);
    for (std::size_t i = 0; i < orders_.size(); ++i) {
      if (x[i] == 0) continue;
      if (row_empty(i) || x[i] % pivots_[i] != 0) return std::nullopt;
      c[i] = x[i] / pivots_[i];
      sub_multiple(x, c[i], rows_[i], i);
    }
    return c;
  }

  std::uint64_t order() const {
    std::uint64_t n = 1;
    for (std::size_t i = 0; i < orders_.size(); ++i)
      n *= static_cast<std::uint64_t>(orders_[i] / pivots_[i]);
    return n;
  }

  bool is_trivial() const { return order() == 1; }

  /// Non-empty echelon rows, in column order.
  std::vector<Coeffs> generators() const {
    std::vector<Coeffs> out;
    for (std::size_t i = 0; i < orders_.size(); ++i)
      if (!row_empty(i)) out.push_back(rows_[i]);
    return out;
  }

  std::vector<std::size_t> pivot_columns() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < orders_.size(); ++i)
      if (!row_empty(i)) out.push_back(i);
    return out;
  }

  template <class F>
  void for_each_element(F&& f) const {
    const auto cols = pivot_columns();
    std::vector<std::int64_t> counter(cols.size(), 0);
    Coeffs x(orders_.size(), 0);
    while (true) {
      f(static_cast<const Coeffs&>(x));
      std::size_t k = cols.size();
      while (k > 0) {
        --k;
        const std::size_t i = cols[k];
        add_row(x, rows_[i]);
        if (++counter[k] < orders_[i] / pivots_[i]) break;
        counter[k] = 0;  // wrapped: x picked up exactly (m_i/p_i) row_i
        sub_multiple_all(x, orders_[i] / pivots_[i], rows_[i]);
        if (k == 0) return;
      }
      if (cols.empty()) return;
    }
  }

  friend bool operator==(const AdditiveSubgroup& a, const AdditiveSubgroup& b) {
    return a.orders_ == b.orders_ && a.pivots_ == b.pivots_ && a.rows_ == b.rows_;
  }

 private:
  Coeffs normalized(const Coeffs& v) const {
    Coeffs x(orders_.size(), 0);
    for (std::size_t i = 0; i < orders_.size(); ++i)
      x[i] = detail::mod(i < v.size() ? v[i] : 0, orders_[i]);
    return x;
  }

  void sub_multiple(Coeffs& x, std::int64_t q, const Coeffs& row, std::size_t from) const {
    if (q == 0) return;
    for (std::size_t j = from; j < orders_.size(); ++j)
      x[j] = detail::mod(x[j] - detail::mulmod(q, row[j], orders_[j]), orders_[j]);
  }

  void sub_multiple_all(Coeffs& x, std::int64_t q, const Coeffs& row) const {
    sub_multiple(x, q, row, 0);
  }

  void add_row(Coeffs& x, const Coeffs& row) const {
    for (std::size_t j = 0; j < orders_.size(); ++j)
      x[j] = detail::mod(x[j] + row[j], orders_[j]);
  }

  void canonicalize() {
    for (std::size_t i = 0; i < orders_.size(); ++i) {
      if (row_empty(i)) continue;
      for (std::size_t j = i + 1; j < orders_.size(); ++j) {
        if (row_empty(j)) continue;
        sub_multiple(rows_[i], rows_[i][j] / pivots_[j], rows_[j], j);
      }
    }
  }

  std::vector<std::int64_t> orders_;
  std::vector<std::int64_t> pivots_;
  std::vector<Coeffs> rows_;
};

/// Explicit cyclic decomposition of a finite quotient Z^s / <relations>.
struct CyclicDecomposition {
  std::vector<std::int64_t> orders;       ///< nontrivial cyclic orders d_k
  std::vector<Coeffs> coordinate_map;     ///< s rows: x -> sum_j x_j * coordinate_map[j]
  std::vector<Coeffs> generators;         ///< generator k as a vector in Z^s

  Coeffs to_coordinates(const Coeffs& x) const {
    Coeffs out(orders.size(), 0);
    for (std::size_t j = 0; j < coordinate_map.size(); ++j) {
      if (x[j] == 0) continue;
      for (std::size_t k = 0; k < orders.size(); ++k)
        out[k] = detail::mod(out[k] + detail::mulmod(x[j], coordinate_map[j][k], orders[k]),
                             orders[k]);
    }
    return out;
  }
};

/// Diagonalises the relation matrix by invertible row and column operations
/// over Z/exponent. `exponent` must annihilate the quotient.
inline CyclicDecomposition cyclic_decomposition(const std::vector<Coeffs>& relations,
                                                std::size_t s, std::int64_t exponent) {
  using detail::mod;
  const std::int64_t E = exponent;
  std::vector<std::vector<std::int64_t>> A;
  for (const auto& r : relations) {
    std::vector<std::int64_t> row(s);
    for (std::size_t j = 0; j < s; ++j) row[j] = mod(j < r.size() ? r[j] : 0, E);
    A.push_back(std::move(row));
  }
  // V tracks the column transform (coordinates), W its inverse (generators).
  std::vector<std::vector<std::int64_t>> V(s, std::vector<std::int64_t>(s, 0)), W = V;
  for (std::size_t j = 0; j < s; ++j) V[j][j] = W[j][j] = 1;

  auto col_addmul = [&](std::size_t dst, std::size_t src, std::int64_t k) {
    // column dst += k * column src; inverse acts on the rows of W
    for (auto& row : A) row[dst] = mod(row[dst] + detail::mulmod(k, row[src], E), E);
    for (auto& row : V) row[dst] = mod(row[dst] + detail::mulmod(k, row[src], E), E);
    for (std::size_t c = 0; c < s; ++c)
      W[src][c] = mod(W[src][c] - detail::mulmod(k, W[dst][c], E), E);
  };
  auto col_swap = [&](std::size_t a, std::size_t b) {
    for (auto& row : A) std::swap(row[a], row[b]);
    for (auto& row : V) std::swap(row[a], row[b]);
    std::swap(W[a], W[b]);
  };

  const std::size_t nrows = A.size();
  std::vector<std::int64_t> diag(s, 0);
  for (std::size_t k = 0; k < s && k < nrows; ++k) {
    while (true) {
      std::size_t pr = nrows, pc = s;
      std::int64_t best = 0;
      for (std::size_t r = k; r < nrows; ++r)
        for (std::size_t c = k; c < s; ++c)
          if (A[r][c] != 0 && (best == 0 || A[r][c] < best)) best = A[r][c], pr = r, pc = c;
      if (pr == nrows) break;
      std::swap(A[k], A[pr]);
      if (pc != k) col_swap(k, pc);
      const std::int64_t piv = A[k][k];
      bool clean = true;
      for (std::size_t r = k + 1; r < nrows; ++r) {
        if (A[r][k] == 0) continue;
        const std::int64_t q = A[r][k] / piv;
        for (std::size_t c = k; c < s; ++c)
          A[r][c] = mod(A[r][c] - detail::mulmod(q, A[k][c], E), E);
        clean = clean && A[r][k] == 0;
      }
      for (std::size_t c = k + 1; c < s; ++c) {
        if (A[k][c] == 0) continue;
        col_addmul(c, k, mod(-(A[k][c] / piv), E));
        clean = clean && A[k][c] == 0;
      }
      if (clean) break;
    }
    diag[k] = A[k][k];
  }

  CyclicDecomposition out;
  std::vector<std::size_t> kept;
  for (std::size_t k = 0; k < s; ++k) {
    const std::int64_t d = std::gcd(diag[k] == 0 ? E : diag[k], E);
    if (d == 1) continue;
    kept.push_back(k);
  }
  // Present generators in the order of their leading coordinate.
  auto lead = [&](std::size_t k) {
    std::size_t c = 0;
    while (c < s && W[k][c] == 0) ++c;
    return c;
  };
  std::stable_sort(kept.begin(), kept.end(),
                   [&](std::size_t a, std::size_t b) { return lead(a) < lead(b); });
  for (auto k : kept) out.orders.push_back(std::gcd(diag[k] == 0 ? E : diag[k], E));
  out.coordinate_map.assign(s, Coeffs(kept.size(), 0));
  for (std::size_t j = 0; j < s; ++j)
    for (std::size_t t = 0; t < kept.size(); ++t)
      out.coordinate_map[j][t] = mod(V[j][kept[t]], out.orders[t]);
  for (std::size_t t = 0; t < kept.size(); ++t) {
    Coeffs g(s, 0);
    for (std::size_t c = 0; c < s; ++c) g[c] = W[kept[t]][c];
    out.generators.push_back(std::move(g));
  }
  return out;
}

}  // namespace ulat
