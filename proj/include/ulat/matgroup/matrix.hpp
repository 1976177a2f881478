#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "ulat/error.hpp"
#include "ulat/finring/ring.hpp"

namespace ulat {

/// Square matrix over a FiniteRing, row-major, 0-based storage.
struct Matrix {
  std::size_t d = 0;
  std::vector<RingElement> e;

  RingElement& at(std::size_t i, std::size_t j) { return e[i * d + j]; }
  const RingElement& at(std::size_t i, std::size_t j) const { return e[i * d + j]; }

  friend bool operator==(const Matrix& a, const Matrix& b) { return a.d == b.d && a.e == b.e; }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }
};

inline Matrix zero_matrix(const FiniteRing& R, std::size_t d) {
  return Matrix{d, std::vector<RingElement>(d * d, R.zero())};
}

inline Matrix identity(const FiniteRing& R, std::size_t d) {
  Matrix m = zero_matrix(R, d);
  for (std::size_t i = 0; i < d; ++i) m.at(i, i) = R.one();
  return m;
}

/// Id + r * e_{i,j}; indices are 1-based as everywhere in the public interface.
inline Matrix elementary(const FiniteRing& R, std::size_t d, int i, int j, const RingElement& r) {
  if (i == j || i < 1 || j < 1 || static_cast<std::size_t>(i) > d || static_cast<std::size_t>(j) > d)
    throw Error(Errc::InvalidRing, "elementary matrix needs distinct indices in 1..d");
  Matrix m = identity(R, d);
  m.at(i - 1, j - 1) = r;
  return m;
}

inline Matrix mat_mul(const FiniteRing& R, const Matrix& a, const Matrix& b) {
  const std::size_t d = a.d;
  Matrix c = zero_matrix(R, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      if (R.is_zero(a.at(i, k))) continue;
      for (std::size_t j = 0; j < d; ++j)
        if (!R.is_zero(b.at(k, j))) c.at(i, j) = R.add(c.at(i, j), R.mul(a.at(i, k), b.at(k, j)));
    }
  return c;
}

/// In-place row operation: row i += r * row j (left multiplication by Id + r e_ij).
inline void add_row_multiple(const FiniteRing& R, Matrix& m, int i, int j, const RingElement& r) {
  if (R.is_zero(r)) return;
  for (std::size_t c = 0; c < m.d; ++c)
    m.at(i - 1, c) = R.add(m.at(i - 1, c), R.mul(r, m.at(j - 1, c)));
}

/// In-place column operation: column j += r * column i (right multiplication by Id + r e_ij).
inline void add_col_multiple(const FiniteRing& R, Matrix& m, int i, int j, const RingElement& r) {
  if (R.is_zero(r)) return;
  for (std::size_t row = 0; row < m.d; ++row)
    m.at(row, j - 1) = R.add(m.at(row, j - 1), R.mul(m.at(row, i - 1), r));
}

namespace detail {

inline RingElement det_laplace(const FiniteRing& R, const Matrix& m, std::vector<std::size_t>& cols,
                               std::size_t row) {
  if (row == m.d) return R.one();
  RingElement acc = R.zero();
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const std::size_t c = cols[k];
    if (R.is_zero(m.at(row, c))) continue;
    cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(k));
    RingElement term = R.mul(m.at(row, c), det_laplace(R, m, cols, row + 1));
    cols.insert(cols.begin() + static_cast<std::ptrdiff_t>(k), c);
    acc = k % 2 == 0 ? R.add(acc, term) : R.sub(acc, term);
  }
  return acc;
}

// Division-free characteristic polynomial det(xI - A) (Berkowitz); det A is
// (-1)^d times its constant coefficient.
inline RingElement det_berkowitz(const FiniteRing& R, const Matrix& a) {
  const std::size_t n = a.d;
  std::vector<RingElement> poly{R.one(), R.neg(a.at(0, 0))};  // leading coefficient first
  for (std::size_t r = 1; r < n; ++r) {
    // Toeplitz column 1, -a_rr, -R C, -R A C, ... for the leading r x r block A.
    std::vector<RingElement> col{R.one(), R.neg(a.at(r, r))};
    std::vector<RingElement> v(r);
    for (std::size_t i = 0; i < r; ++i) v[i] = a.at(i, r);
    for (std::size_t k = 0; k < r; ++k) {
      RingElement s = R.zero();
      for (std::size_t j = 0; j < r; ++j) s = R.add(s, R.mul(a.at(r, j), v[j]));
      col.push_back(R.neg(s));
      std::vector<RingElement> w(r, R.zero());
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) w[i] = R.add(w[i], R.mul(a.at(i, j), v[j]));
      v = std::move(w);
    }
    std::vector<RingElement> next(r + 2, R.zero());
    for (std::size_t i = 0; i < r + 2; ++i)
      for (std::size_t j = 0; j <= i && j < poly.size(); ++j)
        next[i] = R.add(next[i], R.mul(col[i - j], poly[j]));
    poly = std::move(next);
  }
  const RingElement c0 = poly.back();
  return n % 2 == 0 ? c0 : R.neg(c0);
}

}  // namespace detail

/// Exact determinant: cofactor expansion up to d = 4, Berkowitz beyond.
inline RingElement det(const FiniteRing& R, const Matrix& m) {
  if (m.d <= 4) {
    std::vector<std::size_t> cols(m.d);
    for (std::size_t i = 0; i < m.d; ++i) cols[i] = i;
    return detail::det_laplace(R, m, cols, 0);
  }
  return detail::det_berkowitz(R, m);
}

/// Uniform sample from SL_d(R): rejection on invertible determinant, then the
/// first row is rescaled by the inverse determinant.
template <class Rng>
Matrix random_sl(const FiniteRing& R, std::size_t d, Rng& rng) {
  std::uniform_int_distribution<std::uint64_t> pick(0, R.size() - 1);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    Matrix m = zero_matrix(R, d);
    for (auto& x : m.e) x = R.element_at(pick(rng));
    const auto inv = R.inverse(det(R, m));
    if (!inv) continue;
    for (std::size_t c = 0; c < d; ++c) m.at(0, c) = R.mul(*inv, m.at(0, c));
    return m;
  }
  throw Error(Errc::NotSL, "could not sample an invertible matrix");
}

}  // namespace ulat
