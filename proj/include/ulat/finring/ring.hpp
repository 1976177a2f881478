#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <ostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ulat/error.hpp"
#include "ulat/finring/subgroup.hpp"

namespace ulat {

inline constexpr std::uint64_t kDefaultSizeCap = std::uint64_t{1} << 20;

/// An element of a FiniteRing: coefficients against the ring's additive basis,
/// each reduced into [0, m_i).
struct RingElement {
  Coeffs coeffs;

  RingElement() = default;
  explicit RingElement(Coeffs c) : coeffs(std::move(c)) {}

  friend bool operator==(const RingElement& a, const RingElement& b) {
    return a.coeffs == b.coeffs;
  }
  friend bool operator!=(const RingElement& a, const RingElement& b) { return !(a == b); }
  friend bool operator<(const RingElement& a, const RingElement& b) {
    return std::lexicographical_compare(a.coeffs.begin(), a.coeffs.end(), b.coeffs.begin(),
                                        b.coeffs.end());
  }
  friend std::ostream& operator<<(std::ostream& os, const RingElement& a) {
    os << '[';
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) os << (i ? "," : "") << a.coeffs[i];
    return os << ']';
  }
};

/// Finite commutative unital ring given by an additive basis with cyclic
/// orders m_i and structure constants e_i * e_j = sum_k c_ijk e_k.
class FiniteRing {
 public:
  FiniteRing(std::vector<std::int64_t> orders, std::vector<std::vector<Coeffs>> mul, Coeffs one,
             std::string label, std::uint64_t size_cap = kDefaultSizeCap)
      : orders_(std::move(orders)), label_(std::move(label)) {
    const std::size_t b = orders_.size();
    if (b == 0) throw Error(Errc::InvalidRing, "empty basis");
    size_ = 1;
    for (auto m : orders_) {
      if (m <= 0) throw Error(Errc::InvalidRing, "basis orders must be positive");
      if (size_ > size_cap / static_cast<std::uint64_t>(m))
        throw Error(Errc::SizeCap, label_ + " exceeds the ring size cap of " +
                                       std::to_string(size_cap));
      size_ *= static_cast<std::uint64_t>(m);
    }
    if (mul.size() != b) throw Error(Errc::InvalidRing, "multiplication table has wrong shape");
    table_.assign(b * b, Coeffs(b, 0));
    for (std::size_t i = 0; i < b; ++i) {
      if (mul[i].size() != b) throw Error(Errc::InvalidRing, "multiplication table has wrong shape");
      for (std::size_t j = 0; j < b; ++j) {
        if (mul[i][j].size() != b)
          throw Error(Errc::InvalidRing, "structure constant has wrong length");
        for (std::size_t k = 0; k < b; ++k)
          table_[i * b + j][k] = detail::mod(mul[i][j][k], orders_[k]);
      }
    }
    if (one.size() != b) throw Error(Errc::InvalidRing, "identity has wrong length");
    one_ = reduce(std::move(one));
    validate();
  }

  const std::string& label() const { return label_; }
  std::size_t dim() const { return orders_.size(); }
  const std::vector<std::int64_t>& orders() const { return orders_; }
  std::uint64_t size() const { return size_; }

  /// Structure constants of e_i * e_j.
  const Coeffs& product_of_basis(std::size_t i, std::size_t j) const {
    return table_[i * dim() + j];
  }

  RingElement reduce(Coeffs c) const {
    c.resize(dim(), 0);
    for (std::size_t i = 0; i < dim(); ++i) c[i] = detail::mod(c[i], orders_[i]);
    return RingElement(std::move(c));
  }

  RingElement zero() const { return RingElement(Coeffs(dim(), 0)); }
  const RingElement& one() const { return one_; }
  RingElement basis(std::size_t i) const {
    Coeffs c(dim(), 0);
    c[i] = 1 % orders_[i];
    return RingElement(std::move(c));
  }
  RingElement from_int(std::int64_t n) const { return scale(n, one_); }

  bool is_zero(const RingElement& a) const {
    return std::all_of(a.coeffs.begin(), a.coeffs.end(), [](std::int64_t c) { return c == 0; });
  }
  bool is_one(const RingElement& a) const { return a == one_; }

  RingElement add(const RingElement& a, const RingElement& b) const {
    Coeffs c(dim());
    for (std::size_t i = 0; i < dim(); ++i) c[i] = detail::mod(a.coeffs[i] + b.coeffs[i], orders_[i]);
    return RingElement(std::move(c));
  }
  RingElement sub(const RingElement& a, const RingElement& b) const {
    Coeffs c(dim());
    for (std::size_t i = 0; i < dim(); ++i) c[i] = detail::mod(a.coeffs[i] - b.coeffs[i], orders_[i]);
    return RingElement(std::move(c));
  }
  RingElement neg(const RingElement& a) const { return sub(zero(), a); }
  RingElement scale(std::int64_t n, const RingElement& a) const {
    Coeffs c(dim());
    for (std::size_t i = 0; i < dim(); ++i) c[i] = detail::mulmod(n, a.coeffs[i], orders_[i]);
    return RingElement(std::move(c));
  }
  /// 1 - a, which appears in almost every symbol.
  RingElement one_minus(const RingElement& a) const { return sub(one_, a); }

  RingElement mul(const RingElement& a, const RingElement& b) const {
    const std::size_t n = dim();
    Coeffs acc(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (a.coeffs[i] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (b.coeffs[j] == 0) continue;
        const __int128 ab = static_cast<__int128>(a.coeffs[i]) * b.coeffs[j];
        const Coeffs& t = table_[i * n + j];
        for (std::size_t k = 0; k < n; ++k) {
          if (t[k] == 0) continue;
          acc[k] = static_cast<std::int64_t>((acc[k] + (ab % orders_[k]) * t[k]) % orders_[k]);
        }
      }
    }
    return RingElement(std::move(acc));
  }

  RingElement pow(RingElement a, std::uint64_t e) const {
    RingElement r = one_;
    while (e) {
      if (e & 1) r = mul(r, a);
      e >>= 1;
      if (e) a = mul(a, a);
    }
    return r;
  }

  /// Mixed-radix index; the first coefficient is most significant, so index
  /// order is lexicographic order on coefficient vectors.
  std::uint64_t index_of(const RingElement& a) const {
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < dim(); ++i)
      idx = idx * static_cast<std::uint64_t>(orders_[i]) + static_cast<std::uint64_t>(a.coeffs[i]);
    return idx;
  }

  RingElement element_at(std::uint64_t idx) const {
    Coeffs c(dim(), 0);
    for (std::size_t i = dim(); i-- > 0;) {
      const auto m = static_cast<std::uint64_t>(orders_[i]);
      c[i] = static_cast<std::int64_t>(idx % m);
      idx /= m;
    }
    return RingElement(std::move(c));
  }

  template <class F>
  void for_each_element(F&& f) const {
    for (std::uint64_t i = 0; i < size_; ++i) f(element_at(i));
  }

  /// Additive subgroup a*R, spanned by the products a*e_j.
  AdditiveSubgroup principal_ideal(const RingElement& a) const {
    AdditiveSubgroup h(orders_);
    for (std::size_t j = 0; j < dim(); ++j) h.insert(mul(a, basis(j)).coeffs);
    return h;
  }

  /// Ideal generated by the given elements, as an additive subgroup.
  AdditiveSubgroup ideal(const std::vector<RingElement>& gens) const {
    AdditiveSubgroup h(orders_);
    for (const auto& g : gens)
      for (std::size_t j = 0; j < dim(); ++j) h.insert(mul(g, basis(j)).coeffs);
    return h;
  }

  /// Inverse of a, found by solving a*x = 1 exactly over the basis orders.
  /// Empty when multiplication by a is not bijective.
  std::optional<RingElement> inverse(const RingElement& a) const {
    const std::size_t b = dim();
    // Graph of x -> a*x inside G + G; reduce (1, 0) on the first block.
    std::vector<std::int64_t> ord2(orders_);
    ord2.insert(ord2.end(), orders_.begin(), orders_.end());
    AdditiveSubgroup graph(ord2);
    for (std::size_t j = 0; j < b; ++j) {
      Coeffs v = mul(a, basis(j)).coeffs;
      v.resize(2 * b, 0);
      v[b + j] = 1;
      graph.insert(v);
    }
    for (std::size_t i = 0; i < b; ++i)
      if (graph.pivots()[i] != 1) return std::nullopt;  // a*R != R
    Coeffs target = one_.coeffs;
    target.resize(2 * b, 0);
    const Coeffs rem = graph.remainder(target, b);
    Coeffs x(b);
    for (std::size_t i = 0; i < b; ++i) x[i] = detail::mod(-rem[b + i], orders_[i]);
    return RingElement(std::move(x));
  }

  bool is_unit(const RingElement& a) const { return principal_ideal(a).order() == size_; }

  RingElement inverse_or_throw(const RingElement& a) const {
    auto inv = inverse(a);
    if (!inv) throw Error(Errc::NotUnit, "element is not a unit in " + label_);
    return *inv;
  }

 private:
  void validate() const {
    const std::size_t b = dim();
    for (std::size_t i = 0; i < b; ++i)
      for (std::size_t j = 0; j < b; ++j) {
        const Coeffs& t = product_of_basis(i, j);
        if (t != product_of_basis(j, i))
          throw Error(Errc::InvalidRing, "multiplication is not commutative on basis pair");
        for (std::size_t k = 0; k < b; ++k)
          if (detail::mulmod(orders_[i], t[k], orders_[k]) != 0)
            throw Error(Errc::InvalidRing, "structure constants ignore the basis orders");
      }
    for (std::size_t i = 0; i < b; ++i)
      for (std::size_t j = 0; j < b; ++j)
        for (std::size_t k = 0; k < b; ++k) {
          const RingElement l = mul(RingElement(product_of_basis(i, j)), basis(k));
          const RingElement r = mul(basis(i), RingElement(product_of_basis(j, k)));
          if (l != r) throw Error(Errc::InvalidRing, "multiplication is not associative");
        }
    for (std::size_t i = 0; i < b; ++i)
      if (mul(one_, basis(i)) != basis(i))
        throw Error(Errc::NotUnital, label_ + ": declared identity is not a two-sided identity");
  }

  std::vector<std::int64_t> orders_;
  std::vector<Coeffs> table_;
  RingElement one_;
  std::string label_;
  std::uint64_t size_ = 0;
};

}  // namespace ulat
