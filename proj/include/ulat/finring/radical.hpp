#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ulat/error.hpp"
#include "ulat/finring/builders.hpp"
#include "ulat/finring/ring.hpp"

namespace ulat {

/// Ideal with its generators and the echelonised additive span.
struct Ideal {
  std::vector<RingElement> generators;
  AdditiveSubgroup span;

  bool contains(const RingElement& a) const { return span.contains(a.coeffs); }
  std::uint64_t size() const { return span.order(); }
  bool is_zero() const { return span.is_trivial(); }
};

inline Ideal make_ideal(const FiniteRing& R, std::vector<RingElement> gens) {
  AdditiveSubgroup span = R.ideal(gens);
  return Ideal{std::move(gens), std::move(span)};
}

inline bool is_nilpotent(const FiniteRing& R, RingElement a) {
  // a^(2^s) = 0 for 2^s >= |R| whenever a is nilpotent.
  const int steps = std::bit_width(R.size()) + 1;
  for (int s = 0; s <= steps; ++s) {
    if (R.is_zero(a)) return true;
    a = R.mul(a, a);
  }
  return R.is_zero(a);
}

/// Nilradical (equal to the Jacobson radical for finite commutative rings).
inline Ideal nilradical(const FiniteRing& R) {
  Ideal n = make_ideal(R, {});
  R.for_each_element([&](const RingElement& a) {
    if (n.contains(a) || !is_nilpotent(R, a)) return;
    n.generators.push_back(a);
    n = make_ideal(R, n.generators);
  });
  return n;
}

inline RingElement lift_idempotent(const FiniteRing& R, const RingElement& e0, const Ideal& nil) {
  if (!nil.contains(R.sub(R.mul(e0, e0), e0)))
    throw Error(Errc::NotApproxIdempotent, "e0^2 - e0 is not nilpotent");
  RingElement e = e0;
  for (int it = 0; it < 64; ++it) {
    const RingElement e2 = R.mul(e, e);
    if (e2 == e) return e;
    e = R.sub(R.scale(3, e2), R.scale(2, R.mul(e2, e)));
  }
  throw Error(Errc::NotApproxIdempotent, "lifting did not stabilise");
}

inline RingElement lift_idempotent(const FiniteRing& R, const RingElement& e0) {
  return lift_idempotent(R, e0, nilradical(R));
}

/// One local factor e*R of a decomposition, with maps to and from the parent.
struct Component {
  FiniteRing ring;
  RingElement idempotent;                    ///< e in the parent ring
  std::vector<RingElement> basis_in_parent;  ///< section of each component basis vector
  std::vector<RingElement> project_basis;    ///< projection of each parent basis vector
};

struct Decomposition {
  std::vector<Component> components;

  RingElement project(const FiniteRing& parent, std::size_t c, const RingElement& x) const {
    const Component& comp = components[c];
    RingElement y = comp.ring.zero();
    for (std::size_t j = 0; j < parent.dim(); ++j)
      if (x.coeffs[j] != 0) y = comp.ring.add(y, comp.ring.scale(x.coeffs[j], comp.project_basis[j]));
    return y;
  }

  RingElement section(const FiniteRing& parent, std::size_t c, const RingElement& y) const {
    const Component& comp = components[c];
    RingElement x = parent.zero();
    for (std::size_t t = 0; t < comp.ring.dim(); ++t)
      if (y.coeffs[t] != 0) x = parent.add(x, parent.scale(y.coeffs[t], comp.basis_in_parent[t]));
    return x;
  }

  /// Sum of the sections of the projections; the identity map when exact.
  RingElement recompose(const FiniteRing& parent, const RingElement& x) const {
    RingElement out = parent.zero();
    for (std::size_t c = 0; c < components.size(); ++c)
      out = parent.add(out, section(parent, c, project(parent, c, x)));
    return out;
  }
};

namespace detail {

inline std::string coeff_string(const RingElement& a) {
  std::string s = "(";
  for (std::size_t i = 0; i < a.coeffs.size(); ++i)
    s += (i ? "," : "") + std::to_string(a.coeffs[i]);
  return s + ")";
}

inline IdealRing split_off(const FiniteRing& R, const RingElement& e) {
  return ring_on_ideal(R, R.principal_ideal(e), e, R.label() + " * e" + coeff_string(e));
}

inline Component whole_ring(const FiniteRing& R) {
  std::vector<RingElement> basis;
  for (std::size_t i = 0; i < R.dim(); ++i) basis.push_back(R.basis(i));
  return Component{R, R.one(), basis, basis};
}

}  // namespace detail

/// Splits R into local rings by lifting residue idempotents, recursively.
inline Decomposition decompose_local(const FiniteRing& R) {
  const Ideal nil = nilradical(R);
  std::optional<RingElement> e0;
  R.for_each_element([&](const RingElement& a) {
    if (e0 || nil.contains(a) || nil.contains(R.one_minus(a))) return;
    if (nil.contains(R.sub(R.mul(a, a), a))) e0 = a;
  });
  if (!e0) return Decomposition{{detail::whole_ring(R)}};

  const RingElement e = lift_idempotent(R, *e0, nil);
  Decomposition out;
  for (const RingElement& f : {e, R.one_minus(e)}) {
    const IdealRing part = detail::split_off(R, f);
    std::vector<RingElement> proj;
    for (std::size_t j = 0; j < R.dim(); ++j) proj.push_back(part.to_component(R.mul(f, R.basis(j))));
    const Decomposition sub = decompose_local(part.ring);
    for (const Component& c : sub.components) {
      Component lifted{c.ring, R.zero(), {}, {}};
      auto up = [&](const RingElement& y) {
        RingElement x = R.zero();
        for (std::size_t t = 0; t < part.ring.dim(); ++t)
          x = R.add(x, R.scale(y.coeffs[t], part.basis_in_parent[t]));
        return x;
      };
      auto down = [&](const RingElement& y) {
        RingElement z = c.ring.zero();
        for (std::size_t t = 0; t < part.ring.dim(); ++t)
          z = c.ring.add(z, c.ring.scale(y.coeffs[t], c.project_basis[t]));
        return z;
      };
      lifted.idempotent = up(c.idempotent);
      for (const auto& b : c.basis_in_parent) lifted.basis_in_parent.push_back(up(b));
      for (const auto& p : proj) lifted.project_basis.push_back(down(p));
      out.components.push_back(std::move(lifted));
    }
  }
  return out;
}

}  // namespace ulat
