#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "ulat/error.hpp"
#include "ulat/finring/ring.hpp"
#include "ulat/finring/subgroup.hpp"

namespace ulat {

inline FiniteRing make_zmod(std::int64_t n, std::uint64_t size_cap = kDefaultSizeCap) {
  if (n < 1) throw Error(Errc::InvalidRing, "Z/n needs n >= 1");
  return FiniteRing({n}, {{Coeffs{1 % n}}}, Coeffs{1 % n}, "Z/" + std::to_string(n), size_cap);
}

/// Direct product; the basis is the concatenation of the factors' bases.
inline FiniteRing make_product(const std::vector<FiniteRing>& factors,
                               std::uint64_t size_cap = kDefaultSizeCap) {
  if (factors.empty()) throw Error(Errc::InvalidRing, "product of no rings");
  std::vector<std::int64_t> orders;
  std::string label;
  for (const auto& f : factors) {
    orders.insert(orders.end(), f.orders().begin(), f.orders().end());
    label += (label.empty() ? "" : " x ") + f.label();
  }
  const std::size_t b = orders.size();
  std::vector<std::vector<Coeffs>> mul(b, std::vector<Coeffs>(b, Coeffs(b, 0)));
  Coeffs one(b, 0);
  std::size_t off = 0;
  for (const auto& f : factors) {
    for (std::size_t i = 0; i < f.dim(); ++i) {
      one[off + i] = f.one().coeffs[i];
      for (std::size_t j = 0; j < f.dim(); ++j)
        for (std::size_t k = 0; k < f.dim(); ++k)
          mul[off + i][off + j][off + k] = f.product_of_basis(i, j)[k];
    }
    off += f.dim();
  }
  return FiniteRing(std::move(orders), std::move(mul), std::move(one), label, size_cap);
}

// ---------------------------------------------------------------------------
// Polynomial quotients (Z/n)[x_1..x_k] / (relations)

using Exponents = std::vector<int>;
using Polynomial = std::map<Exponents, std::int64_t>;

namespace detail {

class PolyParser {
 public:
  PolyParser(std::string text, const std::vector<std::string>& vars, std::int64_t n)
      : s_(std::move(text)), vars_(vars), n_(n) {}

  Polynomial parse() {
    Polynomial p;
    skip();
    if (pos_ == s_.size()) fail("empty polynomial");
    bool first = true;
    while (pos_ < s_.size()) {
      std::int64_t sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1 : 1;
        ++pos_;
        skip();
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      auto [coef, exps] = term();
      auto& slot = p[exps];
      slot = mod(slot + sign * coef, n_);
      first = false;
      skip();
    }
    std::erase_if(p, [](const auto& kv) { return kv.second == 0; });
    return p;
  }

 private:
  std::pair<std::int64_t, Exponents> term() {
    std::int64_t coef = 1;
    Exponents e(vars_.size(), 0);
    while (true) {
      skip();
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        coef = mulmod(coef, mod(integer(), n_), n_);
      } else if (std::isalpha(static_cast<unsigned char>(peek()))) {
        std::string name;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
          name += s_[pos_++];
        auto it = std::find(vars_.begin(), vars_.end(), name);
        if (it == vars_.end()) fail("unknown variable '" + name + "'");
        int power = 1;
        skip();
        if (peek() == '^') {
          ++pos_;
          skip();
          power = static_cast<int>(integer());
        }
        e[static_cast<std::size_t>(it - vars_.begin())] += power;
      } else {
        fail("expected a coefficient or variable");
      }
      skip();
      if (peek() != '*') break;
      ++pos_;
    }
    return {coef, e};
  }

  std::int64_t integer() {
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected an integer");
    std::int64_t v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = v * 10 + (s_[pos_++] - '0');
      if (v > (std::int64_t{1} << 40)) fail("integer too large");
    }
    return v;
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(Errc::ParseError, what + " in \"" + s_ + "\" at offset " + std::to_string(pos_));
  }

  std::string s_;
  const std::vector<std::string>& vars_;
  std::int64_t n_;
  std::size_t pos_ = 0;
};

inline int degree(const Exponents& e) { return std::accumulate(e.begin(), e.end(), 0); }

inline void monomials_up_to(std::size_t nvars, int deg, Exponents& cur, std::size_t var,
                            std::vector<Exponents>& out) {
  if (var == nvars) {
    out.push_back(cur);
    return;
  }
  for (int p = 0; p <= deg; ++p) {
    cur[var] = p;
    monomials_up_to(nvars, deg - p, cur, var + 1, out);
  }
  cur[var] = 0;
}

}  // namespace detail

inline Polynomial parse_polynomial(const std::string& text, const std::vector<std::string>& vars,
                                   std::int64_t n) {
  return detail::PolyParser(text, vars, n).parse();
}

/// (Z/n)[vars]/(relations) on a declared monomial spanning set.
///
/// All multiples relation*monomial up to a degree bound are echelonised with
/// the undeclared monomials eliminated first; every product of declared
/// monomials (and every variable times a declared monomial) must then reduce
/// into the declared span, otherwise the presentation is SpanIncomplete.
inline FiniteRing make_quotient(std::int64_t n, const std::vector<std::string>& vars,
                                const std::vector<std::string>& relations,
                                const std::vector<std::string>& monomials,
                                std::uint64_t size_cap = kDefaultSizeCap) {
  if (n < 1) throw Error(Errc::InvalidRing, "coefficient ring Z/n needs n >= 1");
  const std::size_t k = vars.size();
  std::vector<Polynomial> rels;
  for (const auto& r : relations) rels.push_back(parse_polynomial(r, vars, n));
  std::vector<Exponents> span;
  for (const auto& m : monomials) {
    Polynomial p = m == "1" ? Polynomial{{Exponents(k, 0), 1}} : parse_polynomial(m, vars, n);
    if (p.size() != 1 || p.begin()->second != 1)
      throw Error(Errc::ParseError, "spanning set entry \"" + m + "\" is not a monomial");
    if (std::find(span.begin(), span.end(), p.begin()->first) != span.end())
      throw Error(Errc::ParseError, "duplicate spanning monomial \"" + m + "\"");
    span.push_back(p.begin()->first);
  }
  const Exponents unit_exp(k, 0);
  const auto one_it = std::find(span.begin(), span.end(), unit_exp);
  if (one_it == span.end())
    throw Error(Errc::NotUnital, "spanning set must contain the monomial 1");

  int span_deg = 0, rel_deg = 0;
  for (const auto& e : span) span_deg = std::max(span_deg, detail::degree(e));
  for (const auto& p : rels)
    for (const auto& [e, c] : p) rel_deg = std::max(rel_deg, detail::degree(e));
  const int bound = std::max(2 * span_deg, span_deg + 1) + rel_deg;

  std::vector<Exponents> universe;
  Exponents cur(k, 0);
  detail::monomials_up_to(k, bound, cur, 0, universe);
  if (universe.size() > 4000)
    throw Error(Errc::SpanIncomplete, "monomial universe too large for the declared span");

  // Column order: undeclared monomials (highest degree first), then the span.
  std::vector<Exponents> cols;
  for (const auto& e : universe)
    if (std::find(span.begin(), span.end(), e) == span.end()) cols.push_back(e);
  std::stable_sort(cols.begin(), cols.end(), [](const Exponents& a, const Exponents& b) {
    return detail::degree(a) > detail::degree(b);
  });
  const std::size_t free_cols = cols.size();
  cols.insert(cols.end(), span.begin(), span.end());
  std::map<Exponents, std::size_t> col_of;
  for (std::size_t i = 0; i < cols.size(); ++i) col_of[cols[i]] = i;

  AdditiveSubgroup echelon(std::vector<std::int64_t>(cols.size(), n));
  for (const auto& p : rels) {
    int d = 0;
    for (const auto& [e, c] : p) d = std::max(d, detail::degree(e));
    for (const auto& mu : universe) {
      if (d + detail::degree(mu) > bound) continue;
      Coeffs v(cols.size(), 0);
      for (const auto& [e, c] : p) {
        Exponents prod(k);
        for (std::size_t i = 0; i < k; ++i) prod[i] = e[i] + mu[i];
        v[col_of.at(prod)] = detail::mod(v[col_of.at(prod)] + c, n);
      }
      echelon.insert(v);
    }
  }

  const std::size_t s = span.size();
  auto normal_form = [&](const Exponents& e) {
    Coeffs v(cols.size(), 0);
    v[col_of.at(e)] = 1 % n;
    const Coeffs r = echelon.remainder(v);
    for (std::size_t i = 0; i < free_cols; ++i)
      if (r[i] != 0) return std::optional<Coeffs>{};
    return std::optional<Coeffs>{Coeffs(r.begin() + static_cast<std::ptrdiff_t>(free_cols), r.end())};
  };
  auto times = [&](const Exponents& a, const Exponents& b) {
    Exponents e(k);
    for (std::size_t i = 0; i < k; ++i) e[i] = a[i] + b[i];
    return e;
  };

  std::vector<std::vector<Coeffs>> span_products(s, std::vector<Coeffs>(s));
  for (std::size_t a = 0; a < s; ++a)
    for (std::size_t b = 0; b < s; ++b) {
      auto nf = normal_form(times(span[a], span[b]));
      if (!nf) throw Error(Errc::SpanIncomplete, "product of spanning monomials leaves the span");
      span_products[a][b] = *nf;
    }
  std::vector<std::vector<Coeffs>> var_products(k, std::vector<Coeffs>(s));
  for (std::size_t v = 0; v < k; ++v) {
    Exponents xv(k, 0);
    xv[v] = 1;
    for (std::size_t a = 0; a < s; ++a) {
      auto nf = normal_form(times(xv, span[a]));
      if (!nf) throw Error(Errc::SpanIncomplete, "variable times spanning monomial leaves the span");
      var_products[v][a] = *nf;
    }
  }

  // Additive relations among the span, then an explicit cyclic basis.
  std::vector<Coeffs> kernel;
  for (std::size_t i = free_cols; i < cols.size(); ++i)
    if (!echelon.row_empty(i))
      kernel.emplace_back(echelon.row(i).begin() + static_cast<std::ptrdiff_t>(free_cols),
                          echelon.row(i).end());
  const CyclicDecomposition cd = cyclic_decomposition(kernel, s, n);
  if (cd.orders.empty()) throw Error(Errc::NotUnital, "quotient is the zero ring");
  const std::size_t b = cd.orders.size();

  auto span_mul = [&](const Coeffs& x, const Coeffs& y) {
    Coeffs out(s, 0);
    for (std::size_t a = 0; a < s; ++a) {
      if (x[a] == 0) continue;
      for (std::size_t c = 0; c < s; ++c) {
        if (y[c] == 0) continue;
        const std::int64_t w = detail::mulmod(x[a], y[c], n);
        for (std::size_t t = 0; t < s; ++t)
          out[t] = detail::mod(out[t] + detail::mulmod(w, span_products[a][c][t], n), n);
      }
    }
    return out;
  };

  std::vector<std::vector<Coeffs>> mul(b, std::vector<Coeffs>(b));
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t j = 0; j < b; ++j)
      mul[i][j] = cd.to_coordinates(span_mul(cd.generators[i], cd.generators[j]));
  Coeffs unit(s, 0);
  unit[static_cast<std::size_t>(one_it - span.begin())] = 1;

  std::string label = "(Z/" + std::to_string(n) + ")[";
  for (std::size_t i = 0; i < k; ++i) label += (i ? "," : "") + vars[i];
  label += "]/(";
  for (std::size_t i = 0; i < relations.size(); ++i) label += (i ? ", " : "") + relations[i];
  label += ")";

  try {
    FiniteRing ring(cd.orders, mul, cd.to_coordinates(unit), label, size_cap);
    // Multiplying by a variable must agree with the reduced monomial table.
    for (std::size_t v = 0; v < k; ++v) {
      Exponents xv(k, 0);
      xv[v] = 1;
      auto nf = normal_form(xv);
      if (!nf) throw Error(Errc::SpanIncomplete, "variable is not in the declared span");
      const RingElement xval = ring.reduce(cd.to_coordinates(*nf));
      for (std::size_t a = 0; a < s; ++a) {
        Coeffs ea(s, 0);
        ea[a] = 1;
        const RingElement lhs = ring.mul(xval, ring.reduce(cd.to_coordinates(ea)));
        if (lhs != ring.reduce(cd.to_coordinates(var_products[v][a])))
          throw Error(Errc::SpanIncomplete, "reduction is inconsistent; enlarge the spanning set");
      }
    }
    return ring;
  } catch (const Error& e) {
    if (e.code() == Errc::InvalidRing)
      throw Error(Errc::SpanIncomplete, std::string("reduced table is not a ring: ") + e.what());
    throw;
  }
}

// ---------------------------------------------------------------------------
// Ideals with their own identity (components e*R of a ring)

/// The ring structure carried by an ideal H of R that has an identity element
/// e (H = e*R for an idempotent e), with maps between H and the new basis.
struct IdealRing {
  FiniteRing ring;
  std::vector<RingElement> basis_in_parent;  ///< new basis vectors as elements of R
  AdditiveSubgroup ideal;
  CyclicDecomposition cyclic;
  std::vector<std::size_t> pivot_cols;

  /// Coordinates in `ring` of an element x of the ideal.
  RingElement to_component(const RingElement& x) const {
    const auto c = ideal.coordinates(x.coeffs);
    if (!c) throw Error(Errc::NotInIdeal, "element is not in the component ideal");
    Coeffs packed(pivot_cols.size());
    for (std::size_t t = 0; t < pivot_cols.size(); ++t) packed[t] = (*c)[pivot_cols[t]];
    return ring.reduce(cyclic.to_coordinates(packed));
  }
};

inline IdealRing ring_on_ideal(const FiniteRing& R, const AdditiveSubgroup& H,
                               const RingElement& identity, const std::string& label) {
  const auto pcols = H.pivot_columns();
  const std::size_t h = pcols.size();
  std::int64_t exponent = 1;
  for (auto m : R.orders()) exponent = std::lcm(exponent, m);

  std::vector<Coeffs> rels;
  for (std::size_t t = 0; t < h; ++t) {
    const std::size_t i = pcols[t];
    const std::int64_t mult = R.orders()[i] / H.pivots()[i];
    Coeffs v = H.row(i);
    for (auto& c : v) c = detail::mulmod(mult, c, exponent);
    const auto c = H.coordinates(v);
    Coeffs rel(h, 0);
    rel[t] = mult;
    for (std::size_t u = 0; u < h; ++u) rel[u] = detail::mod(rel[u] - (*c)[pcols[u]], exponent);
    rels.push_back(std::move(rel));
  }
  CyclicDecomposition cd = cyclic_decomposition(rels, h, exponent);

  std::vector<RingElement> basis;
  for (const auto& g : cd.generators) {
    RingElement x = R.zero();
    for (std::size_t t = 0; t < h; ++t) x = R.add(x, R.scale(g[t], RingElement(H.row(pcols[t]))));
    basis.push_back(std::move(x));
  }
  auto to_coords = [&](const RingElement& x) {
    const auto c = H.coordinates(x.coeffs);
    if (!c) throw Error(Errc::NotInIdeal, "product left the ideal");
    Coeffs packed(h);
    for (std::size_t t = 0; t < h; ++t) packed[t] = (*c)[pcols[t]];
    return cd.to_coordinates(packed);
  };
  const std::size_t b = basis.size();
  std::vector<std::vector<Coeffs>> mul(b, std::vector<Coeffs>(b));
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t j = 0; j < b; ++j) mul[i][j] = to_coords(R.mul(basis[i], basis[j]));
  FiniteRing ring(cd.orders, mul, to_coords(identity), label);
  return IdealRing{std::move(ring), std::move(basis), H, std::move(cd), pcols};
}

}  // namespace ulat
