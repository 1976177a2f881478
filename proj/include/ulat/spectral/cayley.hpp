#pragma once

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ulat/error.hpp"
#include "ulat/matgroup/group.hpp"
#include "ulat/matgroup/matrix.hpp"

namespace ulat {

using boost::multiprecision::cpp_int;

/// Id +- e_ij for all i != j, then Id +- alpha e_ij for |i - j| = 1 and each
/// alpha. Kept as a multiset: in characteristic 2 the signs coincide.
inline std::vector<Matrix> generating_set(const FiniteRing& R, std::size_t d,
                                          const std::vector<RingElement>& alphas = {}) {
  if (d < 2) throw Error(Errc::BadDimension, "generating set needs d >= 2");
  std::vector<Matrix> out;
  const int n = static_cast<int>(d);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      if (i == j) continue;
      out.push_back(elementary(R, d, i, j, R.one()));
      out.push_back(elementary(R, d, i, j, R.neg(R.one())));
    }
  for (const auto& a : alphas)
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        if (i == j || (i - j != 1 && j - i != 1)) continue;
        out.push_back(elementary(R, d, i, j, a));
        out.push_back(elementary(R, d, i, j, R.neg(a)));
      }
  return out;
}

/// Regular multigraph given by neighbour lists: nbr[v * degree + g].
struct RegularGraph {
  std::size_t vertices = 0, degree = 0;
  std::vector<std::uint32_t> nbr;

  std::uint32_t at(std::size_t v, std::size_t g) const { return nbr[v * degree + g]; }
};

struct CayleyGraph {
  GroupTable table;
  RegularGraph graph;
};

/// Right Cayley graph of the subgroup of SL_d(R) generated by `gens`.
/// Throws Disconnected when that subgroup is smaller than SL_d(R).
inline CayleyGraph build_cayley(const FiniteRing& R, std::size_t d, const std::vector<Matrix>& gens,
                                std::uint64_t cap = kDefaultOrderCap) {
  const cpp_int expected = sl_order(R, d);
  if (expected > cap) throw Error(Errc::OrderCap, "SL_d(R) has " + expected.str() + " elements, cap is " + std::to_string(cap));
  CayleyGraph c{enumerate_group(R, d, gens, cap), {}};
  if (cpp_int(c.table.size()) != expected)
    throw Error(Errc::Disconnected, "generators reach " + std::to_string(c.table.size()) + " of " + expected.str() +
                                        " elements");
  c.graph.vertices = c.table.size();
  c.graph.degree = gens.size();
  c.graph.nbr.resize(c.graph.vertices * c.graph.degree);
  for (std::size_t v = 0; v < c.graph.vertices; ++v)
    for (std::size_t g = 0; g < gens.size(); ++g) c.graph.nbr[v * gens.size() + g] = c.table.action[g][v];
  return c;
}

}  // namespace ulat
