#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ulat/error.hpp"
#include "ulat/finring/local.hpp"
#include "ulat/finring/radical.hpp"
#include "ulat/matgroup/matrix.hpp"

namespace ulat {

inline constexpr std::uint64_t kDefaultOrderCap = 2'000'000;

/// Elements of the group generated by `gens`, indexed in BFS order from Id,
/// with action[g][v] = index of elements[v] * gens[g].
struct GroupTable {
  std::vector<Matrix> elements;
  std::vector<std::vector<std::uint32_t>> action;

  std::size_t size() const { return elements.size(); }
};

namespace detail {

inline std::string matrix_key(const FiniteRing& R, const Matrix& m) {
  std::string key;
  key.reserve(m.e.size() * 4);
  for (const auto& x : m.e) {
    const auto idx = static_cast<std::uint32_t>(R.index_of(x));
    key.append(reinterpret_cast<const char*>(&idx), sizeof idx);
  }
  return key;
}

}  // namespace detail

inline GroupTable enumerate_group(const FiniteRing& R, std::size_t d, const std::vector<Matrix>& gens,
                                  std::uint64_t cap = kDefaultOrderCap) {
  GroupTable t;
  t.action.assign(gens.size(), {});
  std::unordered_map<std::string, std::uint32_t> index;
  auto intern = [&](Matrix m) {
    auto [it, fresh] = index.try_emplace(detail::matrix_key(R, m), static_cast<std::uint32_t>(t.elements.size()));
    if (fresh) {
      if (t.elements.size() >= cap)
        throw Error(Errc::OrderCap, "group order exceeds cap " + std::to_string(cap));
      t.elements.push_back(std::move(m));
    }
    return it->second;
  };
  intern(identity(R, d));
  for (std::size_t v = 0; v < t.elements.size(); ++v)
    for (std::size_t g = 0; g < gens.size(); ++g) {
      const std::uint32_t w = intern(mat_mul(R, t.elements[v], gens[g]));
      t.action[g].push_back(w);
    }
  return t;
}

/// |SL_d(R)| from the local decomposition: a local factor with maximal ideal
/// I and residue field F_q contributes |I|^(d^2-1) * |SL_d(F_q)|.
inline boost::multiprecision::cpp_int sl_order(const FiniteRing& R, std::size_t d) {
  using boost::multiprecision::cpp_int;
  cpp_int total = 1;
  for (const auto& c : decompose_local(R).components) {
    const LocalStructure L = local_structure(c.ring);
    const cpp_int q = L.residue_size;
    cpp_int part = boost::multiprecision::pow(cpp_int(L.maximal_ideal.size()),
                                              static_cast<unsigned>(d * d - 1));
    part *= boost::multiprecision::pow(q, static_cast<unsigned>(d * (d - 1) / 2));
    for (std::size_t i = 2; i <= d; ++i) part *= boost::multiprecision::pow(q, static_cast<unsigned>(i)) - 1;
    total *= part;
  }
  return total;
}

}  // namespace ulat
