#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "ulat/error.hpp"

namespace ulat {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

struct TauBoundReport {
  int d = 0, k = 0;
  cpp_int m_bound;          // 11 * 22^k
  cpp_rational kazhdan;     // [(3d^2 - d - 2) + 36(k + 2)]^-1 * m_bound^-1
  cpp_rational weakened;    // [(2d^2 + 18k + 30) 22^(k+1)]^-1
  cpp_int word_length;      // (3d^2 - d - 2)/2 + 18(k + 2)
  std::optional<cpp_rational> be;
  std::optional<cpp_rational> shalom;  // 1 / (BE * 2^(2k+1))
};

inline std::string rational_string(const cpp_rational& q) {
  return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}

inline TauBoundReport tau_bound(int d, int k, std::optional<cpp_rational> be = std::nullopt) {
  if (d < 3) throw Error(Errc::BadDimension, "tau bound needs d >= 3");
  if (k < 0) throw Error(Errc::PreconditionFailed, "k must be non-negative");
  if (be && *be <= 0) throw Error(Errc::PreconditionFailed, "BE must be positive");
  const cpp_int dd = d, kk = k;
  TauBoundReport r;
  r.d = d;
  r.k = k;
  r.m_bound = 11 * boost::multiprecision::pow(cpp_int(22), static_cast<unsigned>(k));
  const cpp_int slots2 = 3 * dd * dd - dd - 2;
  r.kazhdan = cpp_rational(1, (slots2 + 36 * (kk + 2)) * r.m_bound);
  r.weakened = cpp_rational(1, (2 * dd * dd + 18 * kk + 30) * boost::multiprecision::pow(cpp_int(22), static_cast<unsigned>(k + 1)));
  r.word_length = slots2 / 2 + 18 * (kk + 2);
  if (be) {
    r.be = be;
    r.shalom = 1 / (*be * cpp_rational(boost::multiprecision::pow(cpp_int(2), static_cast<unsigned>(2 * k + 1))));
  }
  return r;
}

/// Parses "p", "p/q" or a plain decimal such as "11.5" into an exact rational.
inline cpp_rational parse_rational(const std::string& s) {
  try {
    const auto slash = s.find('/');
    if (slash != std::string::npos) return cpp_rational(cpp_int(s.substr(0, slash)), cpp_int(s.substr(slash + 1)));
    const auto dot = s.find('.');
    if (dot == std::string::npos) return cpp_rational(cpp_int(s));
    const std::string frac = s.substr(dot + 1);
    const cpp_int scale = boost::multiprecision::pow(cpp_int(10), static_cast<unsigned>(frac.size()));
    const std::string whole = s.substr(0, dot);
    const bool neg = !whole.empty() && whole[0] == '-';
    const cpp_int w = whole.empty() || whole == "-" ? cpp_int(0) : cpp_int(whole);
    const cpp_int f = frac.empty() ? cpp_int(0) : cpp_int(frac);
    return cpp_rational(w * scale + (neg ? -f : f), scale);
  } catch (const std::exception&) {
    throw Error(Errc::ParseError, "not a rational number: " + s);
  }
}

}  // namespace ulat
