#include <gtest/gtest.h>

#include "ulat/finring/builders.hpp"
#include "ulat/steinberg.hpp"

namespace {

using ulat::FiniteRing;
using ulat::Matrix;
using ulat::RingElement;
using ulat::StWord;

FiniteRing f4() { return ulat::make_quotient(2, {"x"}, {"x^2+x+1"}, {"1", "x"}); }

std::vector<RingElement> units(const FiniteRing& R) {
  std::vector<RingElement> u;
  R.for_each_element([&](const RingElement& a) {
    if (R.inverse(a)) u.push_back(a);
  });
  return u;
}

TEST(StReduce, Examples) {
  const FiniteRing z4 = ulat::make_zmod(4);
  EXPECT_TRUE(ulat::st_reduce(z4, {{1, 2, z4.from_int(1)}, {1, 2, z4.from_int(-1)}}).empty());
  const StWord r = ulat::st_reduce(z4, {{1, 2, z4.from_int(2)}, {1, 2, z4.from_int(3)}});
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].r, z4.from_int(1));
  // Cancellation exposes a further merge.
  const StWord r2 = ulat::st_reduce(
      z4, {{1, 2, z4.from_int(1)}, {2, 1, z4.from_int(1)}, {2, 1, z4.from_int(3)}, {1, 2, z4.from_int(1)}});
  ASSERT_EQ(r2.size(), 1u);
  EXPECT_EQ(r2[0].r, z4.from_int(2));
}

TEST(Phi, Examples) {
  const FiniteRing z9 = ulat::make_zmod(9);
  const RingElement u = z9.from_int(4), v = z9.from_int(7);
  EXPECT_EQ(ulat::phi(z9, {{1, 3, u}}, 3), ulat::elementary(z9, 3, 1, 3, u));
  EXPECT_EQ(ulat::phi(z9, {}, 3), ulat::identity(z9, 3));
  const StWord a{{1, 2, u}, {2, 3, v}, {1, 2, z9.neg(u)}, {2, 3, z9.neg(v)}};
  EXPECT_EQ(ulat::phi(z9, a, 3), ulat::elementary(z9, 3, 1, 3, z9.mul(u, v)));
  // Homomorphism on concatenation.
  const StWord b{{3, 1, v}, {2, 1, u}};
  EXPECT_EQ(ulat::phi(z9, ulat::st_concat(a, b), 3),
            ulat::mat_mul(z9, ulat::phi(z9, a, 3), ulat::phi(z9, b, 3)));
}

TEST(WH, Examples) {
  const FiniteRing z9 = ulat::make_zmod(9);
  const Matrix w = ulat::phi(z9, ulat::w_word(z9, 1, 2, z9.one()), 3);
  EXPECT_TRUE(z9.is_zero(w.at(0, 0)));
  EXPECT_TRUE(z9.is_one(w.at(0, 1)));
  EXPECT_EQ(w.at(1, 0), z9.from_int(-1));
  EXPECT_TRUE(z9.is_zero(w.at(1, 1)));
  EXPECT_TRUE(z9.is_one(w.at(2, 2)));

  Matrix diag = ulat::identity(z9, 3);
  diag.at(0, 0) = z9.from_int(2);
  diag.at(1, 1) = z9.from_int(5);
  EXPECT_EQ(ulat::phi(z9, ulat::h_word(z9, 1, 2, z9.from_int(2)), 3), diag);
  EXPECT_EQ(ulat::phi(z9, ulat::h_word(z9, 1, 2, z9.one()), 3), ulat::identity(z9, 3));
  EXPECT_THROW(ulat::h_word(z9, 1, 2, z9.from_int(3)), ulat::Error);

  // h(u) = diag(u, u^-1) for every unit, checked against matrix inverses.
  for (const auto& u : units(z9)) {
    Matrix m = ulat::identity(z9, 2);
    m.at(0, 0) = u;
    m.at(1, 1) = *z9.inverse(u);
    EXPECT_EQ(ulat::phi(z9, ulat::h_word(z9, 1, 2, u), 2), m);
  }
}

TEST(SymbolWord, Examples) {
  for (const FiniteRing& R : {ulat::make_zmod(8), ulat::make_zmod(9), f4()}) {
    EXPECT_TRUE(ulat::st_reduce(R, ulat::symbol_word(R, R.one(), R.one())).empty());
    for (const auto& u : units(R))
      for (const auto& v : units(R)) {
        const StWord w = ulat::symbol_word(R, u, v);
        EXPECT_EQ(w.size(), 18u);
        const StWord r = ulat::st_reduce(R, w);
        EXPECT_LE(r.size(), 13u);
        EXPECT_EQ(ulat::phi(R, w, 3), ulat::identity(R, 3));
        EXPECT_EQ(ulat::phi(R, r, 3), ulat::phi(R, w, 3));
      }
  }
  const FiniteRing z8 = ulat::make_zmod(8);
  EXPECT_EQ(ulat::st_reduce(z8, ulat::symbol_word(z8, z8.from_int(3), z8.from_int(5))).size(), 9u);
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      if (i != j) {
        const StWord w = ulat::symbol_word(z8, z8.from_int(3), z8.from_int(7), i, j);
        EXPECT_EQ(ulat::phi(z8, w, 3), ulat::identity(z8, 3));
      }
}

TEST(Relations, Examples) {
  EXPECT_TRUE(ulat::check_relations(ulat::make_zmod(6), 3, 20, 1).ok());
  EXPECT_TRUE(ulat::check_relations(f4(), 3, 20, 2).ok());
  const auto rep = ulat::check_relations(ulat::make_zmod(9), 4, 10, 3);
  EXPECT_TRUE(rep.ok());
  EXPECT_GT(rep.checked, 0u);
}

}  // namespace
