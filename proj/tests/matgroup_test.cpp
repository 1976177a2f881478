#include <gtest/gtest.h>

#include <random>

#include "ulat/finring/builders.hpp"
#include "ulat/matgroup/factor.hpp"
#include "ulat/matgroup/group.hpp"

namespace {

using ulat::Coeffs;
using ulat::FiniteRing;
using ulat::Matrix;
using ulat::RingElement;

Matrix from_ints(const FiniteRing& R, std::size_t d, std::vector<std::int64_t> v) {
  Matrix m{d, {}};
  for (auto x : v) m.e.push_back(R.from_int(x));
  return m;
}

std::vector<Matrix> unit_elementaries(const FiniteRing& R, std::size_t d) {
  std::vector<Matrix> g;
  for (int i = 1; i <= static_cast<int>(d); ++i)
    for (int j = 1; j <= static_cast<int>(d); ++j)
      if (i != j) {
        g.push_back(ulat::elementary(R, d, i, j, R.one()));
        g.push_back(ulat::elementary(R, d, i, j, R.neg(R.one())));
      }
  return g;
}

// All d x d matrices over R with determinant 1 (small cases only).
std::vector<Matrix> all_sl(const FiniteRing& R, std::size_t d) {
  std::vector<Matrix> out;
  const std::size_t n = d * d;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= R.size();
  for (std::uint64_t code = 0; code < total; ++code) {
    Matrix m{d, {}};
    std::uint64_t c = code;
    for (std::size_t i = 0; i < n; ++i) {
      m.e.push_back(R.element_at(c % R.size()));
      c /= R.size();
    }
    if (R.is_one(ulat::det(R, m))) out.push_back(std::move(m));
  }
  return out;
}

TEST(Det, Examples) {
  const FiniteRing z6 = ulat::make_zmod(6), z9 = ulat::make_zmod(9);
  EXPECT_TRUE(z6.is_one(ulat::det(z6, ulat::identity(z6, 3))));
  EXPECT_EQ(ulat::det(z9, from_ints(z9, 3, {2, 0, 0, 0, 5, 0, 0, 0, 1})), z9.from_int(1));
  EXPECT_EQ(ulat::det(z9, ulat::elementary(z9, 3, 1, 2, z9.from_int(3))), z9.one());
}

TEST(Det, BerkowitzAgreesWithCofactorExpansion) {
  std::mt19937_64 rng(7);
  for (const FiniteRing& R : {ulat::make_zmod(12), ulat::make_zmod(27),
                              ulat::make_quotient(4, {"t"}, {"t^2", "2*t"}, {"1", "t"})}) {
    for (std::size_t d : {2u, 3u, 4u, 5u, 6u}) {
      for (int trial = 0; trial < 10; ++trial) {
        Matrix m = ulat::zero_matrix(R, d);
        for (auto& x : m.e) x = R.element_at(rng() % R.size());
        std::vector<std::size_t> cols(d);
        for (std::size_t i = 0; i < d; ++i) cols[i] = i;
        EXPECT_EQ(ulat::detail::det_berkowitz(R, m), ulat::detail::det_laplace(R, m, cols, 0));
      }
    }
  }
}

TEST(Schedule, Lengths) {
  EXPECT_EQ(ulat::schedule(2).slots.size(), 4u);
  const auto s3 = ulat::schedule(3);
  EXPECT_EQ(s3.slots.size(), 11u);
  EXPECT_EQ(std::count_if(s3.slots.begin(), s3.slots.end(), [](auto& s) { return s.stage == 3; }), 7);
  EXPECT_EQ(std::count_if(s3.slots.begin(), s3.slots.end(), [](auto& s) { return s.stage == 2; }), 4);
  EXPECT_EQ(ulat::schedule(5).slots.size(), static_cast<std::size_t>((3 * 25 - 5 - 2) / 2));
  for (std::size_t d = 2; d <= 10; ++d) EXPECT_EQ(ulat::schedule(d).slots.size(), ulat::schedule_length(d));
}

TEST(FactorLocal, Examples) {
  const FiniteRing z8 = ulat::make_zmod(8);
  const auto w0 = ulat::factor_local(z8, ulat::identity(z8, 3));
  EXPECT_EQ(w0.nonzero_length(), 0u);
  EXPECT_TRUE(ulat::verify_word(z8, w0, ulat::identity(z8, 3)));

  const Matrix m = ulat::elementary(z8, 3, 1, 3, z8.from_int(2));
  const auto w1 = ulat::factor_local(z8, m);
  EXPECT_LE(w1.nonzero_length(), 11u);
  EXPECT_EQ(ulat::replay(z8, w1, 3), m);

  const FiniteRing z5 = ulat::make_zmod(5);
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    const Matrix r = ulat::random_sl(z5, 3, rng);
    const auto w = ulat::factor_local(z5, r);
    EXPECT_LE(w.nonzero_length(), 11u);
    EXPECT_TRUE(ulat::verify_word(z5, w, r));
  }
}

TEST(FactorLocal, Errors) {
  const FiniteRing z8 = ulat::make_zmod(8);
  try {
    ulat::factor_local(z8, from_ints(z8, 2, {3, 0, 0, 1}));
    FAIL();
  } catch (const ulat::Error& e) {
    EXPECT_EQ(e.code(), ulat::Errc::NotSL);
  }
  // Over Z/6 the row (2, 3) is unimodular but has no unit entry.
  const FiniteRing z6 = ulat::make_zmod(6);
  try {
    ulat::factor_local(z6, from_ints(z6, 2, {2, 3, 1, 2}));
    FAIL();
  } catch (const ulat::Error& e) {
    EXPECT_EQ(e.code(), ulat::Errc::NotLocal);
  }
}

TEST(Factor, ProductRingRecombination) {
  const FiniteRing z6 = ulat::make_zmod(6);
  const Matrix m = from_ints(z6, 3, {5, 0, 0, 0, 5, 0, 0, 0, 1});
  ulat::SlFactorizer f(z6);
  const auto w = f.factor(m);
  EXPECT_TRUE(ulat::verify_word(z6, w, m));
  EXPECT_LE(w.nonzero_length(), 11u);
  // Component-wise agreement with the local factorizations.
  const auto& dec = f.decomposition();
  for (std::size_t c = 0; c < dec.components.size(); ++c) {
    Matrix p{3, {}};
    for (const auto& x : m.e) p.e.push_back(dec.project(z6, c, x));
    const auto wl = ulat::factor_local(dec.components[c].ring, p);
    for (std::size_t k = 0; k < w.factors.size(); ++k)
      EXPECT_EQ(dec.project(z6, c, w.factors[k].r), wl.factors[k].r);
  }
  // The (2,3) matrix that defeats a single local pass factors through CRT.
  const Matrix hard = from_ints(z6, 2, {2, 3, 1, 2});
  EXPECT_TRUE(ulat::verify_word(z6, f.factor(hard), hard));

  const FiniteRing z12 = ulat::make_zmod(12);
  const auto wid = ulat::factor(z12, ulat::identity(z12, 4));
  EXPECT_EQ(wid.nonzero_length(), 0u);
  EXPECT_EQ(wid.bound, 21u);
}

TEST(Factor, ExhaustiveSL2Z4) {
  const FiniteRing z4 = ulat::make_zmod(4);
  const auto all = all_sl(z4, 2);
  EXPECT_EQ(all.size(), 48u);
  ulat::SlFactorizer f(z4);
  for (const auto& m : all) {
    const auto w = f.factor(m);
    EXPECT_LE(w.nonzero_length(), 4u);
    EXPECT_TRUE(ulat::verify_word(z4, w, m));
  }
  EXPECT_EQ(ulat::enumerate_group(z4, 2, unit_elementaries(z4, 2)).size(), 48u);
}

TEST(Factor, ScheduleIsInputIndependent) {
  const FiniteRing z9 = ulat::make_zmod(9);
  std::mt19937_64 rng(3);
  const auto s = ulat::schedule(4);
  ulat::SlFactorizer f(z9);
  for (int t = 0; t < 20; ++t) {
    const auto w = f.factor(ulat::random_sl(z9, 4, rng));
    ASSERT_EQ(w.factors.size(), s.slots.size());
    for (std::size_t k = 0; k < s.slots.size(); ++k) {
      EXPECT_EQ(w.factors[k].side, s.slots[k].side);
      EXPECT_EQ(w.factors[k].i, s.slots[k].i);
      EXPECT_EQ(w.factors[k].j, s.slots[k].j);
    }
    const auto counts = ulat::stage_counts(w, s);
    for (std::size_t k = 0; k < counts.size(); ++k) EXPECT_LE(counts[k], 3 * (4 - k) - 2);
  }
}

TEST(Factor, LargerDimensionUsesBerkowitz) {
  const FiniteRing z10 = ulat::make_zmod(10);
  std::mt19937_64 rng(5);
  ulat::SlFactorizer f(z10);
  for (int t = 0; t < 5; ++t) {
    const Matrix m = ulat::random_sl(z10, 6, rng);
    const auto w = f.factor(m);
    EXPECT_TRUE(ulat::verify_word(z10, w, m));
    EXPECT_LE(w.nonzero_length(), ulat::schedule_length(6));
  }
}

TEST(VerifyWord, RejectsPerturbation) {
  const FiniteRing z5 = ulat::make_zmod(5);
  std::mt19937_64 rng(2);
  const Matrix m = ulat::random_sl(z5, 3, rng);
  auto w = ulat::factor(z5, m);
  ASSERT_TRUE(ulat::verify_word(z5, w, m));
  for (std::size_t k = 0; k < w.factors.size(); ++k) {
    auto bad = w;
    bad.factors[k].r = z5.add(bad.factors[k].r, z5.one());
    EXPECT_FALSE(ulat::verify_word(z5, bad, m)) << "slot " << k;
  }
  auto swapped = w;
  swapped.factors[0].side = ulat::Side::Left;
  EXPECT_FALSE(ulat::verify_word(z5, swapped, m));
}

TEST(EnumerateGroup, OrdersMatchFormula) {
  struct Case {
    std::int64_t n;
    std::size_t d;
    std::uint64_t order;
  };
  for (const Case& c : {Case{2, 2, 6}, Case{2, 3, 168}, Case{4, 2, 48}, Case{3, 2, 24}, Case{6, 2, 144}}) {
    const FiniteRing R = ulat::make_zmod(c.n);
    const auto t = ulat::enumerate_group(R, c.d, unit_elementaries(R, c.d));
    EXPECT_EQ(t.size(), c.order);
    EXPECT_EQ(ulat::sl_order(R, c.d), c.order);
    for (const auto& row : t.action) EXPECT_EQ(row.size(), t.size());
  }
  // Elementary matrices reach exactly the determinant-one matrices.
  const FiniteRing z3 = ulat::make_zmod(3);
  EXPECT_EQ(all_sl(z3, 2).size(), 24u);
  const FiniteRing z2 = ulat::make_zmod(2);
  EXPECT_THROW(ulat::enumerate_group(z2, 3, unit_elementaries(z2, 3), 100), ulat::Error);
}

}  // namespace
