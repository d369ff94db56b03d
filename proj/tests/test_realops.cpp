#include <gtest/gtest.h>

#include "gaussgap/realops.hpp"
#include "support/fuzz.hpp"
#include "support/oracles.hpp"

using namespace gaussgap;
using gaussgap::testing::Rng;

TEST(Realops, RealizeZeroPair) {
  EXPECT_EQ(realize(RealLinearPair::zero(3)), RMat::Zero(6, 6));
}

TEST(Realops, RealizeJ) {
  RMat expected(2, 2);
  expected << 0, 1, -1, 0;
  EXPECT_EQ(realize(RealLinearPair::symplectic(1)), expected);
  EXPECT_EQ(realize(RealLinearPair::symplectic(2)), symplectic_matrix(2));
}

TEST(Realops, RealizeConjugation) {
  const RMat r = realize(RealLinearPair::conjugation(2));
  RVec diag(4);
  diag << 1, 1, -1, -1;
  EXPECT_EQ(r, RMat(diag.asDiagonal()));
  // Acting on [Re z; Im z] gives [Re conj z; Im conj z].
  CVec z(2);
  z << cplx(0.3, -1.2), cplx(2.0, 0.7);
  EXPECT_LT((r * to_real(z) - to_real(z.conjugate())).norm(), 1e-15);
}

TEST(Realops, SymplecticFormIdentities) {
  const RMat j = symplectic_matrix(3);
  EXPECT_EQ(RMat(j.transpose()), RMat(-j));
  EXPECT_EQ(RMat(j * j), RMat(-RMat::Identity(6, 6)));
}

TEST(Realops, SharpAdjointExamples) {
  const auto id = RealLinearPair::identity(2);
  const auto ids = sharp_adjoint(id);
  EXPECT_EQ(ids.a1(), id.a1());
  EXPECT_EQ(ids.a2(), id.a2());
  EXPECT_EQ(realize(sharp_adjoint(RealLinearPair::symplectic(2))), RMat(-symplectic_matrix(2)));
}

TEST(Realops, PairExpExamples) {
  EXPECT_LT((pair_exp(RealLinearPair::symplectic(2), 0.0) - RMat::Identity(4, 4)).norm(), 1e-15);
  const RealLinearPair minus_id(CMat(-CMat::Identity(1, 1)), CMat::Zero(1, 1));
  EXPECT_LT((pair_exp(minus_id, 1.0) - std::exp(-1.0) * RMat::Identity(2, 2)).norm(), 1e-15);
  EXPECT_LT((pair_exp(minus_id, 0.5) - std::exp(-0.5) * RMat::Identity(2, 2)).norm(), 1e-15);
}

TEST(Realops, PairExpRejectsNonFiniteTime) {
  try {
    pair_exp(RealLinearPair::identity(1), std::nan(""));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonFinite);
  }
}

TEST(Realops, MismatchedBlocksRejected) {
  EXPECT_THROW(RealLinearPair(CMat::Zero(2, 2), CMat::Zero(3, 3)), Error);
  EXPECT_THROW(RealLinearPair::identity(2) * RealLinearPair::identity(3), Error);
}

TEST(RealopsProperty, RealizationMatchesAction) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Index d = 1 + trial % 4;
    const auto a = rng.pair(d);
    const CVec z = rng.cvec(d);
    EXPECT_LT((realize(a) * to_real(z) - to_real(a.apply(z))).norm(), 1e-12);
  }
}

TEST(RealopsProperty, RealizationIsAHomomorphism) {
  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const Index d = 1 + trial % 4;
    const auto a = rng.pair(d);
    const auto b = rng.pair(d);
    EXPECT_LT((realize(a * b) - realize(a) * realize(b)).norm(), 1e-12);
    EXPECT_LT((realize(a + b) - realize(a) - realize(b)).norm(), 1e-12);
    // Composition agrees with applying one after the other.
    const CVec z = rng.cvec(d);
    EXPECT_LT(((a * b).apply(z) - a.apply(b.apply(z))).norm(), 1e-12);
  }
}

TEST(RealopsProperty, SharpAdjointIsRealAdjoint) {
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const Index d = 1 + trial % 4;
    const auto p = rng.pair(d);
    const CVec z = rng.cvec(d), w = rng.cvec(d);
    const double lhs = oracle::inner(p.apply(z), w).real();
    const double rhs = oracle::inner(z, sharp_adjoint(p).apply(w)).real();
    EXPECT_NEAR(lhs, rhs, 1e-12 * (1.0 + std::abs(lhs)));
    EXPECT_LT((realize(sharp_adjoint(p)) - realize(p).transpose()).norm(), 1e-13);
  }
}

TEST(RealopsProperty, ScalarProductBridges) {
  Rng rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    const Index d = 1 + trial % 4;
    const auto a = rng.pair(d);
    const CVec z = rng.cvec(d), w = rng.cvec(d);
    const RVec x = to_real(z), y = to_real(w);
    const RMat r = realize(a);
    EXPECT_NEAR(oracle::inner(z, a.apply(w)).real(), x.dot(r * y), 1e-12);
    const cplx lhs = oracle::inner(z, a.apply(w)).real() + kI * oracle::inner(z, w).imag();
    const CMat rj = r.cast<cplx>() + kI * symplectic_matrix(d).cast<cplx>();
    const cplx rhs = x.cast<cplx>().dot(rj * y.cast<cplx>());
    EXPECT_LT(std::abs(lhs - rhs), 1e-12);
  }
}

TEST(RealopsProperty, RealizationIsInjective) {
  Rng rng(15);
  for (int trial = 0; trial < 50; ++trial) {
    const Index d = 1 + trial % 4;
    const auto a = rng.pair(d);
    const auto back = RealLinearPair::from_realization(realize(a));
    EXPECT_LT((back.a1() - a.a1()).norm(), 1e-13);
    EXPECT_LT((back.a2() - a.a2()).norm(), 1e-13);
    // A nonzero pair never realizes to zero.
    EXPECT_GT(realize(a).norm(), 0.0);
  }
}

TEST(RealopsProperty, PairExpSemigroup) {
  Rng rng(16);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = rng.pair(1 + trial % 3) * 0.5;
    const RMat lhs = pair_exp(a, 0.3) * pair_exp(a, 0.45);
    EXPECT_LT((lhs - pair_exp(a, 0.75)).norm(), 1e-12 * (1.0 + lhs.norm()));
  }
}
