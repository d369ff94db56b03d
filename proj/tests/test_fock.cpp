#include <gtest/gtest.h>

#include "gaussgap/fock_oracle.hpp"
#include "support/fuzz.hpp"

using namespace gaussgap;
using namespace gaussgap::fock;

namespace {

CVec scalar(cplx z) {
  CVec v(1);
  v << z;
  return v;
}

CMat vacuum(const TruncatedSpace& sp) {
  CMat rho = CMat::Zero(sp.dim, sp.dim);
  rho(0, 0) = 1.0;
  return rho;
}

}  // namespace

TEST(Fock, AnnihilationPattern) {
  const auto sp = build_space(1, 2);
  CMat a(3, 3);
  a << 0, 1, 0, 0, 0, std::sqrt(2.0), 0, 0, 0;
  EXPECT_LT((sp.a[0] - a).norm(), 1e-15);
  const CMat comm = sp.a[0] * sp.adag[0] - sp.adag[0] * sp.a[0];
  // [a, a^+] = 1 away from the top occupation.
  EXPECT_LT((comm.topLeftCorner(2, 2) - CMat::Identity(2, 2)).norm(), 1e-14);
}

TEST(Fock, TwoModeSpace) {
  const auto sp = build_space(2, 3);
  EXPECT_EQ(sp.dim, 16);
  EXPECT_LT((sp.a[0] * sp.a[1] - sp.a[1] * sp.a[0]).norm(), 1e-14);
  EXPECT_LT((sp.a[0] * sp.adag[1] - sp.adag[1] * sp.a[0]).norm(), 1e-14);
  EXPECT_THROW(build_space(3, 20), Error);
}

TEST(Fock, SuperoperatorMatchesDirectActionAndPreservesTrace) {
  GklsModel m = one_dim_model(3, 1, 2, 1);
  m.zeta(0) = cplx(0.3, 0.1);
  const auto sp = build_space(1, 7);
  const auto ops = build_operators(m, sp);
  const auto s = build_superoperator(ops);
  gaussgap::testing::Rng rng(71);
  const CMat x = rng.cmat(sp.dim, sp.dim);
  EXPECT_LT((s.predual * vec(x) - vec(apply_predual(ops, x))).norm(), 1e-11);
  EXPECT_LT((s.heisenberg * vec(x) - vec(apply_heisenberg(ops, x))).norm(), 1e-11);
  // Adjoint pairing tr(L_*(rho) x) = tr(rho L(x)).
  const CMat rho = rng.cmat(sp.dim, sp.dim);
  EXPECT_LT(std::abs((apply_predual(ops, rho) * x).trace() - (rho * apply_heisenberg(ops, x)).trace()),
            1e-10);
  // Trace preservation: vec(I) is a left null vector of the predual.
  const CVec id = vec(CMat::Identity(sp.dim, sp.dim));
  EXPECT_LT((id.transpose() * s.predual).norm(), 1e-10);
}

TEST(Fock, ModelAStationaryIsThermal) {
  const auto sp = build_space(1, 25);
  const auto model = one_dim_model(3, 1, 0, 0);
  const auto rho = stationary_density(build_superoperator(build_operators(model, sp)), sp.dim);
  RVec nbar(1);
  nbar << 0.5;
  EXPECT_LT((rho - thermal_density(sp, nbar)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_NEAR(rho(1, 1).real() / rho(0, 0).real(), 1.0 / 3.0, 1e-10);
}

TEST(Fock, ModelBMoments) {
  const auto model = one_dim_model(3, 1, 2, 1);
  const auto dd = build_drift_diffusion(model);
  const auto st = solve_stationary(dd, model.zeta);
  double prev = 1e9;
  for (Index n : {15, 25}) {
    const auto sp = build_space(1, n);
    const auto ops = build_operators(model, sp);
    const auto rho = stationary_density(build_superoperator(ops), sp.dim);
    const auto [mu, cov] = moments(sp, rho);
    const double err = (cov - st.s2d).norm();
    EXPECT_LT(mu.norm(), 1e-8);
    EXPECT_LE(err, prev);
    prev = err;
    // Stationarity of the exact Gaussian state restricted to the cut-off space.
    EXPECT_LT(leakage(sp, apply_predual(ops, rho)), 1e-2);
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(Fock, ModelCDeterminantFromMoments) {
  const auto model = one_dim_model(2, 0, 2, 1);
  const auto sp = build_space(1, 40);
  const auto rho = stationary_density(build_superoperator(build_operators(model, sp)), sp.dim);
  const auto [mu, cov] = moments(sp, rho);
  EXPECT_NEAR(cov.determinant() - 1.0, 0.25, 1e-6);
}

TEST(Fock, CharacteristicFunctionExamples) {
  const auto sp = build_space(1, 40);
  EXPECT_NEAR(std::abs(oracle_char_fn(sp, vacuum(sp), scalar(1.0)) - std::exp(-0.5)), 0.0, 1e-8);
  RVec nbar(1);
  nbar << 0.5;
  const CMat th = thermal_density(sp, nbar);
  EXPECT_NEAR(std::abs(oracle_char_fn(sp, th, scalar(1.0)) - std::exp(-1.0)), 0.0, 1e-6);
  EXPECT_NEAR(std::abs(oracle_char_fn(sp, th, scalar(0.0)) - 1.0), 0.0, 1e-12);
}

TEST(Fock, CharacteristicFunctionGrid) {
  const auto sp = build_space(1, 40);
  for (const auto& model : {one_dim_model(3, 1, 0, 0), one_dim_model(3, 1, 2, 1)}) {
    const auto st = solve_stationary(build_drift_diffusion(model), model.zeta);
    const GaussianStateParams gp{st.mu, st.s2d};
    const auto rho = stationary_density(build_superoperator(build_operators(model, sp)), sp.dim);
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) {
        const CVec z = scalar(cplx(-1.0 + 0.5 * i, -1.0 + 0.5 * j));
        EXPECT_LT(std::abs(oracle_char_fn(sp, rho, z) - char_fn(gp, z)), 1e-6);
      }
    }
  }
}

TEST(Fock, KmsTraceExamples) {
  const auto sp = build_space(1, 40);
  RVec nbar(1);
  nbar << 0.5;
  const CMat rho = thermal_density(sp, nbar);
  const auto one = scalar(1.0);
  const auto kt = oracle_kms_trace(sp, rho, one, one);
  EXPECT_TRUE(kt.diagonal_density);
  const double expected = std::exp(-(2.0 + std::sqrt(3.0)));
  EXPECT_NEAR(kt.value.real(), expected, 1e-6 * expected);
  const auto st = solve_stationary(build_drift_diffusion(one_dim_model(3, 1, 0, 0)), CVec::Zero(1));
  EXPECT_NEAR(kt.value.real(), kms_weyl_trace(st, one, one), 1e-6 * expected);
  const CVec z = scalar(cplx(0.4, -0.7));
  EXPECT_LT(std::abs(oracle_kms_trace(sp, rho, z, scalar(0.0)).value - oracle_char_fn(sp, rho, z)), 1e-10);
  EXPECT_LT(std::abs(oracle_kms_trace(sp, rho, scalar(0.0), scalar(0.0)).value - 1.0), 1e-12);
}

TEST(Fock, EvolutionMatchesClosedForm) {
  // Vacuum evolved by the truncated predual against the Gaussian state evolution.
  const auto model = one_dim_model(3, 1, 0, 0);
  const auto sp = build_space(1, 25);
  const auto s = build_superoperator(build_operators(model, sp));
  const auto dd = build_drift_diffusion(model);
  const GaussianStateParams vac{CVec::Zero(1), RMat::Identity(2, 2)};
  for (double t : {0.1, 0.5}) {
    const CMat rho_t = unvec(CMat(CMat(s.predual * t).exp()) * vec(vacuum(sp)), sp.dim);
    const auto gp = state_evolve(dd, vac, t, CVec::Zero(1));
    for (const cplx z : {cplx(1.0, 0.0), cplx(0.3, -0.6)}) {
      EXPECT_LT(std::abs(oracle_char_fn(sp, rho_t, scalar(z)) - char_fn(gp, scalar(z))), 1e-4);
    }
  }
}

TEST(Fock, OracleGapExamples) {
  const auto a = one_dim_model(3, 1, 0, 0);
  GklsModel a_rot = a;
  a_rot.omega(0, 0) = 2.0;
  double prev = 1e9;
  for (Index n : {20, 25, 30}) {
    const auto sp = build_space(1, n);
    const double gns = oracle_gap(a, sp, OracleMode::GNS).gap;
    EXPECT_LE(gns, prev + 1e-12);
    prev = gns;
  }
  const auto sp = build_space(1, 30);
  EXPECT_NEAR(oracle_gap(a, sp, OracleMode::GNS).gap, 1.0, 0.05);
  EXPECT_NEAR(oracle_gap(a_rot, sp, OracleMode::GNS).gap, 1.0, 0.05);
  EXPECT_NEAR(oracle_gap(a, sp, OracleMode::KMS).gap, 1.0, 0.05);

  const auto other = one_dim_model(4, 0.5, 1.0, 0.0);
  EXPECT_NEAR(oracle_gap(other, sp, OracleMode::GNS).gap, 1.75, 0.05 * 1.75);
  EXPECT_NEAR(oracle_gap(other, sp, OracleMode::KMS).gap, 1.75, 0.05 * 1.75);

  try {
    oracle_gap(one_dim_model(3, 1, 2, 1), sp, OracleMode::GNS);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OutsideEnvelope);
  }
}
