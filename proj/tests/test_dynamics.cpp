#include <gtest/gtest.h>

#include "gaussgap/dynamics.hpp"
#include "support/fuzz.hpp"
#include "support/oracles.hpp"

using namespace gaussgap;
using gaussgap::testing::Rng;

namespace {

struct Pipeline {
  DriftDiffusion dd;
  StationaryData st;
};

Pipeline run(const GklsModel& m) {
  Pipeline p{build_drift_diffusion(m), {}};
  p.st = solve_stationary(p.dd, m.zeta);
  return p;
}

CVec scalar(cplx z) {
  CVec v(1);
  v << z;
  return v;
}

GaussianStateParams stationary_params(const StationaryData& st) { return {st.mu, st.s2d}; }

}  // namespace

TEST(Dynamics, DiffusionIntegralMatchesQuadrature) {
  Rng rng(51);
  for (int trial = 0; trial < 6; ++trial) {
    const Index n = 2 * (1 + trial % 3);
    const RMat z = rng.rmat(n, n, 0.6);
    const RMat b = rng.rmat(n, n);
    const RMat c = b * b.transpose();
    const double t = 0.7;
    const auto di = diffusion_integral(z, c, t);
    EXPECT_LT((di.etz - RMat(z * t).exp()).norm(), 1e-12);
    EXPECT_LT((di.g_t - oracle::lyapunov_quadrature(z, c, t, 2000)).norm(), 1e-9 * c.norm());
    const RMat ei = oracle::simpson([&](double s) { return RMat(RMat(z * s).exp()); }, t, 400);
    EXPECT_LT((exp_integral(z, t) - ei).norm(), 1e-9);
  }
}

TEST(Dynamics, WeylEvolveExamples) {
  const auto p = run(one_dim_model(3, 1, 0, 0));
  const CVec z = scalar(1.0);
  auto w = weyl_evolve(p.dd, z, 0.0, CVec::Zero(1));
  EXPECT_EQ(w.decay_exponent, 0.0);
  EXPECT_EQ(w.phase, 0.0);
  EXPECT_EQ(w.z_t, z);
  for (double t : {0.1, 0.5, 2.0}) {
    w = weyl_evolve(p.dd, z, t, CVec::Zero(1));
    EXPECT_NEAR(w.decay_exponent, -(1.0 - std::exp(-2.0 * t)), 1e-13);
    EXPECT_NEAR(w.phase, 0.0, 1e-15);
    EXPECT_NEAR(std::abs(w.z_t(0) - std::exp(-t)), 0.0, 1e-14);
  }
  w = weyl_evolve(p.dd, z, 40.0, CVec::Zero(1));
  EXPECT_NEAR(std::exp(w.decay_exponent), std::exp(-1.0), 1e-14);
}

TEST(Dynamics, StateEvolveExamples) {
  const auto p = run(one_dim_model(3, 1, 0, 0));
  const GaussianStateParams vac{CVec::Zero(1), RMat::Identity(2, 2)};
  for (double t : {0.25, 1.0}) {
    const auto s = state_evolve(p.dd, vac, t, CVec::Zero(1));
    EXPECT_LT((s.cov2d - (2.0 - std::exp(-2.0 * t)) * RMat::Identity(2, 2)).norm(), 1e-13);
  }
  const auto same = state_evolve(p.dd, vac, 0.0, CVec::Zero(1));
  EXPECT_EQ(same.cov2d, vac.cov2d);

  const auto b = run(one_dim_model(3, 1, 2, 1));
  for (double t : {0.3, 1.7, 5.0}) {
    const auto s = state_evolve(b.dd, stationary_params(b.st), t, CVec::Zero(1));
    EXPECT_LT((s.cov2d - b.st.s2d).norm(), 1e-10);
  }
}

TEST(Dynamics, CharFnExamples) {
  const auto p = run(one_dim_model(3, 1, 0, 0));
  const auto sp = stationary_params(p.st);
  EXPECT_EQ(char_fn(sp, CVec::Zero(1)), cplx(1.0, 0.0));
  EXPECT_NEAR(std::abs(char_fn(sp, scalar(1.0)) - std::exp(-1.0)), 0.0, 1e-15);
  const GaussianStateParams vac{CVec::Zero(1), RMat::Identity(2, 2)};
  const cplx z(0.3, -0.8);
  EXPECT_NEAR(std::abs(char_fn(vac, scalar(z)) - std::exp(-0.5 * std::norm(z))), 0.0, 1e-15);
}

TEST(Dynamics, KernelExamples) {
  const auto p = run(one_dim_model(3, 1, 0, 0));
  const CVec one = scalar(1.0), i = scalar(kI);
  const cplx s11 = kernel_s(p.st, p.dd, one, one, 0.0, Embedding::GNS);
  EXPECT_NEAR(std::abs(s11 - cplx(2.0, 0.0)), 0.0, 1e-14);
  const cplx s1i = kernel_s(p.st, p.dd, one, i, 0.0, Embedding::GNS);
  EXPECT_NEAR(std::abs(s1i - cplx(0.0, 1.0)), 0.0, 1e-14);
  const cplx k11 = kernel_s(p.st, p.dd, one, one, 0.0, Embedding::KMS);
  EXPECT_NEAR(std::abs(k11 - std::sqrt(3.0)), 0.0, 1e-13);
}

TEST(Dynamics, NormDecayExamples) {
  const auto p = run(one_dim_model(3, 1, 0, 0));
  const WeylCombo c{{cplx(1.0, 0.0), scalar(1.0)}};
  // Centered coefficient xi = e^{-1}: the squared norm is e^{-2}(e^{s_t} - 1).
  const double n0 = norm_decay(p.st, p.dd, c, 0.0, Embedding::GNS);
  EXPECT_NEAR(n0, std::exp(-2.0) * (std::exp(2.0) - 1.0), 1e-13);
  EXPECT_NEAR(n0, 0.864665, 1e-6);
  const double n5 = norm_decay(p.st, p.dd, c, 0.5, Embedding::GNS);
  EXPECT_NEAR(n5, std::exp(-2.0) * (std::exp(2.0 / std::exp(1.0)) - 1.0), 1e-13);
  EXPECT_LE(n5, std::exp(-1.0) * n0);

  const WeylCombo zero{{cplx(1.0, 0.0), scalar(0.0)}};
  for (double t : {0.0, 0.7}) {
    EXPECT_NEAR(norm_decay(p.st, p.dd, zero, t, Embedding::GNS), 0.0, 1e-15);
    EXPECT_NEAR(norm_decay(p.st, p.dd, zero, t, Embedding::KMS), 0.0, 1e-15);
  }
  EXPECT_THROW(norm_decay(p.st, p.dd, WeylCombo{}, 0.0, Embedding::GNS), Error);
  const WeylCombo big{{cplx(1.0, 0.0), scalar(30.0)}};
  try {
    norm_decay(p.st, p.dd, big, 0.0, Embedding::GNS);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RangeExceeded);
  }
}

TEST(Dynamics, KernelCheckExamples) {
  const auto p = run(one_dim_model(3, 1, 0, 0));
  const std::vector<CVec> pts{scalar(1.0)};
  auto k = kernel_psd_check(p.st, p.dd, pts, 1, 0.5, 1.0, Embedding::GNS);
  EXPECT_NEAR(k.lambda_min, 0.0, 1e-14);
  EXPECT_TRUE(k.pass);
  k = kernel_psd_check(p.st, p.dd, pts, 1, 0.5, 0.9, Embedding::GNS);
  EXPECT_GT(k.lambda_min, 0.0);
  k = kernel_psd_check(p.st, p.dd, pts, 1, 0.05, 1.1, Embedding::GNS);
  EXPECT_LT(k.lambda_min, 0.0);
  EXPECT_FALSE(k.pass);
}

TEST(Dynamics, SharpnessExamples) {
  const auto a = run(one_dim_model(3, 1, 0, 0));
  // The witness lies in a degenerate eigenspace, so s0 is 3/2 rather than 2.
  auto w = sharpness_witness(a.st, a.dd, -3.0);
  EXPECT_NEAR(w.omega0, -2.0, 1e-12);
  EXPECT_NEAR(w.f2, 2.0 * (w.omega0 + 3.0) * w.s0, 1e-12);
  EXPECT_GT(w.f2, 0.0);
  EXPECT_NEAR(w.f2_explicit, w.f2, 1e-5 * w.f2);
  EXPECT_THROW(sharpness_witness(a.st, a.dd, -1.9), Error);

  const auto b = run(one_dim_model(3, 1, 2, 1));
  const double om0 = gns_gap(b.dd, b.st).omega0;
  w = sharpness_witness(b.st, b.dd, 1.1 * om0);
  EXPECT_GT(w.f2, 0.0);
  EXPECT_NEAR(w.f2_explicit, w.f2, 1e-5 * std::abs(w.f2));
  EXPECT_TRUE(w.violation_found);

  const double ob = kms_gap(b.dd, b.st).omega0_breve;
  w = sharpness_witness(b.st, b.dd, 1.05 * ob, Embedding::KMS);
  EXPECT_GT(w.f2, 0.0);
  EXPECT_TRUE(w.violation_found);
}

TEST(Dynamics, KmsTraceExamples) {
  const auto a = run(one_dim_model(3, 1, 0, 0));
  EXPECT_DOUBLE_EQ(kms_weyl_trace(a.st, CVec::Zero(1), CVec::Zero(1)), 1.0);
  EXPECT_NEAR(kms_weyl_trace(a.st, scalar(1.0), scalar(1.0)), std::exp(-(2.0 + std::sqrt(3.0))), 1e-15);
  const CVec z = scalar(cplx(0.4, 0.3));
  EXPECT_NEAR(kms_weyl_trace(a.st, z, CVec::Zero(1)),
              char_fn(stationary_params(a.st), z).real(), 1e-15);
}

TEST(DynamicsProperty, WeylSemigroupLaw) {
  Rng rng(52);
  for (int trial = 0; trial < 20; ++trial) {
    const Index d = 1 + trial % 3;
    const auto model = gaussgap::testing::stable_faithful_model(rng, d, true);
    const auto dd = build_drift_diffusion(model);
    const CVec z = rng.cvec(d, 0.5);
    const double s = 0.3, t = 0.45;
    const auto ws = weyl_evolve(dd, z, s, model.zeta);
    const auto wt = weyl_evolve(dd, ws.z_t, t, model.zeta);
    const auto wst = weyl_evolve(dd, z, s + t, model.zeta);
    EXPECT_LT((wt.z_t - wst.z_t).norm(), 1e-10);
    EXPECT_NEAR(ws.decay_exponent + wt.decay_exponent, wst.decay_exponent, 1e-10);
    EXPECT_NEAR(ws.phase + wt.phase, wst.phase, 1e-10);
  }
}

TEST(DynamicsProperty, StationaryStateIsInvariant) {
  Rng rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    const Index d = 1 + trial % 3;
    const auto model = gaussgap::testing::stable_faithful_model(rng, d, true);
    const auto p = run(model);
    const auto sp = stationary_params(p.st);
    for (double t : {0.2, 1.5}) {
      const CVec z = rng.cvec(d, 0.6);
      const auto w = weyl_evolve(p.dd, z, t, model.zeta);
      const cplx lhs = std::exp(cplx(w.decay_exponent, w.phase)) * char_fn(sp, w.z_t);
      EXPECT_LT(std::abs(lhs - char_fn(sp, z)), 1e-10);
      const auto evolved = state_evolve(p.dd, sp, t, model.zeta);
      EXPECT_LT((evolved.mean - sp.mean).norm(), 1e-10);
      EXPECT_LT((evolved.cov2d - sp.cov2d).norm(), 1e-10);
    }
  }
}

TEST(DynamicsProperty, StateEvolutionIsDual) {
  // tr(T_*t(rho) W(z)) = tr(rho T_t(W(z))) for a non-stationary Gaussian rho.
  Rng rng(54);
  for (int trial = 0; trial < 15; ++trial) {
    const Index d = 1 + trial % 3;
    const auto model = gaussgap::testing::stable_faithful_model(rng, d, true);
    const auto dd = build_drift_diffusion(model);
    const GaussianStateParams vac{rng.cvec(d, 0.3), RMat::Identity(2 * d, 2 * d)};
    const double t = 0.6;
    const CVec z = rng.cvec(d, 0.5);
    const auto w = weyl_evolve(dd, z, t, model.zeta);
    const cplx lhs = char_fn(state_evolve(dd, vac, t, model.zeta), z);
    const cplx rhs = std::exp(cplx(w.decay_exponent, w.phase)) * char_fn(vac, w.z_t);
    EXPECT_LT(std::abs(lhs - rhs), 1e-10);
  }
}

TEST(DynamicsProperty, CovarianceDeviationPropagatesAndDecays) {
  // S_t - S = exp(tZ^T) (S_0 - S) exp(tZ); the Frobenius distance need not be monotone.
  Rng rng(55);
  for (int trial = 0; trial < 10; ++trial) {
    const auto model = gaussgap::testing::stable_faithful_model(rng, 1 + trial % 2);
    const auto p = run(model);
    const Index d = p.dd.d();
    const GaussianStateParams vac{CVec::Zero(d), RMat::Identity(2 * d, 2 * d)};
    const RMat dev0 = vac.cov2d - p.st.s2d;
    const double rate = -is_stable(p.dd).abscissa;
    for (double t : {0.5, 2.0, 40.0 / rate}) {
      const RMat e = RMat(p.dd.z2d * t).exp();
      const RMat expect = e.transpose() * dev0 * e;
      const RMat got = state_evolve(p.dd, vac, t, model.zeta).cov2d - p.st.s2d;
      EXPECT_LT((got - expect).norm(), 1e-9 * std::max(1.0, p.st.s2d.norm()));
    }
    const double far = (state_evolve(p.dd, vac, 40.0 / rate, model.zeta).cov2d - p.st.s2d).norm();
    EXPECT_LT(far, 1e-6 * std::max(1.0, p.st.s2d.norm()));
  }
}

TEST(DynamicsProperty, KernelDerivativeMatchesSimilarityForm) {
  Rng rng(56);
  for (int trial = 0; trial < 10; ++trial) {
    const Index d = 1 + trial % 3;
    const auto p = run(gaussgap::testing::stable_faithful_model(rng, d));
    const auto gap = gns_gap(p.dd, p.st);
    const CVec z = rng.cvec(d), w = rng.cvec(d);
    const double h = 1e-6;
    const cplx fd = (kernel_s(p.st, p.dd, z, w, h, Embedding::GNS) -
                     kernel_s(p.st, p.dd, z, w, 0.0, Embedding::GNS)) / h;
    // Quadratic form of Y + Y* in the S~^{1/2}-transformed coordinates.
    const CMat y = gap.s_tilde_sqrt * p.dd.z2d.cast<cplx>() * gap.s_tilde_inv_sqrt;
    const CVec u = gap.s_tilde_sqrt * to_real(z).cast<cplx>();
    const CVec v = gap.s_tilde_sqrt * to_real(w).cast<cplx>();
    const cplx exact = u.dot(CMat(y + y.adjoint()) * v);
    EXPECT_LT(std::abs(fd - exact), 1e-5 * std::max(1.0, std::abs(exact)));
  }
}

TEST(DynamicsProperty, DecayBoundsBothEmbeddings) {
  Rng rng(57);
  for (int trial = 0; trial < 8; ++trial) {
    const Index d = 1 + trial % 3;
    const auto p = run(gaussgap::testing::stable_faithful_model(rng, d));
    const double g = gns_gap(p.dd, p.st).g;
    const double gb = kms_gap(p.dd, p.st).g_breve;
    for (int k = 0; k < 20; ++k) {
      const auto combo = gaussgap::testing::random_combo(rng, d, 1 + k % 5);
      const double g0 = norm_decay(p.st, p.dd, combo, 0.0, Embedding::GNS);
      const double k0 = norm_decay(p.st, p.dd, combo, 0.0, Embedding::KMS);
      EXPECT_GE(g0, -1e-14);
      EXPECT_GE(k0, -1e-14);
      for (double t : {0.05, 0.5, 3.0}) {
        EXPECT_LE(norm_decay(p.st, p.dd, combo, t, Embedding::GNS),
                  std::exp(-2.0 * g * t) * g0 * (1.0 + 1e-9) + 1e-14);
        EXPECT_LE(norm_decay(p.st, p.dd, combo, t, Embedding::KMS),
                  std::exp(-2.0 * gb * t) * k0 * (1.0 + 1e-9) + 1e-14);
      }
    }
  }
}

TEST(DynamicsProperty, KernelPositivity) {
  Rng rng(58);
  for (int trial = 0; trial < 6; ++trial) {
    const Index d = 1 + trial % 2;
    const auto p = run(gaussgap::testing::stable_faithful_model(rng, d));
    const double g = gns_gap(p.dd, p.st).g;
    const double gb = kms_gap(p.dd, p.st).g_breve;
    std::vector<CVec> pts;
    for (int j = 0; j < 5; ++j) pts.push_back(rng.cvec(d, 0.4));
    for (int n = 1; n <= 4; ++n) {
      EXPECT_TRUE(kernel_psd_check(p.st, p.dd, pts, n, 0.3, g, Embedding::GNS).pass);
      EXPECT_TRUE(kernel_psd_check(p.st, p.dd, pts, n, 0.3, gb, Embedding::KMS).pass);
      EXPECT_TRUE(kernel_psd_check(p.st, p.dd, pts, n, 0.3, g, Embedding::GNS, true).pass);
    }
  }
}
