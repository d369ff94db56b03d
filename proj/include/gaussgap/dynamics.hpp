#pragma once

// Closed-form action of the semigroup on Weyl operators and Gaussian states,
// decay of centered Weyl combinations in both embeddings, kernel positivity,
// and the sharpness witness.

#include <cmath>
#include <utility>
#include <vector>

#include "gaussgap/error.hpp"
#include "gaussgap/gap.hpp"
#include "gaussgap/linalg.hpp"
#include "gaussgap/model.hpp"
#include "gaussgap/realops.hpp"
#include "gaussgap/stationary.hpp"

namespace gaussgap {

enum class Embedding { GNS, KMS };

inline const char* to_string(Embedding e) { return e == Embedding::GNS ? "gns" : "kms"; }

struct GaussianStateParams {
  CVec mean;
  RMat cov2d;
};

struct WeylTerm {
  cplx eta;
  CVec z;
};
using WeylCombo = std::vector<WeylTerm>;

namespace detail {

inline void require_time(double t) {
  if (!std::isfinite(t) || t < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "time must be finite and >= 0");
  }
}

}  // namespace detail

/// G_t = int_0^t e^{sZ^T} C e^{sZ} ds together with e^{tZ}, by one block exponential.
struct DiffusionIntegral {
  RMat etz;
  RMat g_t;
};

inline DiffusionIntegral diffusion_integral(const RMat& z2d, const RMat& c2d, double t) {
  detail::require_time(t);
  const Index n = z2d.rows();
  // The -Z^T block grows like e^{t|a|}; evaluate a short step and double up,
  // G_2t = G_t + e^{tZ^T} G_t e^{tZ}.
  const double zn = n == 0 ? 0.0 : z2d.cwiseAbs().rowwise().sum().maxCoeff();
  int k = 0;
  double step = t;
  while (step * zn > 1.0 && k < 60) {
    step *= 0.5;
    ++k;
  }
  RMat blk = RMat::Zero(2 * n, 2 * n);
  blk.topLeftCorner(n, n) = -z2d.transpose();
  blk.topRightCorner(n, n) = c2d;
  blk.bottomRightCorner(n, n) = z2d;
  const RMat f = linalg::expm(RMat(step * blk));
  DiffusionIntegral out;
  out.etz = f.bottomRightCorner(n, n);
  out.g_t = out.etz.transpose() * f.topRightCorner(n, n);
  for (int i = 0; i < k; ++i) {
    out.g_t += out.etz.transpose() * out.g_t * out.etz;
    out.etz = out.etz * out.etz;
  }
  out.g_t = 0.5 * (out.g_t + out.g_t.transpose());
  return out;
}

/// int_0^t e^{sA} ds.
inline RMat exp_integral(const RMat& a, double t) {
  detail::require_time(t);
  const Index n = a.rows();
  RMat blk = RMat::Zero(2 * n, 2 * n);
  blk.topLeftCorner(n, n) = a;
  blk.topRightCorner(n, n).setIdentity();
  return linalg::expm(RMat(t * blk)).topRightCorner(n, n);
}

struct WeylEvolution {
  double decay_exponent = 0.0;
  double phase = 0.0;
  CVec z_t;
};

/// T_t(W(z)) = exp(decay_exponent + i phase) W(z_t).
inline WeylEvolution weyl_evolve(const DriftDiffusion& dd, const CVec& z, double t,
                                 const CVec& zeta) {
  if (z.size() != dd.d() || zeta.size() != dd.d()) {
    throw Error(ErrorCode::DimensionMismatch, "vector length");
  }
  const auto di = diffusion_integral(dd.z2d, dd.c2d, t);
  const RVec x = to_real(z);
  WeylEvolution out;
  out.decay_exponent = -0.5 * x.dot(di.g_t * x);
  out.phase = to_real(zeta).dot(exp_integral(dd.z2d, t) * x);
  out.z_t = to_complex(di.etz * x);
  return out;
}

/// Predual action: rho(mu, S) -> rho(mu_t, S_t).
inline GaussianStateParams state_evolve(const DriftDiffusion& dd, const GaussianStateParams& sp,
                                        double t, const CVec& zeta) {
  if (sp.mean.size() != dd.d() || zeta.size() != dd.d() || sp.cov2d.rows() != 2 * dd.d()) {
    throw Error(ErrorCode::DimensionMismatch, "state dimension");
  }
  detail::require_time(t);
  if (t == 0.0) return sp;
  const auto di = diffusion_integral(dd.z2d, dd.c2d, t);
  const RMat ezt = di.etz.transpose();
  GaussianStateParams out;
  out.mean = to_complex(ezt * to_real(sp.mean) -
                        exp_integral(dd.z2d.transpose(), t) * to_real(zeta));
  out.cov2d = ezt * sp.cov2d * di.etz + di.g_t;
  out.cov2d = 0.5 * (out.cov2d + out.cov2d.transpose());
  return out;
}

inline cplx char_fn(const GaussianStateParams& sp, const CVec& z) {
  const RVec x = to_real(z);
  const double lin = to_real(sp.mean).dot(x);
  return std::exp(cplx(-0.5 * x.dot(sp.cov2d * x), -lin));
}

/// Kernel matrix e^{tZ^T} A e^{tZ}, A = S + iJ (GNS) or S-breve (KMS).
inline CMat kernel_matrix(const StationaryData& st, const DriftDiffusion& dd, double t,
                          Embedding mode) {
  detail::require_time(t);
  const RMat e = pair_exp(dd.z_pair, t);
  if (mode == Embedding::GNS) {
    return e.transpose().cast<cplx>() * st.s_tilde * e.cast<cplx>();
  }
  if (!st.faithful || st.s_breve.size() == 0) {
    throw Error(ErrorCode::NotFaithful, "KMS kernel needs a faithful invariant state");
  }
  return (e.transpose() * st.s_breve * e).cast<cplx>();
}

inline cplx kernel_s(const StationaryData& st, const DriftDiffusion& dd, const CVec& z,
                     const CVec& w, double t, Embedding mode) {
  const CMat k = kernel_matrix(st, dd, t, mode);
  return to_real(z).cast<cplx>().dot(k * to_real(w).cast<cplx>());
}

namespace detail {

inline CVec centered_coefficients(const StationaryData& st, const WeylCombo& combo) {
  CVec xi(static_cast<Index>(combo.size()));
  for (std::size_t j = 0; j < combo.size(); ++j) {
    const RVec x = to_real(combo[j].z);
    xi(static_cast<Index>(j)) = std::exp(-0.5 * x.dot(st.s2d * x)) * combo[j].eta;
  }
  return xi;
}

inline RMat points_matrix(const std::vector<CVec>& zs, Index d) {
  RMat pts(2 * d, static_cast<Index>(zs.size()));
  for (std::size_t j = 0; j < zs.size(); ++j) {
    if (zs[j].size() != d) throw Error(ErrorCode::DimensionMismatch, "point length");
    pts.col(static_cast<Index>(j)) = to_real(zs[j]);
  }
  return pts;
}

}  // namespace detail

/// Same as norm_decay with the kernel matrix already evaluated at t.
inline double norm_decay_from_kernel(const StationaryData& st, const CMat& kernel,
                                     const WeylCombo& combo) {
  if (combo.empty()) throw Error(ErrorCode::EmptyCombination, "empty Weyl combination");
  std::vector<CVec> zs;
  zs.reserve(combo.size());
  for (const auto& term : combo) zs.push_back(term.z);
  const RMat pts = detail::points_matrix(zs, kernel.rows() / 2);
  const CMat s = pts.transpose().cast<cplx>() * kernel * pts.cast<cplx>();
  const CVec xi = detail::centered_coefficients(st, combo);

  const Index n = s.rows();
  CMat e(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index l = 0; l < n; ++l) {
      if (std::abs(s(j, l)) > 700.0) {
        throw Error(ErrorCode::RangeExceeded, "kernel value beyond exp range; shrink |z|");
      }
      e(j, l) = linalg::expm1(s(j, l));
    }
  }
  e = linalg::hermitian_part(e);
  const cplx val = xi.dot(e * xi);
  const double scl = std::max(1e-300, xi.cwiseAbs2().sum() * linalg::scale(e));
  if (std::abs(val.imag()) > 1e-9 * scl) {
    throw Error(ErrorCode::RouteMismatch, "norm has a non-negligible imaginary part");
  }
  return val.real();
}

/// Squared norm of the evolved centered element in the chosen embedding.
/// Assumes the centered normal form zeta = 0.
inline double norm_decay(const StationaryData& st, const DriftDiffusion& dd,
                         const WeylCombo& combo, double t, Embedding mode) {
  if (combo.empty()) throw Error(ErrorCode::EmptyCombination, "empty Weyl combination");
  return norm_decay_from_kernel(st, kernel_matrix(st, dd, t, mode), combo);
}

struct KernelCheck {
  double lambda_min = 0.0;
  double scale = 0.0;
  bool pass = false;
};

/// Gram matrix of e^{-2 rate t} s_0^n - s_t^n, or with root = true of
/// e^{-2 rate t / n} s_0 - s_t.
inline KernelCheck kernel_psd_check(const StationaryData& st, const DriftDiffusion& dd,
                                    const std::vector<CVec>& points, int n, double t, double rate,
                                    Embedding mode, bool root = false) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
  if (points.empty()) throw Error(ErrorCode::EmptyCombination, "no points");
  const RMat pts = detail::points_matrix(points, dd.d());
  const CMat s0 = pts.transpose().cast<cplx>() * kernel_matrix(st, dd, 0.0, mode) * pts.cast<cplx>();
  const CMat st_ = pts.transpose().cast<cplx>() * kernel_matrix(st, dd, t, mode) * pts.cast<cplx>();
  const Index m = s0.rows();
  CMat gram(m, m);
  KernelCheck out;
  for (Index j = 0; j < m; ++j) {
    for (Index l = 0; l < m; ++l) {
      cplx a, b;
      if (root) {
        a = std::exp(-2.0 * rate * t / n) * s0(j, l);
        b = st_(j, l);
      } else {
        a = std::exp(-2.0 * rate * t) * std::pow(s0(j, l), n);
        b = std::pow(st_(j, l), n);
      }
      gram(j, l) = a - b;
      out.scale = std::max(out.scale, std::abs(a) + std::abs(b));
    }
  }
  Eigen::SelfAdjointEigenSolver<CMat> es(linalg::hermitian_part(gram), Eigen::EigenvaluesOnly);
  out.lambda_min = es.eigenvalues()(0);
  out.pass = out.lambda_min >= -1e-8 * out.scale;
  return out;
}

struct SharpnessWitness {
  double omega0 = 0.0;
  double omega_test = 0.0;
  WeylCombo unit_combo;  // scaled by r before use
  double s0 = 0.0;       // s_0(z, z) for the unit witness
  double f2 = 0.0;       // 2 (omega0 - omega_test) s0
  double f2_explicit = 0.0;
  double f2_second_difference = 0.0;
  bool violation_found = false;
  double violation_r = 0.0;
  double violation_t = 0.0;
};

inline WeylCombo scale_combo(const WeylCombo& c, double r) {
  WeylCombo out = c;
  for (auto& term : out) term.z *= r;
  return out;
}

namespace detail {

/// d/dt at t = 0 of norm_decay_t(x) - e^{omega t} norm_decay_0(x), in closed form.
inline double growth_derivative(const StationaryData& st, const DriftDiffusion& dd,
                                const WeylCombo& combo, double omega, Embedding mode) {
  std::vector<CVec> zs;
  for (const auto& term : combo) zs.push_back(term.z);
  const RMat pts = points_matrix(zs, dd.d());
  const CMat k0 = kernel_matrix(st, dd, 0.0, mode);
  const CMat zc = dd.z2d.cast<cplx>();
  const CMat kdot = zc.transpose() * k0 + k0 * zc;
  const CMat s0 = pts.transpose().cast<cplx>() * k0 * pts.cast<cplx>();
  const CMat sd = pts.transpose().cast<cplx>() * kdot * pts.cast<cplx>();
  const CVec xi = centered_coefficients(st, combo);
  cplx acc = 0.0;
  for (Index j = 0; j < s0.rows(); ++j) {
    for (Index l = 0; l < s0.cols(); ++l) {
      const cplx w = std::conj(xi(j)) * xi(l);
      acc += w * (std::exp(s0(j, l)) * sd(j, l) - omega * linalg::expm1(s0(j, l)));
    }
  }
  return acc.real();
}

}  // namespace detail

/// Builds a combination whose decay beats e^{t omega_test} for small r, t when
/// omega_test < omega0 (or omega0-breve in KMS mode).
inline SharpnessWitness sharpness_witness(const StationaryData& st, const DriftDiffusion& dd,
                                          double omega_test, Embedding mode = Embedding::GNS) {
  SharpnessWitness out;
  out.omega_test = omega_test;
  if (mode == Embedding::GNS) {
    const auto gap = gns_gap(dd, st);
    out.omega0 = gap.omega0;
    if (!(omega_test < out.omega0)) {
      throw Error(ErrorCode::InvalidArgument, "omega_test must be below omega0");
    }
    CVec z = (gap.s_tilde_inv_sqrt * gap.witness).normalized();
    z = linalg::fix_phase(z);
    out.unit_combo = {{cplx(1.0, 0.0), to_complex(z.real())},
                      {cplx(0.0, 1.0), to_complex(z.imag())}};
    out.s0 = (z.dot(st.s_tilde * z)).real();
  } else {
    const auto gap = kms_gap(dd, st);
    out.omega0 = gap.omega0_breve;
    if (!(omega_test < out.omega0)) {
      throw Error(ErrorCode::InvalidArgument, "omega_test must be below omega0");
    }
    const RVec z = linalg::fix_sign(RVec((gap.s_breve_inv_sqrt * gap.witness).normalized()));
    out.unit_combo = {{cplx(1.0, 0.0), to_complex(z)}};
    out.s0 = z.dot(st.s_breve * z);
  }
  out.f2 = 2.0 * (out.omega0 - omega_test) * out.s0;

  const double h = 1e-3;
  const double fh = detail::growth_derivative(st, dd, scale_combo(out.unit_combo, h), omega_test, mode);
  out.f2_second_difference = 2.0 * fh / (h * h);
  // Same explicit sum at h/2, Richardson-combined to drop the r^4 term.
  const double h2 = 0.5 * h;
  const double fh2 =
      detail::growth_derivative(st, dd, scale_combo(out.unit_combo, h2), omega_test, mode);
  out.f2_explicit = (4.0 * (2.0 * fh2 / (h2 * h2)) - out.f2_second_difference) / 3.0;

  const double ts = 1.0 / std::max(1.0, std::abs(out.omega0));
  // Small gaps need small r before the r^4 term drops below the margin.
  for (double r : {0.1, 0.05, 0.02, 0.01, 5e-3, 2e-3, 1e-3, 5e-4, 2e-4, 1e-4}) {
    const WeylCombo c = scale_combo(out.unit_combo, r);
    const double n0 = norm_decay(st, dd, c, 0.0, mode);
    for (double tf : {1e-3, 1e-4, 1e-5}) {
      const double t = tf * ts;
      if (norm_decay(st, dd, c, t, mode) > std::exp(omega_test * t) * n0) {
        out.violation_found = true;
        out.violation_r = r;
        out.violation_t = t;
        return out;
      }
    }
  }
  return out;
}

/// tr(rho^1/2 W(z) rho^1/2 W(w)) for the centered invariant state.
inline double kms_weyl_trace(const StationaryData& st, const CVec& z, const CVec& w) {
  if (!st.faithful || st.s_breve.size() == 0) {
    throw Error(ErrorCode::NotFaithful, "KMS trace needs a faithful invariant state");
  }
  const RVec x = to_real(z), y = to_real(w);
  return std::exp(-0.5 * (x.dot(st.s2d * x) + y.dot(st.s2d * y) + 2.0 * x.dot(st.s_breve * y)));
}

}  // namespace gaussgap
