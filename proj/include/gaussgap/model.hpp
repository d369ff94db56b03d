#pragma once

// GKLS parameters of a Gaussian semigroup and the drift/diffusion data derived
// from them.
//
//   H   = sum Omega_jk a_j^+ a_k + kappa_jk/2 a_j^+ a_k^+ + conj(kappa_jk)/2 a_j a_k
//         + sum zeta_j/2 a_j^+ + conj(zeta_j)/2 a_j
//   L_l = sum_k conj(v_lk) a_k + u_lk a_k^+
//
// Every drift and C_Z is built twice, once from the operator definitions and
// once from the closed block formulas; the two must agree.

#include <cmath>
#include <optional>
#include <string>

#include "gaussgap/error.hpp"
#include "gaussgap/linalg.hpp"
#include "gaussgap/realops.hpp"

namespace gaussgap {

struct GklsModel {
  Index d = 0;
  Index m = 0;
  CMat omega;  // d x d, Hermitian
  CMat kappa;  // d x d, symmetric
  CMat u;      // m x d
  CMat v;      // m x d
  CVec zeta;   // d
};

struct ValidationReport {
  double hermitian_residual = 0.0;
  double symmetric_residual = 0.0;
  Index kraus_rank = 0;
  bool m_in_range = false;
  std::optional<ErrorCode> failure;
  std::string message;

  bool ok() const noexcept { return !failure.has_value(); }
};

inline ValidationReport validate(const GklsModel& model) {
  ValidationReport rep;
  auto fail = [&rep](ErrorCode code, std::string msg) {
    if (!rep.failure) {
      rep.failure = code;
      rep.message = std::move(msg);
    }
  };

  const Index d = model.d;
  const Index m = model.m;
  const bool shapes_ok = d > 0 && model.omega.rows() == d && model.omega.cols() == d &&
                         model.kappa.rows() == d && model.kappa.cols() == d &&
                         model.u.rows() == m && model.u.cols() == d && model.v.rows() == m &&
                         model.v.cols() == d && model.zeta.size() == d;
  if (!shapes_ok) {
    fail(ErrorCode::DimensionMismatch, "matrix shapes do not match d and m");
    return rep;
  }
  rep.m_in_range = m >= 1 && m <= 2 * d;
  if (!rep.m_in_range) {
    fail(ErrorCode::DimensionMismatch,
         "need 1 <= m <= 2d, got m=" + std::to_string(m) + " d=" + std::to_string(d));
    return rep;
  }
  if (!model.omega.allFinite() || !model.kappa.allFinite() || !model.u.allFinite() ||
      !model.v.allFinite() || !model.zeta.allFinite()) {
    fail(ErrorCode::NonFinite, "non-finite model entry");
    return rep;
  }

  rep.hermitian_residual = (model.omega - model.omega.adjoint()).cwiseAbs().maxCoeff();
  rep.symmetric_residual = (model.kappa - model.kappa.transpose()).cwiseAbs().maxCoeff();
  if (rep.hermitian_residual > 1e-12 * std::max(1.0, linalg::scale(model.omega))) {
    fail(ErrorCode::NotHermitian, "Omega is not Hermitian");
  }
  if (rep.symmetric_residual > 1e-12 * std::max(1.0, linalg::scale(model.kappa))) {
    fail(ErrorCode::NotSymmetric, "kappa is not symmetric");
  }

  // ker(V*) and ker(U^T) intersect trivially iff [V*; U^T] has full column rank m.
  CMat stacked(2 * d, m);
  stacked.topRows(d) = model.v.adjoint();
  stacked.bottomRows(d) = model.u.transpose();
  rep.kraus_rank = linalg::numerical_rank(stacked);
  if (rep.kraus_rank < m) {
    fail(ErrorCode::DependentKraus,
         "Kraus operators are linearly dependent (rank " + std::to_string(rep.kraus_rank) +
             " < m=" + std::to_string(m) + ")");
  }
  return rep;
}

inline void require_valid(const GklsModel& model) {
  const auto rep = validate(model);
  if (!rep.ok()) throw Error(*rep.failure, rep.message);
}

/// Drift Z and diffusion C from the operator definitions.
inline RealLinearPair drift_pair(const GklsModel& model) {
  const CMat& u = model.u;
  const CMat& v = model.v;
  CMat a1 = 0.5 * (u.transpose() * u.conjugate() - v.transpose() * v.conjugate()) +
            kI * model.omega;
  CMat a2 = 0.5 * (u.transpose() * v - v.transpose() * u) + kI * model.kappa;
  return {std::move(a1), std::move(a2)};
}

inline RealLinearPair diffusion_pair(const GklsModel& model) {
  const CMat& u = model.u;
  const CMat& v = model.v;
  return {u.transpose() * u.conjugate() + v.transpose() * v.conjugate(),
          u.transpose() * v + v.transpose() * u};
}

/// sqrt(C) z = conj(U) z + V conj(z), an m x d real-linear map with C = sqrt(C)^T sqrt(C).
inline RealLinearPair sqrt_diffusion_pair(const GklsModel& model) {
  return {model.u.conjugate(), model.v};
}

/// M = [U + conj(V), -i (U - conj(V))], so that C_Z = M* M.
inline CMat kraus_factor(const GklsModel& model) {
  const CMat plus = model.u + model.v.conjugate();
  const CMat minus = model.u - model.v.conjugate();
  CMat out(model.m, 2 * model.d);
  out.leftCols(model.d) = plus;
  out.rightCols(model.d) = -kI * minus;
  return out;
}

/// C_Z = R(C) - i (R(Z)^T J + J R(Z)).
inline CMat assemble_cz(const RMat& z2d, const RMat& c2d) {
  const Index n = z2d.rows();
  const RMat j = symplectic_matrix(n / 2);
  const RMat skew = z2d.transpose() * j + j * z2d;
  return c2d.cast<cplx>() - kI * skew.cast<cplx>();
}

namespace block_formula {

inline CMat hermitian_product(const CMat& a, const CMat& b) { return a.adjoint() * b; }

/// Realization of Z from (U + conj V), (U - conj V) and the Hamiltonian blocks.
inline RMat drift(const GklsModel& model) {
  const Index d = model.d;
  const CMat p = model.u + model.v.conjugate();
  const CMat q = model.u - model.v.conjugate();
  const CMat sum = model.omega + model.kappa;
  const CMat diff = model.kappa - model.omega;
  RMat out(2 * d, 2 * d);
  out.topLeftCorner(d, d) = 0.5 * hermitian_product(q, p).real() - sum.imag();
  out.topRightCorner(d, d) = 0.5 * hermitian_product(q, q).imag() + diff.real();
  out.bottomLeftCorner(d, d) = -0.5 * hermitian_product(p, p).imag() + sum.real();
  out.bottomRightCorner(d, d) = 0.5 * hermitian_product(p, q).real() + diff.imag();
  return out;
}

inline RMat diffusion(const GklsModel& model) {
  const Index d = model.d;
  const CMat p = model.u + model.v.conjugate();
  const CMat q = model.u - model.v.conjugate();
  RMat out(2 * d, 2 * d);
  out.topLeftCorner(d, d) = hermitian_product(p, p).real();
  out.topRightCorner(d, d) = hermitian_product(p, q).imag();
  out.bottomLeftCorner(d, d) = -hermitian_product(q, p).imag();
  out.bottomRightCorner(d, d) = hermitian_product(q, q).real();
  return out;
}

inline CMat cz(const GklsModel& model) {
  const Index d = model.d;
  const CMat p = model.u + model.v.conjugate();
  const CMat q = model.u - model.v.conjugate();
  CMat out(2 * d, 2 * d);
  out.topLeftCorner(d, d) = hermitian_product(p, p);
  out.topRightCorner(d, d) = -kI * hermitian_product(p, q);
  out.bottomLeftCorner(d, d) = kI * hermitian_product(q, p);
  out.bottomRightCorner(d, d) = hermitian_product(q, q);
  return out;
}

}  // namespace block_formula

struct DriftDiffusion {
  RealLinearPair z_pair;
  RealLinearPair c_pair;
  RMat z2d;  // R(Z)
  RMat c2d;  // R(C)
  CMat cz;   // C_Z, Hermitian PSD
  RVec cz_eigenvalues;
  double cz_min_eig = 0.0;
  /// Largest disagreement between the definition and the block formulas.
  double block_formula_residual = 0.0;

  Index d() const noexcept { return z2d.rows() / 2; }
};

inline DriftDiffusion build_drift_diffusion(const GklsModel& model) {
  require_valid(model);
  DriftDiffusion dd;
  dd.z_pair = drift_pair(model);
  dd.c_pair = diffusion_pair(model);
  dd.z2d = realize(dd.z_pair);
  dd.c2d = realize(dd.c_pair);
  dd.cz = assemble_cz(dd.z2d, dd.c2d);

  const double rz = (dd.z2d - block_formula::drift(model)).cwiseAbs().maxCoeff();
  const double rc = (dd.c2d - block_formula::diffusion(model)).cwiseAbs().maxCoeff();
  const double rcz = (dd.cz - block_formula::cz(model)).cwiseAbs().maxCoeff();
  dd.block_formula_residual = std::max({rz, rc, rcz});
  const double tol = 1e-12 * std::max({1.0, linalg::scale(dd.z2d), linalg::scale(dd.c2d)});
  if (dd.block_formula_residual > tol) {
    throw Error(ErrorCode::RouteMismatch,
                "definition and block formula disagree by " +
                    std::to_string(dd.block_formula_residual));
  }

  Eigen::SelfAdjointEigenSolver<CMat> es(linalg::hermitian_part(dd.cz), Eigen::EigenvaluesOnly);
  dd.cz_eigenvalues = es.eigenvalues();
  dd.cz_min_eig = dd.cz_eigenvalues.minCoeff();
  return dd;
}

/// True iff C_Z is positive definite, i.e. there are 2d independent Kraus operators.
inline bool kraus_rank_full(const DriftDiffusion& dd) {
  const double top = dd.cz_eigenvalues.cwiseAbs().maxCoeff();
  return top > 0.0 && dd.cz_min_eig > 1e-10 * top;
}

/// The one-mode family L1 = mu a, L2 = lambda a^+, H = Omega a^+a + kappa (a^+^2 + a^2)/2.
/// L2 is dropped when lambda2 == 0 so the Kraus operators stay independent.
inline GklsModel one_dim_model(double mu2, double lambda2, double omega, double kappa) {
  if (!(mu2 >= 0.0) || !(lambda2 >= 0.0) || !std::isfinite(mu2) || !std::isfinite(lambda2) ||
      !std::isfinite(omega) || !std::isfinite(kappa)) {
    throw Error(ErrorCode::InvalidArgument, "mu2 and lambda2 must be finite and >= 0");
  }
  GklsModel model;
  model.d = 1;
  model.m = lambda2 > 0.0 ? 2 : 1;
  model.omega = CMat::Constant(1, 1, omega);
  model.kappa = CMat::Constant(1, 1, kappa);
  model.zeta = CVec::Zero(1);
  model.u = CMat::Zero(model.m, 1);
  model.v = CMat::Zero(model.m, 1);
  model.v(0, 0) = std::sqrt(mu2);
  if (model.m == 2) model.u(1, 0) = std::sqrt(lambda2);
  return model;
}

}  // namespace gaussgap
