#pragma once

// Restriction of a real-coefficient Gaussian semigroup to the position algebra
// (an Ornstein-Uhlenbeck generator) and the lift back.
//
// Generator: (Lf)(q) = 1/2 sum Q_jk d_j d_k f + sum A_jk q_j d_k f.

#include <cmath>

#include "gaussgap/error.hpp"
#include "gaussgap/linalg.hpp"
#include "gaussgap/model.hpp"

namespace gaussgap {

struct OuGenerator {
  RMat q_mat;
  RMat a_mat;
};

namespace detail {

inline bool is_real(const CMat& m, double tol = 1e-14) {
  return m.size() == 0 || m.imag().cwiseAbs().maxCoeff() <= tol;
}

}  // namespace detail

/// Position variables are the imaginary directions z = i q; H must commute with
/// every q_j, which for this Hamiltonian means kappa = Omega real and zeta real.
inline OuGenerator restrict_to_ou(const GklsModel& model) {
  require_valid(model);
  if (!detail::is_real(model.u) || !detail::is_real(model.v)) {
    throw Error(ErrorCode::NotRealCoefficients, "U and V must be real");
  }
  const double htol = 1e-14 * std::max(1.0, linalg::scale(model.omega));
  const bool ham_ok = detail::is_real(model.omega) && detail::is_real(model.kappa) &&
                      detail::is_real(CMat(model.zeta)) &&
                      (model.kappa - model.omega).cwiseAbs().maxCoeff() <= htol;
  if (!ham_ok) {
    throw Error(ErrorCode::NonCommutingHamiltonian,
                "H commutes with the positions only when kappa = Omega is real and zeta is real");
  }
  const RMat x = (model.v.real() - model.u.real()) / std::sqrt(2.0);
  const RMat r = (model.v.real() + model.u.real()) / std::sqrt(2.0);
  OuGenerator ou;
  ou.q_mat = x.transpose() * x;
  ou.a_mat = -r.transpose() * x;
  return ou;
}

inline GklsModel lift_from_ou(const OuGenerator& ou) {
  const Index d = ou.q_mat.rows();
  if (ou.q_mat.cols() != d || ou.a_mat.rows() != d || ou.a_mat.cols() != d || d == 0) {
    throw Error(ErrorCode::DimensionMismatch, "Q and A must be d x d");
  }
  if ((ou.q_mat - ou.q_mat.transpose()).cwiseAbs().maxCoeff() >
      1e-12 * std::max(1.0, linalg::scale(ou.q_mat))) {
    throw Error(ErrorCode::NotSymmetric, "Q must be symmetric");
  }
  linalg::PdRoots<RMat> roots;
  try {
    roots = linalg::pd_roots(ou.q_mat, 1e-12);
  } catch (const Error&) {
    throw Error(ErrorCode::DegenerateDiffusion, "Q is singular; degenerate lifts are not supported");
  }
  const RMat x = roots.sqrt;
  const RMat r = -x.transpose().partialPivLu().solve(ou.a_mat.transpose());
  GklsModel model;
  model.d = d;
  model.m = d;
  model.omega = CMat::Zero(d, d);
  model.kappa = CMat::Zero(d, d);
  model.zeta = CVec::Zero(d);
  model.u = ((r - x) / std::sqrt(2.0)).cast<cplx>();
  model.v = ((r + x) / std::sqrt(2.0)).cast<cplx>();
  return model;
}

/// L^2(invariant measure) gap of a non-degenerate OU process: minus the
/// spectral abscissa of the drift.
inline double classical_gap(const OuGenerator& ou) {
  Eigen::EigenSolver<RMat> es(ou.a_mat, false);
  const double abscissa = es.eigenvalues().real().maxCoeff();
  if (!(abscissa < 0.0)) throw Error(ErrorCode::Unstable, "OU drift is not stable");
  return -abscissa;
}

}  // namespace gaussgap
