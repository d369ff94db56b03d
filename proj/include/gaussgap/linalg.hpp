#pragma once

// Dense helpers shared by every module. Everything here is small (n <= 2*16)
// except the Fock-space matrices, which never go through these helpers.

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "gaussgap/error.hpp"

namespace gaussgap {

using Index = Eigen::Index;
using cplx = std::complex<double>;
using RMat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;

inline constexpr cplx kI{0.0, 1.0};

namespace linalg {

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

/// Spectral (2-)norm surrogate used for relative tolerances.
template <typename Derived>
double scale(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline RMat expm(const RMat& a) { return a.exp(); }
inline CMat expm(const CMat& a) { return a.exp(); }

/// Multiply by a unit phase so the largest-modulus entry is real and positive.
inline CVec fix_phase(CVec v) {
  if (v.size() == 0) return v;
  Index best = 0;
  for (Index i = 1; i < v.size(); ++i) {
    // Ties keep the lowest index; the 1e-12 slack stops noise from flipping it.
    if (std::abs(v(i)) > std::abs(v(best)) * (1.0 + 1e-12)) best = i;
  }
  const double mod = std::abs(v(best));
  if (mod > 0.0) v *= std::conj(v(best)) / mod;
  return v;
}

inline RVec fix_sign(RVec v) {
  if (v.size() == 0) return v;
  Index best = 0;
  for (Index i = 1; i < v.size(); ++i) {
    if (std::abs(v(i)) > std::abs(v(best)) * (1.0 + 1e-12)) best = i;
  }
  if (v(best) < 0.0) v = -v;
  return v;
}

/// exp(z) - 1 without cancellation for small |z|.
inline cplx expm1(cplx z) {
  const double a = z.real();
  const double b = z.imag();
  const double sh = std::sin(0.5 * b);
  const double re = std::expm1(a) * std::cos(b) - 2.0 * sh * sh;
  const double im = std::exp(a) * std::sin(b);
  return {re, im};
}

/// Principal square root and inverse square root of a Hermitian (or real
/// symmetric) positive definite matrix. Eigenvalues below
/// floor_rel * lambda_max raise NotPositiveDefinite instead of being clipped.
template <typename MatrixType>
struct PdRoots {
  MatrixType sqrt;
  MatrixType inv_sqrt;
  double min_eig = 0.0;
  double max_eig = 0.0;
};

template <typename MatrixType>
PdRoots<MatrixType> pd_roots(const MatrixType& a, double floor_rel = 1e-13) {
  Eigen::SelfAdjointEigenSolver<MatrixType> es(a);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::NotPositiveDefinite, "eigensolver failed");
  }
  const auto& ev = es.eigenvalues();
  PdRoots<MatrixType> out;
  out.min_eig = ev.minCoeff();
  out.max_eig = ev.maxCoeff();
  if (!(out.max_eig > 0.0) || out.min_eig < floor_rel * out.max_eig) {
    throw Error(ErrorCode::NotPositiveDefinite,
                "smallest eigenvalue " + std::to_string(out.min_eig) + " below floor");
  }
  const auto& vecs = es.eigenvectors();
  out.sqrt = vecs * ev.cwiseSqrt().asDiagonal() * vecs.adjoint();
  out.inv_sqrt = vecs * ev.cwiseSqrt().cwiseInverse().asDiagonal() * vecs.adjoint();
  return out;
}

template <typename MatrixType>
MatrixType hermitian_part(const MatrixType& a) {
  return 0.5 * (a + a.adjoint());
}

/// Numerical rank with the threshold tol_rel * sigma_max.
template <typename MatrixType>
Index numerical_rank(const MatrixType& a, double tol_rel = 1e-10) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<MatrixType> svd(a);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  Index r = 0;
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) > tol_rel * s(0)) ++r;
  }
  return r;
}

}  // namespace linalg
}  // namespace gaussgap
