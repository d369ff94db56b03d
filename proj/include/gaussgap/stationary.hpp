#pragma once

// Invariant Gaussian state: stability of Z, Lyapunov solve, Williamson
// normal form and the KMS covariance.

#include <algorithm>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "gaussgap/error.hpp"
#include "gaussgap/linalg.hpp"
#include "gaussgap/model.hpp"
#include "gaussgap/realops.hpp"

namespace gaussgap {

struct StabilityInfo {
  bool stable = false;
  double abscissa = 0.0;  // max Re of the spectrum of R(Z)
  CVec eigenvalues;       // sorted by descending real part, then imaginary part
};

inline StabilityInfo is_stable(const RMat& z2d) {
  Eigen::EigenSolver<RMat> es(z2d, false);
  StabilityInfo info;
  CVec ev = es.eigenvalues();
  std::vector<cplx> sorted(ev.data(), ev.data() + ev.size());
  std::sort(sorted.begin(), sorted.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  info.eigenvalues = Eigen::Map<CVec>(sorted.data(), static_cast<Index>(sorted.size()));
  info.abscissa = sorted.empty() ? 0.0 : sorted.front().real();
  info.stable = info.abscissa < -1e-12 * std::max(1.0, linalg::scale(z2d));
  return info;
}

inline StabilityInfo is_stable(const DriftDiffusion& dd) { return is_stable(dd.z2d); }

/// Solves A^T S + S A = -C by vectorization; S is symmetrized on return.
inline RMat solve_lyapunov(const RMat& a, const RMat& c) {
  const Index n = a.rows();
  const RMat id = RMat::Identity(n, n);
  const RMat at = a.transpose();
  const RMat big = Eigen::kroneckerProduct(id, at) + Eigen::kroneckerProduct(at, id);
  Eigen::PartialPivLU<RMat> lu(big);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14)) {
    throw Error(ErrorCode::SingularLyapunov,
                "Lyapunov operator is numerically singular (rcond " + std::to_string(rcond) + ")");
  }
  const RVec rhs = -Eigen::Map<const RVec>(c.data(), c.size());
  const RVec sol = lu.solve(rhs);
  RMat s = Eigen::Map<const RMat>(sol.data(), n, n);
  return 0.5 * (s + s.transpose());
}

struct Williamson {
  RMat sympl_m;  // M^T J M = J, M^T diag(sigma, sigma) M = S
  RVec sigma;    // ascending
};

/// Williamson normal form from the Hermitian eigenproblem of i S^1/2 J S^1/2.
/// For an eigenvector x + iy of eigenvalue sigma > 0 the columns q = sqrt2 x,
/// p = -sqrt2 y form an orthonormal basis O with O^T K O = [0, D; -D, 0].
inline Williamson williamson(const RMat& s2d) {
  const Index n = s2d.rows();
  if (n % 2 != 0 || s2d.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "covariance must be 2d x 2d");
  }
  const Index d = n / 2;
  const auto roots = linalg::pd_roots(RMat(0.5 * (s2d + s2d.transpose())));
  const RMat j = symplectic_matrix(d);
  const RMat k = roots.sqrt * j * roots.sqrt;
  const CMat herm = kI * k.cast<cplx>();
  Eigen::SelfAdjointEigenSolver<CMat> es(linalg::hermitian_part(herm));
  // Eigenvalues come in +-sigma pairs, ascending: the positive half is the tail.
  Williamson w;
  w.sigma = es.eigenvalues().tail(d);
  RMat o(n, n);
  for (Index i = 0; i < d; ++i) {
    const CVec v = linalg::fix_phase(es.eigenvectors().col(d + i));
    o.col(i) = std::sqrt(2.0) * v.real();
    o.col(d + i) = -std::sqrt(2.0) * v.imag();
  }
  RVec dinv(n);
  dinv << w.sigma.cwiseSqrt().cwiseInverse(), w.sigma.cwiseSqrt().cwiseInverse();
  w.sympl_m = dinv.asDiagonal() * o.transpose() * roots.sqrt;
  return w;
}

struct KmsCovariance {
  RMat s_breve;
  RVec nu;
};

inline KmsCovariance kms_covariance(const RMat& sympl_m, const RVec& sigma) {
  for (Index i = 0; i < sigma.size(); ++i) {
    if (!(sigma(i) > 1.0)) {
      throw Error(ErrorCode::NotFaithful,
                  "symplectic eigenvalue " + std::to_string(sigma(i)) + " <= 1");
    }
  }
  KmsCovariance out;
  out.nu = (sigma.array().square() - 1.0).sqrt().matrix();
  RVec dn(2 * sigma.size());
  dn << out.nu, out.nu;
  out.s_breve = sympl_m.transpose() * dn.asDiagonal() * sympl_m;
  out.s_breve = 0.5 * (out.s_breve + out.s_breve.transpose());
  return out;
}

struct StationaryData {
  CVec mu;
  RMat s2d;
  CMat s_tilde;
  double s_tilde_min_eig = 0.0;
  double det_s_tilde = 0.0;
  bool faithful = false;
  /// Invariant state is unique when Z is stable and C_Z is positive definite.
  bool unique = false;
  RMat sympl_m;
  RVec sigma;
  RMat s_breve;  // empty unless faithful
  RVec nu;       // empty unless faithful
  double lyapunov_residual = 0.0;
  double williamson_residual = 0.0;
  double symplectic_residual = 0.0;
};

/// Mean is the real-linear solution of Z# mu = zeta, i.e. R(Z)^T [Re mu; Im mu] = [Re zeta; Im zeta].
inline StationaryData solve_stationary(const DriftDiffusion& dd, const CVec& zeta) {
  const auto stab = is_stable(dd);
  if (!stab.stable) {
    throw Error(ErrorCode::Unstable,
                "drift has spectral abscissa " + std::to_string(stab.abscissa));
  }
  const Index d = dd.d();
  if (zeta.size() != d) throw Error(ErrorCode::DimensionMismatch, "zeta length");

  StationaryData st;
  st.mu = to_complex(dd.z2d.transpose().partialPivLu().solve(to_real(zeta)));
  st.s2d = solve_lyapunov(dd.z2d, dd.c2d);
  st.lyapunov_residual =
      (dd.z2d.transpose() * st.s2d + st.s2d * dd.z2d + dd.c2d).cwiseAbs().maxCoeff();

  const RMat j = symplectic_matrix(d);
  st.s_tilde = st.s2d.cast<cplx>() + kI * j.cast<cplx>();
  Eigen::SelfAdjointEigenSolver<CMat> es(st.s_tilde, Eigen::EigenvaluesOnly);
  st.s_tilde_min_eig = es.eigenvalues().minCoeff();
  st.det_s_tilde = es.eigenvalues().prod();

  const auto w = williamson(st.s2d);
  st.sympl_m = w.sympl_m;
  st.sigma = w.sigma;
  RVec ds(2 * d);
  ds << w.sigma, w.sigma;
  st.williamson_residual =
      (w.sympl_m.transpose() * ds.asDiagonal() * w.sympl_m - st.s2d).cwiseAbs().maxCoeff();
  st.symplectic_residual = (w.sympl_m.transpose() * j * w.sympl_m - j).cwiseAbs().maxCoeff();

  st.faithful = w.sigma.minCoeff() > 1.0 + 1e-12;
  st.unique = kraus_rank_full(dd);
  if (st.faithful) {
    auto kms = kms_covariance(w.sympl_m, w.sigma);
    st.s_breve = std::move(kms.s_breve);
    st.nu = std::move(kms.nu);
  }
  return st;
}

}  // namespace gaussgap
