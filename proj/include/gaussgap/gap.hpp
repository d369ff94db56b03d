#pragma once

// Spectral gaps in the GNS and KMS embeddings, the 1D closed forms, and the
// diagnosis returned when a model has no gap.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "gaussgap/error.hpp"
#include "gaussgap/linalg.hpp"
#include "gaussgap/model.hpp"
#include "gaussgap/stationary.hpp"

namespace gaussgap {

/// lambda_max(y + y*): the best omega with ||e^{ty} v||^2 <= e^{t omega} ||v||^2.
inline double optimal_growth_rate(const CMat& y) {
  Eigen::SelfAdjointEigenSolver<CMat> es(linalg::hermitian_part(CMat(y + y.adjoint())),
                                         Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

inline double optimal_growth_rate(const RMat& y) {
  Eigen::SelfAdjointEigenSolver<RMat> es(RMat(y + y.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

struct GnsGap {
  double omega0 = 0.0;
  double g = 0.0;
  double omega0_route_cz = 0.0;  // -lambda_min(S~^-1/2 C_Z S~^-1/2)
  double route_gap = 0.0;
  double dissipative_residual = 0.0;
  CVec witness;  // unit eigenvector of Y + Y* for omega0
  bool has_gap = false;
  CMat s_tilde_sqrt;
  CMat s_tilde_inv_sqrt;
};

inline linalg::PdRoots<CMat> s_tilde_roots(const StationaryData& st) {
  try {
    return linalg::pd_roots(linalg::hermitian_part(st.s_tilde));
  } catch (const Error&) {
    throw Error(ErrorCode::NotFaithful, "S + iJ is not positive definite");
  }
}

inline GnsGap gns_gap(const DriftDiffusion& dd, const StationaryData& st) {
  if (!is_stable(dd).stable) throw Error(ErrorCode::Unstable, "drift is not stable");
  const auto roots = s_tilde_roots(st);
  const CMat zc = dd.z2d.cast<cplx>();

  GnsGap out;
  out.s_tilde_sqrt = roots.sqrt;
  out.s_tilde_inv_sqrt = roots.inv_sqrt;
  const CMat y = roots.sqrt * zc * roots.inv_sqrt;
  const CMat sym = linalg::hermitian_part(CMat(y + y.adjoint()));
  Eigen::SelfAdjointEigenSolver<CMat> es(sym);
  const Index top = sym.rows() - 1;
  out.omega0 = es.eigenvalues()(top);
  out.witness = linalg::fix_phase(es.eigenvectors().col(top).normalized());

  const CMat w = linalg::hermitian_part(CMat(roots.inv_sqrt * dd.cz * roots.inv_sqrt));
  Eigen::SelfAdjointEigenSolver<CMat> es2(w, Eigen::EigenvaluesOnly);
  out.omega0_route_cz = -es2.eigenvalues()(0);
  out.route_gap = std::abs(out.omega0 - out.omega0_route_cz);
  out.dissipative_residual = (sym + w).cwiseAbs().maxCoeff();
  if (out.route_gap > 1e-10 * std::max(1.0, std::abs(out.omega0))) {
    throw Error(ErrorCode::RouteMismatch,
                "omega0 routes disagree by " + std::to_string(out.route_gap));
  }

  out.has_gap = kraus_rank_full(dd);
  out.g = out.has_gap ? -0.5 * out.omega0 : 0.0;
  return out;
}

struct KmsGap {
  double omega0_breve = 0.0;
  double g_breve = 0.0;
  RVec witness;
  double kernel_min_eig = 0.0;  // lambda_min of -(Z^T S~ + S~ Z) with S~ = S-breve
  bool kernel_nonsingular = false;
  RMat s_breve_sqrt;
  RMat s_breve_inv_sqrt;
};

inline KmsGap kms_gap(const DriftDiffusion& dd, const StationaryData& st) {
  if (!st.faithful || st.s_breve.size() == 0) {
    throw Error(ErrorCode::NotFaithful, "KMS gap needs a faithful invariant state");
  }
  linalg::PdRoots<RMat> roots;
  try {
    roots = linalg::pd_roots(st.s_breve);
  } catch (const Error&) {
    throw Error(ErrorCode::NotFaithful, "KMS covariance is not positive definite");
  }
  KmsGap out;
  out.s_breve_sqrt = roots.sqrt;
  out.s_breve_inv_sqrt = roots.inv_sqrt;
  const RMat y = roots.sqrt * dd.z2d * roots.inv_sqrt;
  const RMat b = y + y.transpose();
  Eigen::SelfAdjointEigenSolver<RMat> es(b);
  const Index top = b.rows() - 1;
  out.omega0_breve = es.eigenvalues()(top);
  out.g_breve = -0.5 * out.omega0_breve;
  out.witness = linalg::fix_sign(es.eigenvectors().col(top).normalized());

  const RMat kb = -(dd.z2d.transpose() * st.s_breve + st.s_breve * dd.z2d);
  Eigen::SelfAdjointEigenSolver<RMat> ek(0.5 * (kb + kb.transpose()), Eigen::EigenvaluesOnly);
  out.kernel_min_eig = ek.eigenvalues()(0);
  out.kernel_nonsingular =
      out.kernel_min_eig > 1e-10 * std::max(1.0, ek.eigenvalues().cwiseAbs().maxCoeff());
  return out;
}

struct OneDimClosedForms {
  double gamma = 0.0;
  double g = 0.0;
  double g_breve = 0.0;
  double sigma = 0.0;
  bool exists_faithful = false;
};

/// Closed forms for L1 = mu a, L2 = lambda a^+, H = Omega a^+a + kappa (a^+^2 + a^2)/2.
inline OneDimClosedForms one_dim_closed_forms(double mu2, double lambda2, double omega,
                                              double kappa) {
  OneDimClosedForms out;
  const double gamma = 0.5 * (mu2 - lambda2);
  out.gamma = gamma;
  const double g2 = gamma * gamma;
  const double w2 = omega * omega;
  const double k2 = kappa * kappa;
  if (!(gamma > 0.0) || !(g2 + w2 - k2 > 0.0)) {
    throw Error(ErrorCode::NoFaithfulState,
                "one-mode model has no faithful invariant state (gamma^2 + Omega^2 - kappa^2 <= 0 "
                "or gamma <= 0)");
  }
  const double ak = std::abs(kappa);
  out.sigma = (mu2 + lambda2) / (2.0 * gamma) * std::sqrt((g2 + w2) / (g2 + w2 - k2));
  out.exists_faithful = out.sigma > 1.0 + 1e-12;
  // kappa = 0 would give 0/0 at lambda = 0; the limit is gamma.
  out.g = ak == 0.0 ? gamma
                    : gamma * (1.0 - ak * (mu2 + lambda2) /
                                         (2.0 * std::sqrt(mu2 * lambda2 * (g2 + w2) + g2 * k2)));
  out.g_breve = gamma * (1.0 - ak / std::sqrt(w2 + g2));
  return out;
}

enum class FindingKind { GapExists, Unstable, CZKernel };

inline const char* to_string(FindingKind k) {
  switch (k) {
    case FindingKind::GapExists: return "GapExists";
    case FindingKind::Unstable: return "Unstable";
    case FindingKind::CZKernel: return "CZKernel";
  }
  return "Unknown";
}

struct Finding {
  FindingKind kind = FindingKind::GapExists;
  /// Unstable only: 1 when the invariant real plane of the eigenvector lies in
  /// ker R(C) (undamped oscillation), 2 otherwise (diverging covariance).
  int case_tag = 0;
  cplx eigenvalue{0.0, 0.0};
  CVec vector;  // eigenvector of R(Z) (Unstable) or unit kernel vector of C_Z (CZKernel)
  double residual = 0.0;
};

namespace detail {

/// Orthonormal basis of the smallest R(Z)-invariant subspace containing `seed`.
inline RMat krylov_closure(const RMat& z2d, const RMat& seed) {
  const Index n = z2d.rows();
  RMat span = seed;
  Index rank = 0;
  RMat basis;
  for (Index it = 0; it <= n; ++it) {
    Eigen::JacobiSVD<RMat> svd(span, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    Index r = 0;
    for (Index i = 0; i < s.size(); ++i) {
      if (s(0) > 0.0 && s(i) > 1e-8 * s(0)) ++r;
    }
    basis = svd.matrixU().leftCols(r);
    if (r == rank) break;
    rank = r;
    RMat next(n, 2 * r);
    next << basis, z2d * basis;
    span = next;
  }
  return basis;
}

}  // namespace detail

inline Finding no_gap_diagnosis(const DriftDiffusion& dd) {
  Finding f;
  const Index n = dd.z2d.rows();
  const double ztol = 1e-12 * std::max(1.0, linalg::scale(dd.z2d));

  Eigen::EigenSolver<RMat> es(dd.z2d);
  Index best = 0;
  for (Index i = 1; i < n; ++i) {
    const cplx a = es.eigenvalues()(i), b = es.eigenvalues()(best);
    if (a.real() > b.real() || (a.real() == b.real() && a.imag() > b.imag())) best = i;
  }
  const cplx lam = es.eigenvalues()(best);
  if (lam.real() >= -ztol) {
    f.kind = FindingKind::Unstable;
    f.eigenvalue = lam;
    f.vector = linalg::fix_phase(es.eigenvectors().col(best).normalized());
    f.residual = (dd.z2d.cast<cplx>() * f.vector - lam * f.vector).norm();
    RMat seed(n, 2);
    seed << f.vector.real(), f.vector.imag();
    const RMat basis = detail::krylov_closure(dd.z2d, seed);
    const double leak = (dd.c2d * basis).cwiseAbs().maxCoeff();
    f.case_tag = leak <= 1e-10 * std::max(1.0, linalg::scale(dd.c2d)) ? 1 : 2;
    return f;
  }
  if (!kraus_rank_full(dd)) {
    Eigen::SelfAdjointEigenSolver<CMat> ec(linalg::hermitian_part(dd.cz));
    f.kind = FindingKind::CZKernel;
    f.eigenvalue = ec.eigenvalues()(0);
    f.vector = linalg::fix_phase(ec.eigenvectors().col(0).normalized());
    f.residual = (dd.cz * f.vector).norm();
    return f;
  }
  return f;
}

/// Everything the gap module knows about one model.
struct GapReport {
  StabilityInfo stability;
  std::optional<StationaryData> stationary;
  std::optional<GnsGap> gns;
  std::optional<KmsGap> kms;
  Finding finding;
  bool has_gns_gap = false;
  std::vector<std::string> diagnostics;
  /// Reason codes for the optional blocks that could not be computed.
  std::string stationary_unavailable;
  std::string gns_unavailable;
  std::string kms_unavailable;
};

inline GapReport analyze_gaps(const DriftDiffusion& dd, const CVec& zeta) {
  GapReport rep;
  rep.stability = is_stable(dd);
  rep.finding = no_gap_diagnosis(dd);
  if (!rep.stability.stable) {
    rep.stationary_unavailable = rep.gns_unavailable = rep.kms_unavailable =
        std::string(to_string(ErrorCode::Unstable));
    rep.diagnostics.push_back("Unstable: case " + std::to_string(rep.finding.case_tag));
    return rep;
  }
  try {
    rep.stationary = solve_stationary(dd, zeta);
  } catch (const Error& e) {
    rep.stationary_unavailable = rep.gns_unavailable = rep.kms_unavailable =
        std::string(to_string(e.code()));
    rep.diagnostics.push_back(e.what());
    return rep;
  }
  try {
    rep.gns = gns_gap(dd, *rep.stationary);
    rep.has_gns_gap = rep.gns->has_gap;
  } catch (const Error& e) {
    rep.gns_unavailable = std::string(to_string(e.code()));
    rep.diagnostics.push_back(e.what());
  }
  if (rep.finding.kind == FindingKind::CZKernel) {
    rep.diagnostics.push_back("CZKernel: C_Z is singular, no GNS spectral gap");
  }
  try {
    rep.kms = kms_gap(dd, *rep.stationary);
    if (!rep.kms->kernel_nonsingular) {
      rep.diagnostics.push_back(
          "KmsKernelSingular: -(Z^T S_breve + S_breve Z) is not positive definite");
    }
  } catch (const Error& e) {
    rep.kms_unavailable = std::string(to_string(e.code()));
    rep.diagnostics.push_back(e.what());
  }
  return rep;
}

}  // namespace gaussgap
