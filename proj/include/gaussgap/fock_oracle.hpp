#pragma once

// Truncated Fock-space oracle. Everything here is brute force on dense
// matrices; it shares no code path with the Gaussian formulas beyond the model
// parameters.
//
// Basis: |n_1, ..., n_d>, n_j <= N, mode 1 most significant. Densities are
// vectorized by column stacking, vec(A X B) = (B^T kron A) vec(X).

#include <cmath>
#include <string>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "gaussgap/error.hpp"
#include "gaussgap/linalg.hpp"
#include "gaussgap/model.hpp"

namespace gaussgap::fock {

inline constexpr Index kMaxDim = 4096;
inline constexpr Index kMaxSuperDim = 64;  // superoperator side is dim^2 <= 4096

struct TruncatedSpace {
  Index d = 0;
  Index cutoff = 0;
  Index dim = 0;
  std::vector<CMat> a;
  std::vector<CMat> adag;
  std::vector<CMat> q;
  std::vector<CMat> p;
  /// Occupation of mode j in basis state k.
  std::vector<std::vector<Index>> occupation;
};

inline CMat single_mode_annihilation(Index cutoff) {
  CMat a = CMat::Zero(cutoff + 1, cutoff + 1);
  for (Index n = 1; n <= cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

/// I (x) ... (x) op (x) ... (x) I with op in slot j.
inline CMat embed(const CMat& op, Index j, Index d) {
  const Index n1 = op.rows();
  CMat out = CMat::Identity(1, 1);
  for (Index k = 0; k < d; ++k) {
    const CMat factor = k == j ? op : CMat(CMat::Identity(n1, n1));
    out = Eigen::kroneckerProduct(out, factor).eval();
  }
  return out;
}

inline TruncatedSpace build_space(Index d, Index cutoff) {
  if (d < 1 || cutoff < 1) throw Error(ErrorCode::InvalidArgument, "need d >= 1 and cutoff >= 1");
  double dim = 1.0;
  for (Index j = 0; j < d; ++j) dim *= static_cast<double>(cutoff + 1);
  if (dim > static_cast<double>(kMaxDim)) {
    throw Error(ErrorCode::DimensionTooLarge,
                "(cutoff+1)^d = " + std::to_string(dim) + " exceeds " + std::to_string(kMaxDim));
  }
  TruncatedSpace sp;
  sp.d = d;
  sp.cutoff = cutoff;
  sp.dim = static_cast<Index>(dim);
  const CMat a1 = single_mode_annihilation(cutoff);
  for (Index j = 0; j < d; ++j) {
    sp.a.push_back(embed(a1, j, d));
    sp.adag.push_back(sp.a.back().adjoint());
    sp.q.push_back((sp.a[j] + sp.adag[j]) / std::sqrt(2.0));
    sp.p.push_back(kI * (sp.adag[j] - sp.a[j]) / std::sqrt(2.0));
  }
  sp.occupation.assign(d, std::vector<Index>(sp.dim));
  for (Index k = 0; k < sp.dim; ++k) {
    Index rest = k;
    for (Index j = d - 1; j >= 0; --j) {
      sp.occupation[j][k] = rest % (cutoff + 1);
      rest /= cutoff + 1;
    }
  }
  return sp;
}

struct FockOperators {
  CMat h;
  std::vector<CMat> l;
  CMat g;  // sum L* L
};

inline FockOperators build_operators(const GklsModel& model, const TruncatedSpace& sp) {
  require_valid(model);
  if (model.d != sp.d) throw Error(ErrorCode::DimensionMismatch, "space has wrong number of modes");
  const Index n = sp.dim;
  FockOperators ops;
  ops.h = CMat::Zero(n, n);
  for (Index j = 0; j < sp.d; ++j) {
    for (Index k = 0; k < sp.d; ++k) {
      ops.h += model.omega(j, k) * sp.adag[j] * sp.a[k];
      ops.h += 0.5 * model.kappa(j, k) * sp.adag[j] * sp.adag[k];
      ops.h += 0.5 * std::conj(model.kappa(j, k)) * sp.a[j] * sp.a[k];
    }
    ops.h += 0.5 * model.zeta(j) * sp.adag[j] + 0.5 * std::conj(model.zeta(j)) * sp.a[j];
  }
  ops.h = linalg::hermitian_part(ops.h);
  ops.g = CMat::Zero(n, n);
  for (Index l = 0; l < model.m; ++l) {
    CMat op = CMat::Zero(n, n);
    for (Index k = 0; k < sp.d; ++k) {
      op += std::conj(model.v(l, k)) * sp.a[k] + model.u(l, k) * sp.adag[k];
    }
    ops.g += op.adjoint() * op;
    ops.l.push_back(std::move(op));
  }
  return ops;
}

/// L_*(rho) = -i[H, rho] + sum L rho L* - 1/2 {L*L, rho}.
inline CMat apply_predual(const FockOperators& ops, const CMat& rho) {
  CMat out = -kI * (ops.h * rho - rho * ops.h) - 0.5 * (ops.g * rho + rho * ops.g);
  for (const auto& l : ops.l) out += l * rho * l.adjoint();
  return out;
}

/// L(x) = i[H, x] - 1/2 {L*L, x} + sum L* x L.
inline CMat apply_heisenberg(const FockOperators& ops, const CMat& x) {
  CMat out = kI * (ops.h * x - x * ops.h) - 0.5 * (ops.g * x + x * ops.g);
  for (const auto& l : ops.l) out += l.adjoint() * x * l;
  return out;
}

struct Superoperator {
  CMat predual;
  CMat heisenberg;
};

inline Superoperator build_superoperator(const FockOperators& ops) {
  const Index n = ops.h.rows();
  if (n > kMaxSuperDim) {
    throw Error(ErrorCode::DimensionTooLarge,
                "superoperator needs dim <= " + std::to_string(kMaxSuperDim));
  }
  const CMat id = CMat::Identity(n, n);
  const CMat ht = ops.h.transpose();
  const CMat gt = ops.g.transpose();
  Superoperator s;
  s.predual = -kI * (CMat(Eigen::kroneckerProduct(id, ops.h)) - CMat(Eigen::kroneckerProduct(ht, id))) -
              0.5 * (CMat(Eigen::kroneckerProduct(id, ops.g)) + CMat(Eigen::kroneckerProduct(gt, id)));
  s.heisenberg = kI * (CMat(Eigen::kroneckerProduct(id, ops.h)) - CMat(Eigen::kroneckerProduct(ht, id))) -
                 0.5 * (CMat(Eigen::kroneckerProduct(id, ops.g)) + CMat(Eigen::kroneckerProduct(gt, id)));
  for (const auto& l : ops.l) {
    s.predual += Eigen::kroneckerProduct(CMat(l.conjugate()), l);
    s.heisenberg += Eigen::kroneckerProduct(CMat(l.transpose()), CMat(l.adjoint()));
  }
  return s;
}

inline CVec vec(const CMat& m) { return Eigen::Map<const CVec>(m.data(), m.size()); }

inline CMat unvec(const CVec& v, Index n) { return Eigen::Map<const CMat>(v.data(), n, n); }

/// Null vector of the truncated predual generator, normalized to unit trace.
inline CMat stationary_density(const Superoperator& s, Index n) {
  CMat sys = s.predual;
  CVec rhs = CVec::Zero(n * n);
  for (Index c = 0; c < n * n; ++c) sys(0, c) = 0.0;
  for (Index i = 0; i < n; ++i) sys(0, i * n + i) = 1.0;
  rhs(0) = 1.0;
  const CVec sol = sys.partialPivLu().solve(rhs);
  return linalg::hermitian_part(unvec(sol, n));
}

/// prod_j (1 - q_j) q_j^{n_j}, q_j = nbar_j / (nbar_j + 1); not renormalized.
inline CMat thermal_density(const TruncatedSpace& sp, const RVec& nbar) {
  if (nbar.size() != sp.d) throw Error(ErrorCode::DimensionMismatch, "nbar length");
  RVec diag = RVec::Ones(sp.dim);
  for (Index j = 0; j < sp.d; ++j) {
    const double q = nbar(j) / (nbar(j) + 1.0);
    for (Index k = 0; k < sp.dim; ++k) {
      diag(k) *= (1.0 - q) * std::pow(q, static_cast<double>(sp.occupation[j][k]));
    }
  }
  return diag.cast<cplx>().asDiagonal();
}

/// W(z) = exp(z a^+ - conj(z) a), built per mode on a padded space and cropped.
inline CMat weyl_matrix(const TruncatedSpace& sp, const CVec& z, Index padding = 20) {
  if (z.size() != sp.d) throw Error(ErrorCode::DimensionMismatch, "z length");
  const Index big = sp.cutoff + padding;
  const CMat a = single_mode_annihilation(big);
  CMat out = CMat::Identity(1, 1);
  for (Index j = 0; j < sp.d; ++j) {
    const CMat gen = z(j) * a.adjoint() - std::conj(z(j)) * a;
    const CMat w = linalg::expm(gen).topLeftCorner(sp.cutoff + 1, sp.cutoff + 1);
    out = Eigen::kroneckerProduct(out, w).eval();
  }
  return out;
}

inline cplx oracle_char_fn(const TruncatedSpace& sp, const CMat& rho, const CVec& z) {
  return (rho * weyl_matrix(sp, z)).trace();
}

inline CMat psd_sqrt(const CMat& rho) {
  Eigen::SelfAdjointEigenSolver<CMat> es(linalg::hermitian_part(rho));
  const RVec ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

inline bool is_diagonal(const CMat& rho, double tol = 1e-12) {
  const CMat off = rho - CMat(rho.diagonal().asDiagonal());
  return off.cwiseAbs().maxCoeff() <= tol * std::max(1.0, rho.cwiseAbs().maxCoeff());
}

struct KmsTrace {
  cplx value;
  bool diagonal_density = true;  // false: outside the validated envelope
};

inline KmsTrace oracle_kms_trace(const TruncatedSpace& sp, const CMat& rho, const CVec& z,
                                 const CVec& w) {
  const CMat r = psd_sqrt(rho);
  KmsTrace out;
  out.diagonal_density = is_diagonal(rho);
  out.value = (r * weyl_matrix(sp, z) * r * weyl_matrix(sp, w)).trace();
  return out;
}

/// Mean and covariance of rho in the convention tr(rho W(z)) =
/// exp(-i <mu_r, x> - 1/2 x^T S x), x = [Re z; Im z]. With
/// W(z) = exp(i x^T Phi), Phi = sqrt2 [-p; q].
inline std::pair<CVec, RMat> moments(const TruncatedSpace& sp, const CMat& rho) {
  const Index d = sp.d;
  std::vector<CMat> phi;
  for (Index j = 0; j < d; ++j) phi.push_back(-std::sqrt(2.0) * sp.p[j]);
  for (Index j = 0; j < d; ++j) phi.push_back(std::sqrt(2.0) * sp.q[j]);
  RVec mean(2 * d);
  for (Index a = 0; a < 2 * d; ++a) mean(a) = (rho * phi[a]).trace().real();
  RMat cov(2 * d, 2 * d);
  for (Index a = 0; a < 2 * d; ++a) {
    for (Index b = 0; b < 2 * d; ++b) {
      const cplx e = (rho * (phi[a] * phi[b] + phi[b] * phi[a])).trace();
      cov(a, b) = 0.5 * e.real() - mean(a) * mean(b);
    }
  }
  RVec mu_r = -mean;
  CVec mu(d);
  mu.real() = mu_r.head(d);
  mu.imag() = mu_r.tail(d);
  return {mu, cov};
}

/// Largest entry of L_*(rho) touching the top occupation of any mode.
inline double leakage(const TruncatedSpace& sp, const CMat& lrho) {
  double out = 0.0;
  for (Index r = 0; r < sp.dim; ++r) {
    for (Index c = 0; c < sp.dim; ++c) {
      bool top = false;
      for (Index j = 0; j < sp.d; ++j) {
        top = top || sp.occupation[j][r] == sp.cutoff || sp.occupation[j][c] == sp.cutoff;
      }
      if (top) out = std::max(out, std::abs(lrho(r, c)));
    }
  }
  return out;
}

enum class OracleMode { GNS, KMS };

struct OracleGap {
  double gap = 0.0;
  double nbar = 0.0;
  Index trial_levels = 0;
};

/// Gap of the embedded generator restricted to operators orthogonal to 1, from
/// the Rayleigh quotient on matrix units E_ij with i, j <= N - 2 (where the
/// truncated generator acts exactly). Values decrease toward the true gap as N
/// grows. Envelope: d = 1, kappa = 0, zeta = 0, every Kraus operator a
/// multiple of a or of a^+.
inline OracleGap oracle_gap(const GklsModel& model, const TruncatedSpace& sp, OracleMode mode) {
  require_valid(model);
  const double tol = 1e-14;
  bool ok = model.d == 1 && sp.d == 1 && std::abs(model.kappa(0, 0)) <= tol &&
            std::abs(model.zeta(0)) <= tol;
  double mu2 = 0.0, lambda2 = 0.0;
  for (Index l = 0; l < model.m && ok; ++l) {
    const double v2 = std::norm(model.v(l, 0));
    const double u2 = std::norm(model.u(l, 0));
    if (v2 > tol && u2 > tol) ok = false;
    mu2 += v2;
    lambda2 += u2;
  }
  if (!ok || !(mu2 > lambda2) || sp.cutoff < 3) {
    throw Error(ErrorCode::OutsideEnvelope,
                "oracle gap needs d = 1, kappa = 0, zeta = 0, pure a / a^+ Kraus operators, "
                "mu^2 > lambda^2 and cutoff >= 3");
  }
  OracleGap out;
  out.nbar = lambda2 / (mu2 - lambda2);
  const double q = out.nbar / (out.nbar + 1.0);
  const Index k = sp.cutoff - 2;
  out.trial_levels = k + 1;
  const Index nb = (k + 1) * (k + 1);
  RVec rho(k + 1);
  for (Index i = 0; i <= k; ++i) rho(i) = (1.0 - q) * std::pow(q, static_cast<double>(i));

  const auto ops = build_operators(model, sp);
  auto idx = [k](Index i, Index j) { return i * (k + 1) + j; };
  CMat amat = CMat::Zero(nb, nb);
  CMat e = CMat::Zero(sp.dim, sp.dim);
  for (Index kk = 0; kk <= k; ++kk) {
    for (Index ll = 0; ll <= k; ++ll) {
      e.setZero();
      e(kk, ll) = 1.0;
      const CMat le = apply_heisenberg(ops, e);
      for (Index i = 0; i <= k; ++i) {
        for (Index j = 0; j <= k; ++j) {
          const cplx val = le(i, j);
          if (val == cplx(0.0, 0.0)) continue;
          const double w = mode == OracleMode::GNS
                               ? std::sqrt(rho(j) / rho(ll))
                               : std::pow(rho(i) * rho(j) / (rho(kk) * rho(ll)), 0.25);
          amat(idx(i, j), idx(kk, ll)) = w * val;
        }
      }
    }
  }
  // tr(rho x) = sum_i c_ii sqrt(rho_i) in both normalized bases.
  CVec f = CVec::Zero(nb);
  for (Index i = 0; i <= k; ++i) f(idx(i, i)) = std::sqrt(rho(i));
  f.normalize();
  Eigen::HouseholderQR<CMat> qr(f);
  const CMat full_q = qr.householderQ() * CMat::Identity(nb, nb);
  const CMat basis = full_q.rightCols(nb - 1);
  const CMat restricted = basis.adjoint() * amat * basis;
  Eigen::SelfAdjointEigenSolver<CMat> es(linalg::hermitian_part(restricted), Eigen::EigenvaluesOnly);
  out.gap = -es.eigenvalues().maxCoeff();
  return out;
}

}  // namespace gaussgap::fock
