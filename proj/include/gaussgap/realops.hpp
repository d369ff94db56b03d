#pragma once

// Real-linear operators on C^d written as z -> a1 z + a2 conj(z), and their
// realization as real 2d x 2d matrices acting on [Re z; Im z].

#include <cmath>
#include <string>

#include "gaussgap/error.hpp"
#include "gaussgap/linalg.hpp"

namespace gaussgap {

class RealLinearPair {
 public:
  RealLinearPair() = default;

  RealLinearPair(CMat a1, CMat a2) : a1_(std::move(a1)), a2_(std::move(a2)) {
    if (a1_.rows() != a2_.rows() || a1_.cols() != a2_.cols()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "pair blocks have shapes " + shape(a1_) + " and " + shape(a2_));
    }
  }

  static RealLinearPair identity(Index d) {
    return {CMat::Identity(d, d), CMat::Zero(d, d)};
  }
  static RealLinearPair zero(Index d) { return {CMat::Zero(d, d), CMat::Zero(d, d)}; }
  static RealLinearPair conjugation(Index d) {
    return {CMat::Zero(d, d), CMat::Identity(d, d)};
  }
  /// Jz = -iz.
  static RealLinearPair symplectic(Index d) {
    return {CMat(-kI * CMat::Identity(d, d)), CMat::Zero(d, d)};
  }

  /// Inverse of realize(); `r` must be (2p) x (2q).
  static RealLinearPair from_realization(const RMat& r) {
    if (r.rows() % 2 != 0 || r.cols() % 2 != 0) {
      throw Error(ErrorCode::DimensionMismatch, "realization must have even dimensions");
    }
    const Index p = r.rows() / 2;
    const Index q = r.cols() / 2;
    const RMat r11 = r.topLeftCorner(p, q), r12 = r.topRightCorner(p, q);
    const RMat r21 = r.bottomLeftCorner(p, q), r22 = r.bottomRightCorner(p, q);
    CMat a1(p, q), a2(p, q);
    a1.real() = 0.5 * (r11 + r22);
    a1.imag() = 0.5 * (r21 - r12);
    a2.real() = 0.5 * (r11 - r22);
    a2.imag() = 0.5 * (r12 + r21);
    return {std::move(a1), std::move(a2)};
  }

  const CMat& a1() const noexcept { return a1_; }
  const CMat& a2() const noexcept { return a2_; }
  Index rows() const noexcept { return a1_.rows(); }
  Index cols() const noexcept { return a1_.cols(); }

  CVec apply(const CVec& z) const {
    if (z.size() != cols()) throw Error(ErrorCode::DimensionMismatch, "vector length");
    return a1_ * z + a2_ * z.conjugate();
  }

  /// Composition (*this) o other as real-linear maps.
  RealLinearPair operator*(const RealLinearPair& other) const {
    if (cols() != other.rows()) throw Error(ErrorCode::DimensionMismatch, "composition");
    return {a1_ * other.a1_ + a2_ * other.a2_.conjugate(),
            a1_ * other.a2_ + a2_ * other.a1_.conjugate()};
  }

  RealLinearPair operator+(const RealLinearPair& other) const {
    if (rows() != other.rows() || cols() != other.cols()) {
      throw Error(ErrorCode::DimensionMismatch, "sum");
    }
    return {a1_ + other.a1_, a2_ + other.a2_};
  }

  RealLinearPair operator*(double s) const { return {s * a1_, s * a2_}; }

 private:
  static std::string shape(const CMat& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
  }

  CMat a1_;
  CMat a2_;
};

/// The canonical symplectic form J = [0, I; -I, 0] on R^{2d}.
struct SymplecticForm {
  Index dim_d = 0;
  RMat j2d;

  static SymplecticForm of(Index d) {
    SymplecticForm j{d, RMat::Zero(2 * d, 2 * d)};
    j.j2d.topRightCorner(d, d).setIdentity();
    j.j2d.bottomLeftCorner(d, d) = -RMat::Identity(d, d);
    return j;
  }
};

inline RMat symplectic_matrix(Index d) { return SymplecticForm::of(d).j2d; }

/// Block realization [Re a1 + Re a2, Im a2 - Im a1; Im a1 + Im a2, Re a1 - Re a2].
inline RMat realize(const RealLinearPair& pair) {
  const Index p = pair.rows();
  const Index q = pair.cols();
  const RMat r1 = pair.a1().real(), i1 = pair.a1().imag();
  const RMat r2 = pair.a2().real(), i2 = pair.a2().imag();
  RMat out(2 * p, 2 * q);
  out.topLeftCorner(p, q) = r1 + r2;
  out.topRightCorner(p, q) = i2 - i1;
  out.bottomLeftCorner(p, q) = i1 + i2;
  out.bottomRightCorner(p, q) = r1 - r2;
  return out;
}

/// Adjoint for the real scalar product Re<.,.>: (a1, a2) -> (a1*, a2^T).
inline RealLinearPair sharp_adjoint(const RealLinearPair& pair) {
  return {pair.a1().adjoint(), pair.a2().transpose()};
}

/// exp(t R(pair)).
inline RMat pair_exp(const RealLinearPair& pair, double t) {
  if (!std::isfinite(t)) throw Error(ErrorCode::NonFinite, "time must be finite");
  if (pair.rows() != pair.cols()) throw Error(ErrorCode::DimensionMismatch, "square pair required");
  return linalg::expm(RMat(t * realize(pair)));
}

inline RVec to_real(const CVec& z) {
  RVec x(2 * z.size());
  x.head(z.size()) = z.real();
  x.tail(z.size()) = z.imag();
  return x;
}

inline CVec to_complex(const RVec& x) {
  if (x.size() % 2 != 0) throw Error(ErrorCode::DimensionMismatch, "odd real vector");
  const Index d = x.size() / 2;
  CVec z(d);
  z.real() = x.head(d);
  z.imag() = x.tail(d);
  return z;
}

}  // namespace gaussgap
