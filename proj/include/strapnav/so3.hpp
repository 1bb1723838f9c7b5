#pragma once

// Rotation utilities shared by every update algorithm. All templates take the
// scalar type as a parameter so the same code runs in double for simulation
// and in extended precision for single-step error analysis.

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cmath>

namespace strapnav {

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;

template <typename Scalar>
using Mat3 = Eigen::Matrix<Scalar, 3, 3>;

/// Direction cosine matrix. Holds an orthonormal 3x3 matrix mapping vectors
/// from a source frame into a target frame.
template <typename Scalar>
class Dcm {
 public:
  Dcm() : m_(Mat3<Scalar>::Identity()) {}

  /// Wraps an existing matrix; the caller guarantees orthonormality.
  explicit Dcm(const Mat3<Scalar>& m) : m_(m) {}

  static Dcm identity() { return Dcm(); }

  const Mat3<Scalar>& matrix() const { return m_; }

  Dcm transpose() const { return Dcm(m_.transpose()); }

  Dcm operator*(const Dcm& rhs) const { return Dcm(m_ * rhs.m_); }
  Vec3<Scalar> operator*(const Vec3<Scalar>& v) const { return m_ * v; }

  /// max |(D^T D - I)_ij|
  Scalar orthonormality_error() const {
    return (m_.transpose() * m_ - Mat3<Scalar>::Identity()).cwiseAbs().maxCoeff();
  }

  Scalar determinant() const { return m_.determinant(); }

  /// One Newton step toward the nearest rotation: D - D (D^T D - I) / 2.
  Dcm orthonormalized() const {
    const Mat3<Scalar> e = m_.transpose() * m_ - Mat3<Scalar>::Identity();
    return Dcm(m_ - m_ * e / 2);
  }

 private:
  Mat3<Scalar> m_;
};

/// Cross-product matrix: skew(v) * q == v.cross(q).
template <typename Scalar>
Mat3<Scalar> skew(const Vec3<Scalar>& v) {
  Mat3<Scalar> m;
  m << Scalar(0), -v.z(), v.y(),
       v.z(), Scalar(0), -v.x(),
       -v.y(), v.x(), Scalar(0);
  return m;
}

/// Below this angle the Rodrigues coefficients are evaluated from their
/// Taylor series.
inline constexpr double kSmallAngle = 1e-7;

/// exp(phi x) - I, formed without adding the identity so that small
/// rotations keep full relative precision.
template <typename Scalar>
Mat3<Scalar> rotvec_to_dcm_delta(const Vec3<Scalar>& phi) {
  using std::sin;
  using std::sqrt;
  const Scalar angle2 = phi.squaredNorm();
  const Scalar angle = sqrt(angle2);
  Scalar a;  // sin(x)/x
  Scalar b;  // (1 - cos(x))/x^2
  if (angle < Scalar(kSmallAngle)) {
    // Truncation error below x^6/5040 ~ 1e-46 for x < 1e-7.
    a = Scalar(1) - angle2 / 6 + angle2 * angle2 / 120;
    b = Scalar(1) / 2 - angle2 / 24 + angle2 * angle2 / 720;
  } else {
    a = sin(angle) / angle;
    const Scalar s = sin(angle / 2) / angle;  // half-angle form, no 1 - cos cancellation
    b = 2 * s * s;
  }
  const Mat3<Scalar> k = skew(phi);
  return a * k + b * k * k;
}

/// exp(phi x), the rotation by |phi| about phi.
template <typename Scalar>
Dcm<Scalar> rotvec_to_dcm(const Vec3<Scalar>& phi) {
  return Dcm<Scalar>(Mat3<Scalar>::Identity() + rotvec_to_dcm_delta(phi));
}

/// How the navigation-frame rotation over one interval is formed.
enum class NavRotation {
  Exact,        ///< exp(-T w_in x)
  SecondOrder,  ///< I - T w_in x + (T^2/2)(w_in x)^2, as in the closed-form error analysis
};

/// C_{n(t_k)}^{n(t_k+T)} for a navigation-frame rate w_in held constant over
/// the interval.
template <typename Scalar>
Dcm<Scalar> nav_frame_rotation(const Vec3<Scalar>& w_in, const Scalar& T) {
  return rotvec_to_dcm<Scalar>(-T * w_in);
}

/// C_{n(t_k)}^{n(t_k+T)} - I under the chosen rotation model. The
/// SecondOrder model is -T w_in x + (T^2/2)(w_in x)^2, the truncation used by
/// the closed-form single-step error analysis; it is not orthonormal beyond
/// O(|T w_in|^3).
template <typename Scalar>
Mat3<Scalar> nav_frame_rotation_delta(const Vec3<Scalar>& w_in, const Scalar& T,
                                      NavRotation model = NavRotation::Exact) {
  if (model == NavRotation::SecondOrder) {
    const Mat3<Scalar> a = skew<Scalar>(T * w_in);
    return a * a / 2 - a;
  }
  return rotvec_to_dcm_delta<Scalar>(-T * w_in);
}

/// Two-sample coning update C_{b(t_k+T)}^{b(t_k)} from the gyro increments of
/// the two half intervals.
template <typename Scalar>
Dcm<Scalar> body_rotation_update(const Vec3<Scalar>& dtheta1, const Vec3<Scalar>& dtheta2) {
  const Vec3<Scalar> phi = dtheta1 + dtheta2 + dtheta1.cross(dtheta2) * Scalar(2) / 3;
  return rotvec_to_dcm(phi);
}

}  // namespace strapnav
