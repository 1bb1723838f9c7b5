#pragma once

// Two-sample sculling and scrolling terms built from gyro/accelerometer
// increments.

#include "strapnav/so3.hpp"

namespace strapnav {

/// Increments over one update interval of length T, split into two halves.
template <typename Scalar>
struct ImuInterval {
  Vec3<Scalar> dtheta1 = Vec3<Scalar>::Zero();  ///< rad
  Vec3<Scalar> dtheta2 = Vec3<Scalar>::Zero();  ///< rad
  Vec3<Scalar> dv1 = Vec3<Scalar>::Zero();      ///< m/s
  Vec3<Scalar> dv2 = Vec3<Scalar>::Zero();      ///< m/s
  Scalar T{0};                                  ///< s
};

/// Body-rate / specific-force increments for constant w_ib and f over T.
template <typename Scalar>
ImuInterval<Scalar> constant_rate_interval(const Vec3<Scalar>& w_ib, const Vec3<Scalar>& f_b,
                                           const Scalar& T) {
  const Vec3<Scalar> dth = w_ib * (T / 2);
  const Vec3<Scalar> dv = f_b * (T / 2);
  return {dth, dth, dv, dv, T};
}

/// u(t_k+T) = C_b^n(t_k) * integral of C_{b(t)}^{b(t_k)} f^b dt, with the
/// two-sample sculling correction.
template <typename Scalar>
Vec3<Scalar> sculling_u(const Dcm<Scalar>& c_bn, const ImuInterval<Scalar>& imu) {
  const Vec3<Scalar> dth = imu.dtheta1 + imu.dtheta2;
  const Vec3<Scalar> dv = imu.dv1 + imu.dv2;
  const Vec3<Scalar> body = dv + dth.cross(dv) / 2 +
                            (imu.dtheta1.cross(imu.dv2) + imu.dv1.cross(imu.dtheta2)) * Scalar(2) / 3;
  return c_bn * body;
}

/// I_u(t_k+T), the integral of u(t) over the interval (double integral of the
/// transformed specific force), with the two-sample scrolling correction.
template <typename Scalar>
Vec3<Scalar> scrolling_Iu(const Dcm<Scalar>& c_bn, const ImuInterval<Scalar>& imu) {
  const auto& th1 = imu.dtheta1;
  const auto& th2 = imu.dtheta2;
  const auto& v1 = imu.dv1;
  const auto& v2 = imu.dv2;
  const Vec3<Scalar> body = 25 * v1 + 5 * v2 + 12 * th1.cross(v1) + 8 * th1.cross(v2) +
                            2 * v1.cross(th2) + 2 * th2.cross(v2);
  return c_bn * body * (imu.T / 30);
}

}  // namespace strapnav
