#pragma once

// Ellipsoidal Earth model in the North-Up-East local-level frame.
//
// WGS-84 defining parameters (NIMA TR8350.2, 3rd ed.):
//   a      = 6378137 m
//   1/f    = 298.257223563
//   omega  = 7.292115e-5 rad/s
//   GM     = 3.986004418e14 m^3/s^2
// Derived normal gravity constants:
//   gamma_e = 9.7803253359 m/s^2 (equator)
//   gamma_p = 9.8321849378 m/s^2 (pole)

#include "strapnav/so3.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace strapnav {

/// Raised when the curvature matrix would divide by cos(latitude) ~ 0.
class PolarSingularity : public std::domain_error {
 public:
  explicit PolarSingularity(const std::string& what) : std::domain_error(what) {}
};

inline constexpr double kPolarCosLimit = 1e-6;

template <typename Scalar>
Scalar pi() {
  using std::acos;
  return acos(Scalar(-1));
}

/// Longitude lon, latitude lat (rad) and height h above the ellipsoid (m).
template <typename Scalar>
struct GeodeticPosition {
  Scalar lon{0};
  Scalar lat{0};
  Scalar h{0};
};

/// Wraps an angle into (-pi, pi].
template <typename Scalar>
Scalar wrap_angle(Scalar x) {
  using std::floor;
  if (x > -pi<Scalar>() && x <= pi<Scalar>()) return x;  // exact for small differences
  const Scalar two_pi = 2 * pi<Scalar>();
  x -= two_pi * floor(x / two_pi);  // [0, 2pi)
  if (x > pi<Scalar>()) x -= two_pi;
  return x;
}

enum class GravityModel {
  Somigliana,  ///< normal gravity with a linear free-air height term
  Constant,    ///< fixed magnitude, for tests
};

template <typename Scalar>
struct EarthModel {
  Scalar a{6378137.0};
  Scalar f{Scalar(1) / Scalar(298.257223563)};
  Scalar omega_e{7.292115e-5};
  Scalar gm{3.986004418e14};
  Scalar gamma_e{9.7803253359};
  Scalar gamma_p{9.8321849378};
  GravityModel gravity = GravityModel::Somigliana;
  Scalar constant_g{9.80665};

  static EarthModel wgs84() { return EarthModel{}; }

  Scalar e2() const { return f * (2 - f); }
  Scalar b() const { return a * (1 - f); }
  /// Somigliana constant k = (b gamma_p - a gamma_e) / (a gamma_e).
  Scalar somigliana_k() const { return (b() * gamma_p - a * gamma_e) / (a * gamma_e); }
  /// m = omega^2 a^2 b / GM.
  Scalar m() const { return omega_e * omega_e * a * a * b() / gm; }

  bool valid() const {
    return a > 0 && f > 0 && f < 1 && omega_e >= 0 && gm > 0 && gamma_e > 0 && gamma_p > 0 &&
           constant_g > 0;
  }
};

/// Meridian (R_N) and transverse (R_E) radii of curvature.
template <typename Scalar>
struct PrincipalRadii {
  Scalar meridian;
  Scalar transverse;
};

template <typename Scalar>
PrincipalRadii<Scalar> principal_radii(const EarthModel<Scalar>& earth, const Scalar& lat) {
  using std::sin;
  using std::sqrt;
  const Scalar s = sin(lat);
  const Scalar w2 = 1 - earth.e2() * s * s;
  const Scalar w = sqrt(w2);
  return {earth.a * (1 - earth.e2()) / (w2 * w), earth.a / w};
}

namespace detail {

template <typename Scalar>
Scalar checked_cos_lat(const Scalar& lat) {
  using std::abs;
  using std::cos;
  const Scalar c = cos(lat);
  if (abs(c) < Scalar(kPolarCosLimit)) {
    throw PolarSingularity("latitude too close to a pole for the local-level mechanization");
  }
  return c;
}

}  // namespace detail

/// Maps N-U-E ground velocity to [lon rate, lat rate, height rate].
template <typename Scalar>
Mat3<Scalar> curvature_matrix(const EarthModel<Scalar>& earth, const GeodeticPosition<Scalar>& p) {
  const Scalar c = detail::checked_cos_lat(p.lat);
  const auto r = principal_radii(earth, p.lat);
  Mat3<Scalar> rc = Mat3<Scalar>::Zero();
  rc(0, 2) = 1 / ((r.transverse + p.h) * c);
  rc(1, 0) = 1 / (r.meridian + p.h);
  rc(2, 1) = 1;
  return rc;
}

/// Normal gravity magnitude at latitude lat and height h.
template <typename Scalar>
Scalar normal_gravity(const EarthModel<Scalar>& earth, const Scalar& lat, const Scalar& h) {
  using std::sin;
  using std::sqrt;
  if (earth.gravity == GravityModel::Constant) return earth.constant_g;
  const Scalar s2 = sin(lat) * sin(lat);
  const Scalar gamma0 =
      earth.gamma_e * (1 + earth.somigliana_k() * s2) / sqrt(1 - earth.e2() * s2);
  const Scalar free_air = 2 / earth.a * (1 + earth.f + earth.m() - 2 * earth.f * s2);
  return gamma0 * (1 - free_air * h);
}

template <typename Scalar>
Vec3<Scalar> gravity_n(const EarthModel<Scalar>& earth, const GeodeticPosition<Scalar>& p) {
  return {Scalar(0), -normal_gravity(earth, p.lat, p.h), Scalar(0)};
}

template <typename Scalar>
Vec3<Scalar> earth_rate_n(const EarthModel<Scalar>& earth, const Scalar& lat) {
  using std::cos;
  using std::sin;
  return {earth.omega_e * cos(lat), earth.omega_e * sin(lat), Scalar(0)};
}

/// Rate of the local-level frame relative to the Earth, consistent with
/// curvature_matrix: [v_E/(R_E+h), v_E tan(L)/(R_E+h), -v_N/(R_N+h)].
template <typename Scalar>
Vec3<Scalar> transport_rate_n(const EarthModel<Scalar>& earth, const Vec3<Scalar>& v,
                              const GeodeticPosition<Scalar>& p) {
  using std::sin;
  const Scalar c = detail::checked_cos_lat(p.lat);
  const auto r = principal_radii(earth, p.lat);
  const Scalar re = r.transverse + p.h;
  return {v.z() / re, v.z() * sin(p.lat) / c / re, -v.x() / (r.meridian + p.h)};
}

/// Position difference est - truth in local North/Up/East metres, scaled at
/// the true position.
template <typename Scalar>
Vec3<Scalar> position_error_nue(const EarthModel<Scalar>& earth,
                                const GeodeticPosition<Scalar>& est,
                                const GeodeticPosition<Scalar>& truth) {
  using std::cos;
  const auto r = principal_radii(earth, truth.lat);
  const Scalar dlat = est.lat - truth.lat;
  const Scalar dlon = wrap_angle<Scalar>(est.lon - truth.lon);
  return {dlat * (r.meridian + truth.h), est.h - truth.h,
          dlon * (r.transverse + truth.h) * cos(truth.lat)};
}

template <typename Scalar>
Scalar horizontal_position_error(const EarthModel<Scalar>& earth,
                                 const GeodeticPosition<Scalar>& est,
                                 const GeodeticPosition<Scalar>& truth) {
  using std::sqrt;
  const Vec3<Scalar> e = position_error_nue(earth, est, truth);
  return sqrt(e.x() * e.x() + e.z() * e.z());
}

}  // namespace strapnav
