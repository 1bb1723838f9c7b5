#pragma once

// Analytic level-flight truth trajectories along a parallel of latitude and
// the ideal two-sample IMU increments they generate. The body frame stays
// aligned with the N-U-E navigation frame, so w_ib^b = w_in^n and
// f^b = dv/dt + (2 w_ie + w_en) x v - g.

#include "strapnav/geo.hpp"
#include "strapnav/imu_integrals.hpp"
#include "strapnav/updates.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace strapnav {

enum class ScenarioKind {
  ConstEast,  ///< constant east velocity
  SineEast,   ///< east acceleration a sin(omega t)
};

template <typename Scalar>
struct Scenario {
  ScenarioKind kind = ScenarioKind::ConstEast;
  Scalar lat0{0};        ///< rad
  Scalar lon0{0};        ///< rad
  Scalar h0{0};          ///< m
  Scalar ve0{500};       ///< m/s
  Scalar accel_amp{0};   ///< m/s^2, SineEast only
  Scalar accel_freq{0};  ///< rad/s, SineEast only
  Scalar T{0.02};        ///< update interval, s
  Scalar duration{3600};  ///< s
  int substeps = 100;    ///< Simpson panels per half interval, SineEast only

  std::int64_t interval_count() const {
    using std::llround;
    return static_cast<std::int64_t>(llround(static_cast<double>(duration / T)));
  }

  /// Throws std::invalid_argument describing the first violated invariant.
  void validate() const {
    using std::abs;
    const double t = static_cast<double>(T);
    const double d = static_cast<double>(duration);
    if (!(t > 0)) throw std::invalid_argument("update interval must be positive");
    if (!(d >= 0)) throw std::invalid_argument("duration must be non-negative");
    if (substeps < 1) throw std::invalid_argument("substeps must be at least 1");
    const double n = static_cast<double>(interval_count());
    if (abs(n * t - d) > 1e-9 * (d > 1 ? d : 1)) {
      throw std::invalid_argument("duration must be a multiple of the update interval");
    }
    if (kind == ScenarioKind::SineEast && !(static_cast<double>(accel_freq) > 0)) {
      throw std::invalid_argument("SineEast needs a positive angular frequency");
    }
    if (!(abs(static_cast<double>(lat0)) < 1.5707)) {
      throw std::invalid_argument("latitude must be away from the poles");
    }
  }

  /// Scenario A: 500 m/s east at 30 deg latitude, T = 0.02 s, one hour.
  static Scenario const_east_default() {
    Scenario s;
    s.kind = ScenarioKind::ConstEast;
    s.lat0 = pi<Scalar>() / 6;
    return s;
  }

  /// Scenario B: east acceleration 10 sin(0.02 pi t), two hours.
  static Scenario sine_east_default() {
    Scenario s = const_east_default();
    s.kind = ScenarioKind::SineEast;
    s.accel_amp = Scalar(10);
    s.accel_freq = pi<Scalar>() / 50;
    s.duration = Scalar(7200);
    return s;
  }
};

/// Precomputed level-flight trajectory. Latitude and height are constant, so
/// radii, gravity and the Earth rate are evaluated once.
template <typename Scalar>
class LevelFlight {
 public:
  LevelFlight(const EarthModel<Scalar>& earth, const Scenario<Scalar>& s)
      : earth_(earth), s_(s) {
    using std::cos;
    using std::sin;
    s_.validate();
    const auto radii = principal_radii(earth_, s_.lat0);
    re_h_ = radii.transverse + s_.h0;
    cos_lat_ = detail::checked_cos_lat(s_.lat0);
    // Polar-axis direction in N-U-E; both w_ie and w_en lie along it.
    axis_ = Vec3<Scalar>(cos_lat_, sin(s_.lat0), Scalar(0));
    w_ie_ = earth_rate_n(earth_, s_.lat0);
    g_ = gravity_n(earth_, GeodeticPosition<Scalar>{s_.lon0, s_.lat0, s_.h0});
    build_phase_tables();
  }

  const Scenario<Scalar>& scenario() const { return s_; }
  const EarthModel<Scalar>& earth() const { return earth_; }

  Scalar east_velocity(const Scalar& t) const {
    using std::cos;
    if (s_.kind == ScenarioKind::ConstEast) return s_.ve0;
    return s_.ve0 + s_.accel_amp / s_.accel_freq * (1 - cos(s_.accel_freq * t));
  }

  Scalar east_accel(const Scalar& t) const {
    using std::sin;
    if (s_.kind == ScenarioKind::ConstEast) return Scalar(0);
    return s_.accel_amp * sin(s_.accel_freq * t);
  }

  Scalar east_jerk(const Scalar& t) const {
    using std::cos;
    if (s_.kind == ScenarioKind::ConstEast) return Scalar(0);
    return s_.accel_amp * s_.accel_freq * cos(s_.accel_freq * t);
  }

  /// Integral of the east velocity from 0 to t.
  Scalar east_distance(const Scalar& t) const {
    using std::sin;
    if (s_.kind == ScenarioKind::ConstEast) return s_.ve0 * t;
    const Scalar w = s_.accel_freq;
    return s_.ve0 * t + s_.accel_amp / w * (t - sin(w * t) / w);
  }

  Vec3<Scalar> velocity(const Scalar& t) const {
    return {Scalar(0), Scalar(0), east_velocity(t)};
  }

  Vec3<Scalar> w_ie() const { return w_ie_; }
  Vec3<Scalar> g() const { return g_; }

  Vec3<Scalar> w_en(const Scalar& t) const { return axis_ * (east_velocity(t) / (re_h_ * cos_lat_)); }

  Vec3<Scalar> w_in(const Scalar& t) const { return w_ie_ + w_en(t); }

  Vec3<Scalar> w_in_dot(const Scalar& t) const {
    return axis_ * (east_accel(t) / (re_h_ * cos_lat_));
  }

  Vec3<Scalar> specific_force(const Scalar& t) const {
    const Vec3<Scalar> v = velocity(t);
    const Vec3<Scalar> vdot(Scalar(0), Scalar(0), east_accel(t));
    return vdot + (2 * w_ie_ + w_en(t)).cross(v) - g_;
  }

  Vec3<Scalar> specific_force_rate(const Scalar& t) const {
    const Vec3<Scalar> v = velocity(t);
    const Vec3<Scalar> vdot(Scalar(0), Scalar(0), east_accel(t));
    const Vec3<Scalar> vddot(Scalar(0), Scalar(0), east_jerk(t));
    return vddot + w_in_dot(t).cross(v) + (2 * w_ie_ + w_en(t)).cross(vdot);
  }

  NavState<Scalar> truth_state(const Scalar& t) const {
    check_time(t);
    NavState<Scalar> st;
    st.v = velocity(t);
    st.p.lat = s_.lat0;
    st.p.h = s_.h0;
    st.p.lon = wrap_angle<Scalar>(s_.lon0 + east_distance(t) / (re_h_ * cos_lat_));
    st.c_bn = Dcm<Scalar>::identity();
    return st;
  }

  ImuInterval<Scalar> imu_increments(const Scalar& t_k) const {
    check_time(t_k);
    check_time(t_k + s_.T);
    const Scalar half = s_.T / 2;
    if (s_.kind == ScenarioKind::ConstEast) {
      return constant_rate_interval(w_in(t_k), specific_force(t_k), s_.T);
    }
    ImuInterval<Scalar> imu;
    imu.T = s_.T;
    integrate_half(t_k, half, imu.dtheta1, imu.dv1);
    integrate_half(t_k + half, half, imu.dtheta2, imu.dv2);
    return imu;
  }

 private:
  void check_time(const Scalar& t) const {
    const Scalar slack = s_.T * Scalar(1e-9);
    if (t < -slack || t > s_.duration + slack) {
      throw std::out_of_range("time outside the scenario duration");
    }
  }

  // Composite Simpson over [t0, t0 + len] with s_.substeps panels. w_in and
  // f^b are affine in v_E, v_E^2 and a_E, so only those three scalars are
  // integrated; the node phases reuse tables built once per scenario.
  void integrate_half(const Scalar& t0, const Scalar& len, Vec3<Scalar>& dtheta,
                      Vec3<Scalar>& dv) const {
    using std::cos;
    using std::sin;
    const int nodes = 2 * s_.substeps + 1;
    const Scalar h = len / (2 * s_.substeps);
    const Scalar c0 = cos(s_.accel_freq * t0);
    const Scalar s0 = sin(s_.accel_freq * t0);
    const Scalar amp_v = s_.accel_amp / s_.accel_freq;
    Scalar int_v{0}, int_v2{0}, int_a{0};
    for (int i = 0; i < nodes; ++i) {
      const Scalar c = c0 * cos_off_[i] - s0 * sin_off_[i];
      const Scalar sn = s0 * cos_off_[i] + c0 * sin_off_[i];
      const Scalar ve = s_.ve0 + amp_v * (1 - c);
      const Scalar wgt(i == 0 || i == nodes - 1 ? 1 : (i % 2 == 1 ? 4 : 2));
      int_v += wgt * ve;
      int_v2 += wgt * ve * ve;
      int_a += wgt * s_.accel_amp * sn;
    }
    int_v *= h / 3;
    int_v2 *= h / 3;
    int_a *= h / 3;
    const Scalar rc = re_h_ * cos_lat_;
    dtheta = w_ie_ * len + axis_ * (int_v / rc);
    dv = Vec3<Scalar>(2 * w_ie_.y() * int_v + axis_.y() * int_v2 / rc,
                      -2 * w_ie_.x() * int_v - axis_.x() * int_v2 / rc - g_.y() * len, int_a);
  }

  void build_phase_tables() {
    using std::cos;
    using std::sin;
    if (s_.kind != ScenarioKind::SineEast) return;
    const int nodes = 2 * s_.substeps + 1;
    const Scalar h = s_.T / 2 / (2 * s_.substeps);
    cos_off_.resize(nodes);
    sin_off_.resize(nodes);
    for (int i = 0; i < nodes; ++i) {
      cos_off_[i] = cos(s_.accel_freq * h * Scalar(i));
      sin_off_[i] = sin(s_.accel_freq * h * Scalar(i));
    }
  }

  EarthModel<Scalar> earth_;
  Scenario<Scalar> s_;
  Scalar re_h_{0};
  Scalar cos_lat_{1};
  Vec3<Scalar> axis_ = Vec3<Scalar>::Zero();
  Vec3<Scalar> w_ie_ = Vec3<Scalar>::Zero();
  Vec3<Scalar> g_ = Vec3<Scalar>::Zero();
  std::vector<Scalar> cos_off_;
  std::vector<Scalar> sin_off_;
};

template <typename Scalar>
NavState<Scalar> truth_state(const EarthModel<Scalar>& earth, const Scenario<Scalar>& s,
                             const Scalar& t) {
  return LevelFlight<Scalar>(earth, s).truth_state(t);
}

template <typename Scalar>
ImuInterval<Scalar> imu_increments(const EarthModel<Scalar>& earth, const Scenario<Scalar>& s,
                                   const Scalar& t_k) {
  return LevelFlight<Scalar>(earth, s).imu_increments(t_k);
}

}  // namespace strapnav
