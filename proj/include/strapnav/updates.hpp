#pragma once

// One-interval velocity, position and attitude updates in a rotating
// North-Up-East navigation frame.
//
// Four velocity/position algorithm families are provided:
//   Derived  - built directly on the incremental velocity/position
//              integration formulae; the navigation-frame rotation enters
//              through C_{n(t_k)}^{n(t_k+T)} and first-order expansions of the
//              Coriolis and gravity integrals, refined once with a
//              linear-velocity (velocity) or linear-displacement (position)
//              model.
//   TN       - ignores the navigation-frame rotation (trapezoidal position).
//   SV1      - first-order (I - T w_in x) rotation compensation of u.
//   SV2      - (C + I)/2 compensation of u, assuming a constant-rate frame
//              rotation and a linearly ramping u.

#include "strapnav/geo.hpp"
#include "strapnav/imu_integrals.hpp"
#include "strapnav/so3.hpp"

#include <array>
#include <optional>
#include <string_view>

namespace strapnav {

enum class VelAlg { Derived, TN, SV1, SV2 };
enum class PosAlg { Derived, TN, SV1, SV2 };

inline constexpr std::array<VelAlg, 4> kAllVelAlgs{VelAlg::Derived, VelAlg::TN, VelAlg::SV1,
                                                   VelAlg::SV2};
inline constexpr std::array<PosAlg, 4> kAllPosAlgs{PosAlg::Derived, PosAlg::TN, PosAlg::SV1,
                                                   PosAlg::SV2};

constexpr std::string_view to_string(VelAlg a) {
  switch (a) {
    case VelAlg::Derived: return "Derived";
    case VelAlg::TN: return "TN";
    case VelAlg::SV1: return "SV1";
    case VelAlg::SV2: return "SV2";
  }
  return "?";
}

constexpr std::string_view to_string(PosAlg a) {
  return to_string(static_cast<VelAlg>(static_cast<int>(a)));
}

/// Case-insensitive lookup of "derived", "tn", "sv1", "sv2".
inline std::optional<VelAlg> parse_vel_alg(std::string_view name) {
  auto lower_eq = [](std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      char c = a[i];
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      char d = b[i];
      if (d >= 'A' && d <= 'Z') d = static_cast<char>(d - 'A' + 'a');
      if (c != d) return false;
    }
    return true;
  };
  for (VelAlg a : kAllVelAlgs) {
    if (lower_eq(name, to_string(a))) return a;
  }
  return std::nullopt;
}

inline std::optional<PosAlg> parse_pos_alg(std::string_view name) {
  if (auto v = parse_vel_alg(name)) return static_cast<PosAlg>(static_cast<int>(*v));
  return std::nullopt;
}

/// Ground velocity (N-U-E), geodetic position and body attitude at one epoch.
template <typename Scalar>
struct NavState {
  Vec3<Scalar> v = Vec3<Scalar>::Zero();
  GeodeticPosition<Scalar> p;
  Dcm<Scalar> c_bn;
};

/// Frame rates and gravity frozen at the start of an interval.
/// w_in is always w_ie + w_en.
template <typename Scalar>
class FrameRates {
 public:
  FrameRates(const Vec3<Scalar>& w_ie, const Vec3<Scalar>& w_en, const Vec3<Scalar>& g)
      : w_ie_(w_ie), w_en_(w_en), w_in_(w_ie + w_en), g_(g) {}

  /// Rates at the given velocity and position. Throws PolarSingularity.
  static FrameRates evaluate(const EarthModel<Scalar>& earth, const Vec3<Scalar>& v,
                             const GeodeticPosition<Scalar>& p) {
    return FrameRates(earth_rate_n(earth, p.lat), transport_rate_n(earth, v, p),
                      gravity_n(earth, p));
  }

  const Vec3<Scalar>& w_ie() const { return w_ie_; }
  const Vec3<Scalar>& w_en() const { return w_en_; }
  const Vec3<Scalar>& w_in() const { return w_in_; }
  const Vec3<Scalar>& g() const { return g_; }
  /// 2 w_ie + w_en, the Coriolis rate of the ground-velocity equation.
  Vec3<Scalar> coriolis_rate() const { return 2 * w_ie_ + w_en_; }

 private:
  Vec3<Scalar> w_ie_;
  Vec3<Scalar> w_en_;
  Vec3<Scalar> w_in_;
  Vec3<Scalar> g_;
};

struct UpdateOptions {
  NavRotation nav_rotation = NavRotation::Exact;
};

namespace detail {

/// Coriolis integral with a linear velocity model between v0 and v1:
/// (T/2 I + T^2/6 W) w_ie x v0 + (T/2 I + T^2/3 W) w_ie x v1, W = w_in x.
template <typename Scalar>
Vec3<Scalar> linear_velocity_coriolis(const FrameRates<Scalar>& rates, const Vec3<Scalar>& v0,
                                      const Vec3<Scalar>& v1, const Scalar& T) {
  const Mat3<Scalar> w = skew(rates.w_in());
  const Mat3<Scalar> id = Mat3<Scalar>::Identity();
  const Vec3<Scalar> a0 = rates.w_ie().cross(v0);
  const Vec3<Scalar> a1 = rates.w_ie().cross(v1);
  return (id * (T / 2) + w * (T * T / 6)) * a0 + (id * (T / 2) + w * (T * T / 3)) * a1;
}

/// Velocity update given the already-formed u and d_nn = C_{n(t_k)}^{n(t_k+T)} - I.
/// Every algorithm is evaluated as v + (small increment) so that the large
/// ground velocity never passes through a rotation and back.
/// `corrector_passes` only affects Derived (one pass is the algorithm).
template <typename Scalar>
Vec3<Scalar> velocity_from_u(VelAlg alg, const Vec3<Scalar>& v, const Vec3<Scalar>& u,
                             const FrameRates<Scalar>& rates, const Mat3<Scalar>& d_nn,
                             const Scalar& T, int corrector_passes = 1) {
  const Mat3<Scalar> w = skew(rates.w_in());
  const Vec3<Scalar> coriolis = T * rates.coriolis_rate().cross(v);
  const Vec3<Scalar> gravity = T * rates.g();
  switch (alg) {
    case VelAlg::Derived: {
      const Mat3<Scalar> first_order = Mat3<Scalar>::Identity() * T + w * (T * T / 2);
      const Vec3<Scalar> g_int = first_order * rates.g();
      const Vec3<Scalar> d_v = d_nn * v;
      // C (v + inner) - v = inner + d_nn v + d_nn inner
      auto rotate = [&](const Vec3<Scalar>& inner) -> Vec3<Scalar> {
        return (inner + d_v + d_nn * inner);
      };
      Vec3<Scalar> dv = rotate(u - first_order * rates.w_ie().cross(v) + g_int);
      for (int i = 0; i < corrector_passes; ++i) {
        const Vec3<Scalar> predicted = v + dv;
        dv = rotate(u - linear_velocity_coriolis(rates, v, predicted, T) + g_int);
      }
      return v + dv;
    }
    case VelAlg::TN:
      return v + ((u + gravity) - coriolis);
    case VelAlg::SV1:
      return v + ((u + gravity) - coriolis - T * (w * u));
    case VelAlg::SV2:
      return v + ((u + gravity) - coriolis + d_nn * u / 2);
  }
  return v;
}

}  // namespace detail

/// Ground velocity at t_k + T.
template <typename Scalar>
Vec3<Scalar> velocity_update(VelAlg alg, const NavState<Scalar>& state,
                             const FrameRates<Scalar>& rates, const ImuInterval<Scalar>& imu,
                             UpdateOptions opts = {}) {
  const Vec3<Scalar> u = sculling_u(state.c_bn, imu);
  const Mat3<Scalar> d_nn = nav_frame_rotation_delta(rates.w_in(), imu.T, opts.nav_rotation);
  return detail::velocity_from_u(alg, state.v, u, rates, d_nn, imu.T);
}

/// Displacement r^n(t_k + T) = integral of v^n over the interval, expressed in
/// the navigation frame at t_k + T.
template <typename Scalar>
Vec3<Scalar> position_increment(PosAlg alg, const NavState<Scalar>& state,
                                const Vec3<Scalar>& v_next, const FrameRates<Scalar>& rates,
                                const ImuInterval<Scalar>& imu, UpdateOptions opts = {}) {
  const Scalar& T = imu.T;
  const Scalar T2 = T * T;
  const Scalar T3 = T2 * T;
  const Vec3<Scalar>& v = state.v;
  const Mat3<Scalar> id = Mat3<Scalar>::Identity();
  const Mat3<Scalar> w = skew(rates.w_in());

  if (alg == PosAlg::TN) return (v + v_next) * (T / 2);

  const Vec3<Scalar> iu = scrolling_Iu(state.c_bn, imu);
  const Mat3<Scalar> d_nn = nav_frame_rotation_delta(rates.w_in(), T, opts.nav_rotation);

  switch (alg) {
    case PosAlg::Derived: {
      const Vec3<Scalar> small = iu -
                                 (id * (T2 / 3) + w * (T3 / 12)) * rates.w_ie().cross(v) -
                                 (id * (T2 / 6) + w * (T3 / 12)) * rates.w_ie().cross(v_next) +
                                 (id * (T2 / 2) + w * (T3 / 6)) * rates.g();
      const Vec3<Scalar> tv = T * v;
      const Vec3<Scalar> r_pred = tv + (small + d_nn * tv + d_nn * small);
      // One fixed-point pass for the rotating-frame single integral, modelling
      // r^n(t) as linear over the interval: r = r_pred + C K r_pred.
      const Vec3<Scalar> k_r = (id * (T / 2) + w * (T2 / 3)) * (w * r_pred);
      return r_pred + (k_r + d_nn * k_r);
    }
    case PosAlg::SV1:
    case PosAlg::SV2: {
      const Vec3<Scalar> u = sculling_u(state.c_bn, imu);
      const Scalar weight = alg == PosAlg::SV1 ? T / 3 : T / 6;
      return T * v + (iu + (rates.g() - rates.coriolis_rate().cross(v)) * (T2 / 2) +
                      weight * (d_nn * u));
    }
    case PosAlg::TN: break;
  }
  return (v + v_next) * (T / 2);
}

/// p + R_c(p) r, with longitude wrapped into (-pi, pi].
template <typename Scalar>
GeodeticPosition<Scalar> apply_position(const EarthModel<Scalar>& earth,
                                        const GeodeticPosition<Scalar>& p, const Vec3<Scalar>& r) {
  const Vec3<Scalar> d = curvature_matrix(earth, p) * r;
  return {wrap_angle<Scalar>(p.lon + d.x()), p.lat + d.y(), p.h + d.z()};
}

/// C_{b(t_k+T)}^{n(t_k+T)} = C_{n(t_k)}^{n(t_k+T)} C_b^n(t_k) C_{b(t_k+T)}^{b(t_k)}.
template <typename Scalar>
Dcm<Scalar> attitude_update(const Dcm<Scalar>& c_bn, const Vec3<Scalar>& w_in,
                            const ImuInterval<Scalar>& imu) {
  const Dcm<Scalar> c = nav_frame_rotation(w_in, imu.T) * c_bn *
                       body_rotation_update(imu.dtheta1, imu.dtheta2);
  return c.orthonormalized();
}

}  // namespace strapnav
