#pragma once

// Constant-rate level-flight closed forms, assumption residuals for the SV2
// derivation, and log-log convergence-order estimation.

#include "strapnav/geo.hpp"
#include "strapnav/imu_integrals.hpp"
#include "strapnav/scenarios.hpp"
#include "strapnav/updates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace strapnav {

/// Closed-form single step: predicted value and its leading error term,
/// i.e. predicted = exact + leading_error + O(T^(order+1)).
template <typename Scalar>
struct StepOracle {
  std::string label;
  Vec3<Scalar> predicted = Vec3<Scalar>::Zero();
  Vec3<Scalar> leading_error = Vec3<Scalar>::Zero();
  int order = 0;  ///< power of T in leading_error; 0 when the step is exact
};

/// One velocity step of `alg` when v, w_in and g are constant (the exact
/// next velocity is v). `w` is w_in.
template <typename Scalar>
StepOracle<Scalar> const_case_velocity_oracle(VelAlg alg, const Vec3<Scalar>& v,
                                              const Vec3<Scalar>& w, const Vec3<Scalar>& g,
                                              const Scalar& T) {
  StepOracle<Scalar> o;
  o.label = std::string(to_string(alg)) + " velocity";
  const Scalar T2 = T * T;
  const Scalar T4 = T2 * T2;
  const Mat3<Scalar> W = skew(w);
  switch (alg) {
    case VelAlg::Derived:
      o.leading_error = (T4 / 4) * (W * (W * (W * (W * v))));
      o.order = 4;
      break;
    case VelAlg::TN:
      o.leading_error = -(T2 / 2) * w.cross(g);
      o.order = 2;
      break;
    case VelAlg::SV1:
      o.leading_error = (T2 / 2) * w.cross(g);
      o.order = 2;
      break;
    case VelAlg::SV2:
      // (T^4/8)(w x)^3 f with f = -g to leading order.
      o.leading_error = -(T4 / 8) * (W * (W * (W * g)));
      o.order = 4;
      break;
  }
  o.predicted = v + o.leading_error;
  return o;
}

/// One position step of `alg` under the same constant conditions (the exact
/// increment is T v).
template <typename Scalar>
StepOracle<Scalar> const_case_position_oracle(PosAlg alg, const Vec3<Scalar>& v,
                                              const Vec3<Scalar>& w, const Vec3<Scalar>& g,
                                              const Scalar& T) {
  StepOracle<Scalar> o;
  o.label = std::string(to_string(alg)) + " position";
  const Scalar T3 = T * T * T;
  const Scalar T5 = T3 * T * T;
  const Mat3<Scalar> W = skew(w);
  switch (alg) {
    case PosAlg::Derived:
      o.leading_error = -(T3 / 4) * (W * (W * v));
      o.order = 3;
      break;
    case PosAlg::TN:
      o.order = 0;
      break;
    case PosAlg::SV1:
      o.leading_error = (T3 / 6) * w.cross(g);
      o.order = 3;
      break;
    case PosAlg::SV2:
      o.leading_error = -(T5 / 24) * (W * (W * (W * g)));
      o.order = 5;
      break;
  }
  o.predicted = T * v + o.leading_error;
  return o;
}

/// Leading-term agreement: norms within [1/factor, factor] of each other, and
/// every component carrying at least 10% of the oracle norm has the oracle's
/// sign and a ratio within the same band. A zero oracle term requires a
/// deviation no larger than `zero_tol`.
template <typename Scalar>
bool matches_leading_term(const Vec3<Scalar>& deviation, const Vec3<Scalar>& leading,
                          double factor, const Scalar& zero_tol) {
  const Scalar ln = leading.norm();
  if (ln == 0) return deviation.norm() <= zero_tol;
  const Scalar ratio = deviation.norm() / ln;
  if (!(ratio >= 1 / factor && ratio <= factor)) return false;
  for (int i = 0; i < 3; ++i) {
    using std::abs;
    if (abs(leading(i)) < ln / 10) continue;
    const Scalar r = deviation(i) / leading(i);
    if (!(r >= 1 / factor && r <= factor)) return false;
  }
  return true;
}

/// Result of running one general algorithm against its closed form.
struct OracleCheck {
  std::string label;
  int order = 0;
  double deviation_norm = 0;
  double oracle_norm = 0;
  bool pass = false;
};

/// Feeds constant-rate increments for the level-flight state of `s` at t = 0
/// into every velocity and position algorithm and compares each one-step
/// deviation with its closed form. The frame rotation over the step is the
/// second-order truncation the closed forms are built on; extended precision
/// is needed to resolve the T^4 and T^5 terms against |v| = O(100).
template <typename Scalar>
std::vector<OracleCheck> oracle_suite(const EarthModel<Scalar>& earth, const Scenario<Scalar>& s,
                                      double factor = 2.0) {
  const LevelFlight<Scalar> flight(earth, s);
  const NavState<Scalar> st = flight.truth_state(Scalar(0));
  const FrameRates<Scalar> rates = FrameRates<Scalar>::evaluate(earth, st.v, st.p);
  const ImuInterval<Scalar> imu =
      constant_rate_interval(rates.w_in(), flight.specific_force(Scalar(0)), s.T);
  UpdateOptions opts;
  opts.nav_rotation = NavRotation::SecondOrder;
  const Scalar zero_tol = Scalar(1e-12) * s.T * st.v.norm();

  std::vector<OracleCheck> out;
  auto record = [&](const StepOracle<Scalar>& o, const Vec3<Scalar>& dev) {
    OracleCheck c;
    c.label = o.label;
    c.order = o.order;
    c.deviation_norm = static_cast<double>(dev.norm());
    c.oracle_norm = static_cast<double>(o.leading_error.norm());
    c.pass = matches_leading_term(dev, o.leading_error, factor, zero_tol);
    out.push_back(c);
  };
  for (VelAlg a : kAllVelAlgs) {
    const Vec3<Scalar> v_next = velocity_update(a, st, rates, imu, opts);
    record(const_case_velocity_oracle(a, st.v, rates.w_in(), rates.g(), s.T), v_next - st.v);
  }
  for (PosAlg a : kAllPosAlgs) {
    const Vec3<Scalar> r = position_increment(a, st, st.v, rates, imu, opts);
    record(const_case_position_oracle(a, st.v, rates.w_in(), rates.g(), s.T), r - s.T * st.v);
  }
  return out;
}

/// ||(w x)^2 - (w_dot x)||_F: vanishes when C_{n(t_k)}^{n(t)} is exactly
/// exp(-(w x) t) with constant w.
template <typename Scalar>
Scalar const_c_residual(const Vec3<Scalar>& w_in, const Vec3<Scalar>& w_in_dot) {
  const Mat3<Scalar> w = skew(w_in);
  return (w * w - skew(w_in_dot)).norm();
}

/// ||w_ib x f + f_dot||: vanishes when u ramps linearly.
template <typename Scalar>
Scalar ramp_u_residual(const Vec3<Scalar>& w_ib, const Vec3<Scalar>& f, const Vec3<Scalar>& f_dot) {
  return (w_ib.cross(f) + f_dot).norm();
}

struct ResidualSample {
  double t = 0;
  double w_in_norm = 0;        ///< rad/s
  double const_c = 0;          ///< rad^2/s^2
  double ramp_u = 0;           ///< m/s^3
  double w_ib_cross_f = 0;     ///< m/s^3
  double f_dot_norm = 0;       ///< m/s^3
};

struct AssumptionResiduals {
  std::vector<ResidualSample> series;
  ResidualSample max;  ///< componentwise maxima (t unused)
};

/// Residuals along the truth trajectory, sampled every `stride` update
/// epochs (including both ends).
template <typename Scalar>
AssumptionResiduals assumption_residuals(const EarthModel<Scalar>& earth, const Scenario<Scalar>& s,
                                         std::int64_t stride = 1) {
  if (stride < 1) throw std::invalid_argument("stride must be at least 1");
  const LevelFlight<Scalar> flight(earth, s);
  const std::int64_t n = s.interval_count();
  AssumptionResiduals out;
  auto sample = [&](std::int64_t k) {
    const Scalar t = s.T * Scalar(k);
    // Body frame pinned to the N-frame: w_ib^b = w_in^n.
    const Vec3<Scalar> w = flight.w_in(t);
    const Vec3<Scalar> f = flight.specific_force(t);
    const Vec3<Scalar> fd = flight.specific_force_rate(t);
    ResidualSample r;
    r.t = static_cast<double>(t);
    r.w_in_norm = static_cast<double>(w.norm());
    r.const_c = static_cast<double>(const_c_residual(w, flight.w_in_dot(t)));
    r.ramp_u = static_cast<double>(ramp_u_residual(w, f, fd));
    r.w_ib_cross_f = static_cast<double>(w.cross(f).norm());
    r.f_dot_norm = static_cast<double>(fd.norm());
    out.series.push_back(r);
    ResidualSample& m = out.max;
    m.w_in_norm = std::max(m.w_in_norm, r.w_in_norm);
    m.const_c = std::max(m.const_c, r.const_c);
    m.ramp_u = std::max(m.ramp_u, r.ramp_u);
    m.w_ib_cross_f = std::max(m.w_ib_cross_f, r.w_ib_cross_f);
    m.f_dot_norm = std::max(m.f_dot_norm, r.f_dot_norm);
  };
  for (std::int64_t k = 0; k < n; k += stride) sample(k);
  sample(n);
  return out;
}

struct OrderEstimate {
  double order = 0;
  bool degenerate = false;  ///< some error was zero or non-finite; order undefined
};

/// Least-squares slope of log(error) against log(step).
inline OrderEstimate estimate_order(const std::vector<double>& steps,
                                    const std::vector<double>& errors) {
  if (steps.size() != errors.size()) throw std::invalid_argument("steps/errors size mismatch");
  if (steps.size() < 3) throw std::invalid_argument("need at least three step sizes");
  for (double h : steps) {
    if (!(h > 0) || !std::isfinite(h)) throw std::invalid_argument("steps must be positive");
  }
  const double q = steps[1] / steps[0];
  for (std::size_t i = 1; i < steps.size(); ++i) {
    if (std::abs(steps[i] / steps[i - 1] - q) > 1e-9 * std::abs(q) || q == 1) {
      throw std::invalid_argument("steps must form a geometric progression");
    }
  }
  OrderEstimate est;
  for (double e : errors) {
    if (!(e > 0) || !std::isfinite(e)) {
      est.degenerate = true;
      return est;
    }
  }
  const double n = static_cast<double>(steps.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const double x = std::log(steps[i]);
    const double y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  est.order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return est;
}

}  // namespace strapnav
