#pragma once

// Shared brute-force oracles for the unit tests.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>

#include "strapnav/imu_integrals.hpp"
#include "strapnav/so3.hpp"

#include <functional>
#include <utility>

namespace testing_support {

using Mp = boost::multiprecision::cpp_bin_float_50;
using strapnav::Mat3;
using strapnav::Vec3;

template <typename S>
using RateFn = std::function<Vec3<S>(const S&)>;

/// RK4 integration of C' = C (w(t) x) from C(t0) = I over [t0, t0 + len]
/// with n steps; calls visit(t, C) at every node.
template <typename S, typename Visit>
Mat3<S> integrate_dcm(const RateFn<S>& w, const S& t0, const S& len, int n, Visit&& visit) {
  Mat3<S> c = Mat3<S>::Identity();
  const S h = len / n;
  visit(t0, c);
  for (int i = 0; i < n; ++i) {
    const S t = t0 + h * i;
    auto f = [&](const S& tt, const Mat3<S>& cc) -> Mat3<S> { return cc * strapnav::skew(w(tt)); };
    const Mat3<S> k1 = f(t, c);
    const Mat3<S> k2 = f(t + h / 2, c + k1 * (h / 2));
    const Mat3<S> k3 = f(t + h / 2, c + k2 * (h / 2));
    const Mat3<S> k4 = f(t + h, c + k3 * h);
    c += (k1 + 2 * k2 + 2 * k3 + k4) * (h / 6);
    visit(t + h, c);
  }
  return c;
}

template <typename S>
Mat3<S> integrate_dcm(const RateFn<S>& w, const S& t0, const S& len, int n) {
  return integrate_dcm(w, t0, len, n, [](const S&, const Mat3<S>&) {});
}

// Smooth synthetic body motion: quadratic rate and specific force.
struct Motion {
  Vec3<Mp> w0{Mp("0.8"), Mp("-0.5"), Mp("0.3")};
  Vec3<Mp> w1{Mp("1.5"), Mp("2.0"), Mp("-1.0")};
  Vec3<Mp> w2{Mp("-3.0"), Mp("1.0"), Mp("4.0")};
  Vec3<Mp> f0{Mp("0.4"), Mp("-9.8"), Mp("1.2")};
  Vec3<Mp> f1{Mp("3.0"), Mp("-2.0"), Mp("5.0")};
  Vec3<Mp> f2{Mp("-8.0"), Mp("6.0"), Mp("2.0")};

  Vec3<Mp> w(const Mp& t) const { return w0 + w1 * t + w2 * (t * t); }
  Vec3<Mp> f(const Mp& t) const { return f0 + f1 * t + f2 * (t * t); }
  Vec3<Mp> w_int(const Mp& a, const Mp& b) const {
    return w0 * (b - a) + w1 * ((b * b - a * a) / 2) + w2 * ((b * b * b - a * a * a) / 3);
  }
  Vec3<Mp> f_int(const Mp& a, const Mp& b) const {
    return f0 * (b - a) + f1 * ((b * b - a * a) / 2) + f2 * ((b * b * b - a * a * a) / 3);
  }

  strapnav::ImuInterval<Mp> increments(const Mp& T) const {
    return {w_int(0, T / 2), w_int(T / 2, T), f_int(0, T / 2), f_int(T / 2, T), T};
  }

  // Composite Simpson over the RK4 nodes of C_{b(t)}^{b(0)}: the single
  // integral of C f and, via Cauchy's repeated-integration formula, the
  // double integral as the single integral of (T - t) C f.
  std::pair<Vec3<Mp>, Vec3<Mp>> oracle(const Mp& T, int n = 1000) const {
    Vec3<Mp> single = Vec3<Mp>::Zero();
    Vec3<Mp> twice = Vec3<Mp>::Zero();
    int i = 0;
    RateFn<Mp> rate = [this](const Mp& t) { return w(t); };
    integrate_dcm<Mp>(rate, Mp(0), T, n, [&](const Mp& t, const Mat3<Mp>& c) {
      const Mp wt = (i == 0 || i == n) ? 1 : (i % 2 == 1 ? 4 : 2);
      const Vec3<Mp> g = c * f(t);
      single += wt * g;
      twice += wt * (T - t) * g;
      ++i;
    });
    const Mp h = T / n;
    return {single * (h / 3), twice * (h / 3)};
  }
};

}  // namespace testing_support
