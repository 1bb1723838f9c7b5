#pragma once

// Full mechanization loop over a level-flight scenario with per-epoch error
// bookkeeping against the analytic truth.

#include "strapnav/geo.hpp"
#include "strapnav/scenarios.hpp"
#include "strapnav/updates.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace strapnav {

enum class AttitudeSource {
  IntegrateGyro,  ///< propagate C_b^n with attitude_update
  TruthAttitude,  ///< overwrite C_b^n with the truth each epoch
};

template <typename Scalar>
struct RunConfig {
  Scenario<Scalar> scenario;
  VelAlg vel_alg = VelAlg::Derived;
  PosAlg pos_alg = PosAlg::Derived;
  AttitudeSource attitude_source = AttitudeSource::IntegrateGyro;
  UpdateOptions options;
};

struct EpochRecord {
  double t = 0;
  Vec3<double> v_err = Vec3<double>::Zero();  ///< N, U, E (m/s)
  Vec3<double> p_err = Vec3<double>::Zero();  ///< N, U, E (m)
  double p_err_horiz = 0;

  double v_err_horiz() const { return std::hypot(v_err.x(), v_err.z()); }
};

struct RunSummary {
  double max_horiz_vel_err = 0;
  double max_horiz_pos_err = 0;
  double final_horiz_vel_err = 0;
  double final_horiz_pos_err = 0;
  double max_abs_vert_vel_err = 0;
  double max_dcm_orthonormality_err = 0;
};

struct RunResult {
  VelAlg vel_alg = VelAlg::Derived;
  PosAlg pos_alg = PosAlg::Derived;
  std::vector<EpochRecord> records;
  RunSummary summary;
};

/// Aborted run: singular geometry or a non-finite state at `epoch`.
class NumericalAbort : public std::runtime_error {
 public:
  NumericalAbort(std::int64_t epoch, double t, const std::string& why)
      : std::runtime_error("numerical abort at epoch " + std::to_string(epoch) + " (t = " +
                           std::to_string(t) + " s): " + why),
        epoch_(epoch),
        t_(t) {}

  std::int64_t epoch() const { return epoch_; }
  double time() const { return t_; }

 private:
  std::int64_t epoch_;
  double t_;
};

namespace detail {

template <typename Scalar>
bool all_finite(const NavState<Scalar>& s) {
  using std::isfinite;
  for (int i = 0; i < 3; ++i) {
    if (!isfinite(static_cast<double>(s.v(i)))) return false;
  }
  for (int i = 0; i < 9; ++i) {
    if (!isfinite(static_cast<double>(s.c_bn.matrix()(i)))) return false;
  }
  return isfinite(static_cast<double>(s.p.lon)) && isfinite(static_cast<double>(s.p.lat)) &&
         isfinite(static_cast<double>(s.p.h));
}

template <typename Scalar>
EpochRecord make_record(const EarthModel<Scalar>& earth, const Scalar& t,
                        const NavState<Scalar>& est, const NavState<Scalar>& truth) {
  EpochRecord r;
  r.t = static_cast<double>(t);
  const Vec3<Scalar> dv = est.v - truth.v;
  const Vec3<Scalar> dp = position_error_nue(earth, est.p, truth.p);
  for (int i = 0; i < 3; ++i) {
    r.v_err(i) = static_cast<double>(dv(i));
    r.p_err(i) = static_cast<double>(dp(i));
  }
  r.p_err_horiz = std::hypot(r.p_err.x(), r.p_err.z());
  return r;
}

}  // namespace detail

/// Runs one configuration from the truth initial state. Deterministic: the
/// same configuration always produces bit-identical records.
template <typename Scalar>
RunResult run(const EarthModel<Scalar>& earth, const RunConfig<Scalar>& cfg) {
  const LevelFlight<Scalar> flight(earth, cfg.scenario);
  const std::int64_t n = cfg.scenario.interval_count();
  const Scalar T = cfg.scenario.T;

  RunResult result;
  result.vel_alg = cfg.vel_alg;
  result.pos_alg = cfg.pos_alg;
  result.records.reserve(static_cast<std::size_t>(n + 1));

  NavState<Scalar> state = flight.truth_state(Scalar(0));
  result.records.push_back(detail::make_record(earth, Scalar(0), state, state));

  RunSummary& sum = result.summary;
  for (std::int64_t k = 0; k < n; ++k) {
    const Scalar t_k = T * Scalar(k);
    const Scalar t_next = T * Scalar(k + 1);
    NavState<Scalar> next;
    try {
      const ImuInterval<Scalar> imu = flight.imu_increments(t_k);
      const FrameRates<Scalar> rates = FrameRates<Scalar>::evaluate(earth, state.v, state.p);
      next.v = velocity_update(cfg.vel_alg, state, rates, imu, cfg.options);
      const Vec3<Scalar> r = position_increment(cfg.pos_alg, state, next.v, rates, imu, cfg.options);
      next.p = apply_position(earth, state.p, r);
      if (cfg.attitude_source == AttitudeSource::IntegrateGyro) {
        next.c_bn = attitude_update(state.c_bn, rates.w_in(), imu);
      } else {
        next.c_bn = flight.truth_state(t_next).c_bn;
      }
    } catch (const PolarSingularity& e) {
      throw NumericalAbort(k, static_cast<double>(t_k), e.what());
    }
    if (!detail::all_finite(next)) {
      throw NumericalAbort(k + 1, static_cast<double>(t_next), "non-finite navigation state");
    }
    state = next;

    const NavState<Scalar> truth = flight.truth_state(t_next);
    const EpochRecord rec = detail::make_record(earth, t_next, state, truth);
    sum.max_horiz_vel_err = std::max(sum.max_horiz_vel_err, rec.v_err_horiz());
    sum.max_horiz_pos_err = std::max(sum.max_horiz_pos_err, rec.p_err_horiz);
    sum.max_abs_vert_vel_err = std::max(sum.max_abs_vert_vel_err, std::abs(rec.v_err.y()));
    sum.max_dcm_orthonormality_err = std::max(
        sum.max_dcm_orthonormality_err, static_cast<double>(state.c_bn.orthonormality_error()));
    result.records.push_back(rec);
  }
  sum.final_horiz_vel_err = result.records.back().v_err_horiz();
  sum.final_horiz_pos_err = result.records.back().p_err_horiz;
  return result;
}

struct RankingRow {
  VelAlg vel_alg = VelAlg::Derived;
  PosAlg pos_alg = PosAlg::Derived;
  RunSummary summary;
};

template <typename Scalar>
bool same_scenario(const Scenario<Scalar>& a, const Scenario<Scalar>& b) {
  return a.kind == b.kind && a.lat0 == b.lat0 && a.lon0 == b.lon0 && a.h0 == b.h0 &&
         a.ve0 == b.ve0 && a.accel_amp == b.accel_amp && a.accel_freq == b.accel_freq &&
         a.T == b.T && a.duration == b.duration && a.substeps == b.substeps;
}

/// Rows sorted by max horizontal position error; ties keep algorithm order.
inline std::vector<RankingRow> rank_results(const std::vector<RunResult>& results) {
  std::vector<RankingRow> rows;
  rows.reserve(results.size());
  for (const auto& r : results) rows.push_back({r.vel_alg, r.pos_alg, r.summary});
  std::stable_sort(rows.begin(), rows.end(), [](const RankingRow& a, const RankingRow& b) {
    if (a.summary.max_horiz_pos_err != b.summary.max_horiz_pos_err) {
      return a.summary.max_horiz_pos_err < b.summary.max_horiz_pos_err;
    }
    if (a.vel_alg != b.vel_alg) return a.vel_alg < b.vel_alg;
    return a.pos_alg < b.pos_alg;
  });
  return rows;
}

/// Runs every configuration (up to max_threads at once) and returns the
/// results in input order. All configurations must share one scenario.
template <typename Scalar>
std::vector<RunResult> run_all(const EarthModel<Scalar>& earth,
                               const std::vector<RunConfig<Scalar>>& cfgs, unsigned max_threads) {
  if (cfgs.empty()) return {};
  for (const auto& c : cfgs) {
    if (!same_scenario(c.scenario, cfgs.front().scenario)) {
      throw std::invalid_argument("compared configurations must share one scenario");
    }
  }
  std::vector<RunResult> results(cfgs.size());
  std::vector<std::exception_ptr> errors(cfgs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cfgs.size(); i = next++) {
      try {
        results[i] = run(earth, cfgs[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t n_threads =
      std::clamp<std::size_t>(max_threads, 1, std::max<std::size_t>(cfgs.size(), 1));
  {
    std::vector<std::jthread> pool;
    for (std::size_t i = 1; i < n_threads; ++i) pool.emplace_back(worker);
    worker();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

template <typename Scalar>
std::vector<RankingRow> compare(const EarthModel<Scalar>& earth,
                                const std::vector<RunConfig<Scalar>>& cfgs,
                                unsigned max_threads = 1) {
  return rank_results(run_all(earth, cfgs, max_threads));
}

}  // namespace strapnav
