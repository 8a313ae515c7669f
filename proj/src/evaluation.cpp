#include "socialpec/evaluation.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace socialpec {

std::pair<double, double> displacement_metrics(const Tensor& pred, const Tensor& truth) {
  if (pred.rank() != 2 || pred.extent(1) != 2) {
    throw DimensionError("displacement_metrics: prediction must be [T, 2], got " +
                         shape_str(pred.shape()));
  }
  if (!pred.same_shape(truth)) {
    throw DimensionError("displacement_metrics: prediction " + shape_str(pred.shape()) +
                         " vs truth " + shape_str(truth.shape()));
  }
  const std::size_t t_len = pred.extent(0);
  if (t_len < 1) {
    throw DimensionError("displacement_metrics: empty trajectories");
  }
  double total = 0.0;
  double last = 0.0;
  for (std::size_t t = 0; t < t_len; ++t) {
    const double dx = pred.at(t, 0) - truth.at(t, 0);
    const double dy = pred.at(t, 1) - truth.at(t, 1);
    last = std::sqrt(dx * dx + dy * dy);
    total += last;
  }
  return {total / static_cast<double>(t_len), last};
}

Tensor PecForecaster::forecast(const SceneWindow& obs, const RolloutConfig& cfg) const {
  RolloutConfig run = cfg;
  run.mode = mode_;
  return rollout(predictor_, obs, run);
}

Tensor LinearForecaster::forecast(const SceneWindow& obs, const RolloutConfig& cfg) const {
  const std::size_t num_peds = obs.num_peds();
  Tensor out({cfg.num_rollouts, num_peds, cfg.t_pred, 2});
  const SceneWindow tail = obs.slice_time(obs.t_total() - obs.t_obs, obs.t_total());
  for (std::size_t m = 0; m < num_peds; ++m) {
    const std::vector<State> traj = tail.trajectory(m);
    const std::vector<State> future = linear_extrapolate(traj, cfg.t_pred);
    for (std::size_t k = 0; k < cfg.num_rollouts; ++k) {
      for (std::size_t t = 0; t < cfg.t_pred; ++t) {
        out[((k * num_peds + m) * cfg.t_pred + t) * 2] = future[t].x;
        out[((k * num_peds + m) * cfg.t_pred + t) * 2 + 1] = future[t].y;
      }
    }
  }
  return out;
}

namespace {

Tensor slice_rollout(const Tensor& rollouts, std::size_t k, std::size_t m) {
  const std::size_t t_pred = rollouts.extent(2);
  const std::size_t num_peds = rollouts.extent(1);
  Tensor traj({t_pred, 2});
  for (std::size_t t = 0; t < t_pred; ++t) {
    traj.at(t, 0) = rollouts[((k * num_peds + m) * t_pred + t) * 2];
    traj.at(t, 1) = rollouts[((k * num_peds + m) * t_pred + t) * 2 + 1];
  }
  return traj;
}

Tensor truth_of(const SceneWindow& window, std::size_t m) {
  const std::size_t t_pred = window.t_total() - window.t_obs;
  Tensor traj({t_pred, 2});
  for (std::size_t t = 0; t < t_pred; ++t) {
    State s = window.at(m, window.t_obs + t);
    traj.at(t, 0) = s.x;
    traj.at(t, 1) = s.y;
  }
  return traj;
}

}  // namespace

MetricsReport evaluate(const TrajectoryForecaster& forecaster,
                       const std::vector<SceneWindow>& windows, std::size_t k,
                       std::uint64_t seed, EvalOptions opts) {
  if (k < 1) {
    throw ConfigError("evaluate: K must be >= 1");
  }
  MetricsReport report;
  report.k = k;
  report.seed = seed;

  double ade_sum = 0.0;
  double fde_sum = 0.0;
  for (std::size_t wi = 0; wi < windows.size(); ++wi) {
    const SceneWindow& window = windows[wi];
    if (window.t_total() <= window.t_obs) {
      throw InvalidInputError("evaluate: window has no future ground truth");
    }
    RolloutConfig cfg;
    cfg.mode = opts.mode;
    cfg.num_rollouts = k;
    cfg.t_pred = window.t_total() - window.t_obs;
    // Per-window stream family; stable across different K so the rollouts
    // nest.
    cfg.seed = mix64(seed ^ mix64(static_cast<std::uint64_t>(window.start_frame) + wi));
    const SceneWindow obs = window.slice_time(0, window.t_obs);
    const Tensor rollouts = forecaster.forecast(obs, cfg);

    for (std::size_t m = 0; m < window.num_peds(); ++m) {
      const Tensor truth = truth_of(window, m);
      double best_ade = std::numeric_limits<double>::infinity();
      double best_fde = std::numeric_limits<double>::infinity();
      double fde_of_best = 0.0;
      for (std::size_t ki = 0; ki < k; ++ki) {
        auto [ade, fde] = displacement_metrics(slice_rollout(rollouts, ki, m), truth);
        if (ade < best_ade) {
          best_ade = ade;
          fde_of_best = fde;
        }
        best_fde = std::min(best_fde, fde);
      }
      PedestrianResult ped;
      ped.window_index = wi;
      ped.ped_id = window.ped_ids[m];
      ped.ade = best_ade;
      ped.fde = opts.independent_fde ? best_fde : fde_of_best;
      report.per_pedestrian.push_back(ped);
      ade_sum += ped.ade;
      fde_sum += ped.fde;
      ++report.num_pedestrians;
    }
    ++report.num_windows;
  }
  if (report.num_pedestrians > 0) {
    report.ade = ade_sum / static_cast<double>(report.num_pedestrians);
    report.fde = fde_sum / static_cast<double>(report.num_pedestrians);
  }
  return report;
}

std::string summary_line(const MetricsReport& report) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "ADE/FDE: %.2f / %.2f (K=%zu, set=%s)", report.ade, report.fde,
                report.k, report.set_name.empty() ? "-" : report.set_name.c_str());
  return buf;
}

}  // namespace socialpec
