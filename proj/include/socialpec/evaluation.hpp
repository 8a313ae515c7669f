#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "socialpec/geometry.hpp"
#include "socialpec/predictor.hpp"

namespace socialpec {

// Best-of-K outcome for one pedestrian of one window.
struct PedestrianResult {
  std::size_t window_index = 0;
  std::int64_t ped_id = 0;
  double ade = 0.0;
  double fde = 0.0;
};

struct MetricsReport {
  std::string set_name;
  double ade = 0.0;
  double fde = 0.0;
  std::size_t k = 1;
  std::uint64_t seed = 0;
  std::size_t num_windows = 0;
  std::size_t num_pedestrians = 0;
  std::vector<PedestrianResult> per_pedestrian;
};

// ade = mean_t ||pred_t - truth_t||, fde = final-step error; both in meters.
std::pair<double, double> displacement_metrics(const Tensor& pred, const Tensor& truth);

// Produces K candidate future trajectories for every pedestrian of an
// observed window, in world coordinates: [K, M, t_pred, 2].
class TrajectoryForecaster {
 public:
  virtual ~TrajectoryForecaster() = default;
  virtual Tensor forecast(const SceneWindow& obs, const RolloutConfig& cfg) const = 0;
};

// The trained model behind the rollout loop.
class PecForecaster final : public TrajectoryForecaster {
 public:
  explicit PecForecaster(const LocationPredictorModel& model, RolloutMode mode)
      : predictor_(model), mode_(mode) {}
  Tensor forecast(const SceneWindow& obs, const RolloutConfig& cfg) const override;

 private:
  ModelLocPredictor predictor_;
  RolloutMode mode_;
};

// Deterministic constant-velocity baseline; every rollout is identical.
class LinearForecaster final : public TrajectoryForecaster {
 public:
  Tensor forecast(const SceneWindow& obs, const RolloutConfig& cfg) const override;
};

struct EvalOptions {
  RolloutMode mode = RolloutMode::sample;
  // Report the FDE of the ADE-minimizing trajectory (default) or the
  // independent minimum over rollouts.
  bool independent_fde = false;
};

// Best-of-K evaluation: per pedestrian, the rollout minimizing its ADE is
// selected and reported. Aggregation weights every pedestrian equally across
// all windows. Sampling streams are nested in K, so growing K can only
// improve the per-pedestrian ADE.
MetricsReport evaluate(const TrajectoryForecaster& forecaster,
                       const std::vector<SceneWindow>& windows, std::size_t k,
                       std::uint64_t seed, EvalOptions opts = {});

// "ADE/FDE: a.aa / f.ff (K=..., set=...)"
std::string summary_line(const MetricsReport& report);

}  // namespace socialpec
