#pragma once

#include <cstdint>

#include "socialpec/model.hpp"
#include "socialpec/rng.hpp"

namespace socialpec {

enum class RolloutMode { sample, mean };

struct RolloutConfig {
  RolloutMode mode = RolloutMode::sample;
  std::size_t num_rollouts = 1;  // K
  std::uint64_t seed = 0;
  std::size_t t_pred = 12;
};

// One-step location predictor abstraction so the rollout loop can run over
// the trained model or a test stand-in.
class LocPredictor {
 public:
  virtual ~LocPredictor() = default;
  // window is already in pedestrian m's egocentric frame, t_obs steps long.
  virtual GaussianParams predict(const SceneWindow& ego_window, std::size_t m) const = 0;
};

class ModelLocPredictor final : public LocPredictor {
 public:
  explicit ModelLocPredictor(const LocationPredictorModel& model) : model_(&model) {}
  GaussianParams predict(const SceneWindow& ego_window, std::size_t m) const override {
    return loc_predict(*model_, ego_window, m);
  }

 private:
  const LocationPredictorModel* model_;
};

// Draw from the Gaussian via its Cholesky factor and two standard normals
// from the stream.
State sample_location(const GaussianParams& g, RngStream& rng);

// Autoregressive rollout: per future step, every pedestrian is converted to
// its own frame, predicted, sampled (or taken at the mean) and written back
// in world coordinates as the observation for the next step. All pedestrians
// of one step read the same window, and the sampling streams are keyed by
// (seed, rollout, pedestrian id, step), so results do not depend on
// iteration order. Returns [K, M, t_pred, 2] world coordinates.
//
// obs must hold at least t_obs steps; the trailing t_obs are used.
Tensor rollout(const LocPredictor& predictor, const SceneWindow& obs, const RolloutConfig& cfg);

}  // namespace socialpec
