#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "socialpec/dataset.hpp"
#include "socialpec/model.hpp"

namespace socialpec {

struct TrainConfig {
  double lr = 0.001;
  std::size_t batch_size = 64;
  std::size_t epochs = 150;
  std::uint64_t seed = 1;
  std::size_t val_every = 1;      // epochs between validation passes
  std::string metrics_log_path;   // optional plain-text epoch log
};

struct TrainingHistory {
  std::vector<double> train_nll;
  std::vector<double> val_nll;  // NaN on epochs without a validation pass
  std::vector<double> seconds;
};

// One-step supervision: for every fully present pedestrian of every training
// window (truncated to t_obs + 1 steps), predict the next egocentric location
// and take the Gaussian NLL against the converted ground truth. Batch loss is
// the sample mean; one Adam step per batch. Sample order is reshuffled each
// epoch from a single generator seeded by cfg.seed, so a rerun with the same
// config is bit-identical. The model ends at the parameters with the best
// validation NLL (final parameters when there is no validation data).
TrainingHistory train(LocationPredictorModel& model, const DatasetSplit& splits,
                      const TrainConfig& cfg);

// Mean one-step NLL of the model over the (window, pedestrian) samples of
// the given windows; used for validation and reporting.
double mean_nll(const LocationPredictorModel& model, const std::vector<SceneWindow>& windows);

}  // namespace socialpec
