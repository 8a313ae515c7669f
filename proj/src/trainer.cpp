#include "socialpec/trainer.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>

#include "socialpec/adam.hpp"
#include "socialpec/rng.hpp"

namespace socialpec {

namespace {

struct TrainSample {
  std::size_t window;  // index into the truncated window list
  std::size_t ped;
};

// Truncate to the supervised horizon (t_obs observed + 1 future step) and
// enumerate every (window, pedestrian) pair.
std::vector<SceneWindow> truncate_windows(const std::vector<SceneWindow>& windows) {
  std::vector<SceneWindow> out;
  out.reserve(windows.size());
  for (const SceneWindow& w : windows) {
    if (w.t_total() < w.t_obs + 1) {
      throw InvalidInputError("training window needs t_obs + 1 steps, got " +
                              std::to_string(w.t_total()));
    }
    out.push_back(w.slice_time(0, w.t_obs + 1));
  }
  return out;
}

std::vector<TrainSample> enumerate_samples(const std::vector<SceneWindow>& windows) {
  std::vector<TrainSample> samples;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    for (std::size_t m = 0; m < windows[i].num_peds(); ++m) samples.push_back({i, m});
  }
  return samples;
}

// NLL of one sample on the shared tape.
Var sample_loss(Tape& tape, const ModelVars& vars, const ModelConfig& cfg, const SceneWindow& w,
                std::size_t m) {
  SceneWindow obs = w.slice_time(0, w.t_obs);
  auto [ego, frame] = convert(obs, m);
  State truth = frame.to_local(w.at(m, w.t_obs));
  Var raw = loc_predict_raw(tape, vars, cfg, ego, m);
  return ops::gaussian_nll(tape, raw, truth);
}

}  // namespace

double mean_nll(const LocationPredictorModel& model, const std::vector<SceneWindow>& windows) {
  const std::vector<SceneWindow> truncated = truncate_windows(windows);
  double total = 0.0;
  std::size_t count = 0;
  for (const SceneWindow& w : truncated) {
    SceneWindow obs = w.slice_time(0, w.t_obs);
    for (std::size_t m = 0; m < w.num_peds(); ++m) {
      auto [ego, frame] = convert(obs, m);
      State truth = frame.to_local(w.at(m, w.t_obs));
      total += nll(loc_predict(model, ego, m), truth);
      ++count;
    }
  }
  if (count == 0) return std::numeric_limits<double>::quiet_NaN();
  return total / static_cast<double>(count);
}

TrainingHistory train(LocationPredictorModel& model, const DatasetSplit& splits,
                      const TrainConfig& cfg) {
  if (splits.train.empty()) {
    throw ConfigError("train: empty training set");
  }
  if (cfg.batch_size < 1 || cfg.epochs < 1 || !(cfg.lr > 0.0)) {
    throw ConfigError("train: need lr > 0, batch_size >= 1, epochs >= 1");
  }
  const std::vector<SceneWindow> train_windows = truncate_windows(splits.train);
  std::vector<TrainSample> samples = enumerate_samples(train_windows);

  AdamHyper hyper;
  hyper.lr = cfg.lr;
  Adam optimizer(model.parameters(), hyper);

  std::ofstream log;
  if (!cfg.metrics_log_path.empty()) {
    log.open(cfg.metrics_log_path, std::ios::app);
    if (!log) throw ConfigError("train: cannot open metrics log " + cfg.metrics_log_path);
  }

  RngStream shuffle_rng = RngStream::keyed({cfg.seed, 0x45504f4348ull});  // "EPOCH"
  TrainingHistory history;
  double best_val = std::numeric_limits<double>::infinity();
  std::vector<Tensor> best_snapshot;

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto epoch_start = std::chrono::steady_clock::now();
    shuffle(samples, shuffle_rng);

    double epoch_loss = 0.0;
    for (std::size_t begin = 0; begin < samples.size(); begin += cfg.batch_size) {
      const std::size_t end = std::min(begin + cfg.batch_size, samples.size());
      Tape tape;
      ModelVars vars = stage(tape, model);
      std::vector<Var> losses;
      losses.reserve(end - begin);
      for (std::size_t i = begin; i < end; ++i) {
        const TrainSample& s = samples[i];
        losses.push_back(sample_loss(tape, vars, model.cfg, train_windows[s.window], s.ped));
      }
      Var batch_loss = ops::scale(tape, ops::sum_list(tape, losses),
                                  1.0 / static_cast<double>(losses.size()));
      const double loss_value = tape.val(batch_loss).item();
      if (!std::isfinite(loss_value)) {
        throw ContractError("train: non-finite loss at epoch " + std::to_string(epoch));
      }
      epoch_loss += loss_value * static_cast<double>(losses.size());
      tape.backward(batch_loss);
      optimizer.step();
      for (const Parameter* p : model.parameters()) {
        p->value.assert_finite("parameter " + p->name + " after optimizer step");
      }
    }
    history.train_nll.push_back(epoch_loss / static_cast<double>(samples.size()));

    double val = std::numeric_limits<double>::quiet_NaN();
    const bool last_epoch = epoch + 1 == cfg.epochs;
    if (!splits.val.empty() && (epoch % std::max<std::size_t>(cfg.val_every, 1) == 0 ||
                                last_epoch)) {
      val = mean_nll(model, splits.val);
      if (val < best_val) {
        best_val = val;
        best_snapshot = model.snapshot();
      }
    }
    history.val_nll.push_back(val);

    const auto epoch_end = std::chrono::steady_clock::now();
    history.seconds.push_back(std::chrono::duration<double>(epoch_end - epoch_start).count());

    if (log.is_open()) {
      log << epoch << ' ' << history.train_nll.back() << ' ' << history.val_nll.back() << ' '
          << history.seconds.back() << '\n';
      log.flush();
    }
  }

  if (!best_snapshot.empty()) {
    model.restore(best_snapshot);
  }
  return history;
}

}  // namespace socialpec
