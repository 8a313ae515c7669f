#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "socialpec/checkpoint.hpp"
#include "socialpec/config.hpp"
#include "socialpec/dataset.hpp"
#include "socialpec/evaluation.hpp"
#include "socialpec/pattern_export.hpp"
#include "socialpec/trainer.hpp"

namespace {

using namespace socialpec;

std::vector<NamedWindows> load_sets(const RunConfig& cfg) {
  if (cfg.manifest_path.empty()) {
    throw ConfigError("config: a dataset manifest is required for this command");
  }
  std::vector<NamedWindows> sets;
  const std::size_t t_total = cfg.t_obs + cfg.t_pred;
  for (const auto& [name, path] : load_manifest(cfg.manifest_path)) {
    const std::vector<AnnotationRecord> records = load_annotation_file(path);
    NamedWindows set;
    set.name = name;
    if (cfg.allow_frame_gaps) {
      for (const auto& segment : split_on_frame_gaps(records)) {
        auto ws = build_windows(segment, t_total, cfg.stride, cfg.t_obs);
        set.windows.insert(set.windows.end(), ws.begin(), ws.end());
      }
    } else {
      set.windows = build_windows(records, t_total, cfg.stride, cfg.t_obs);
    }
    sets.push_back(std::move(set));
  }
  return sets;
}

void write_report(const MetricsReport& report, const std::string& path) {
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!path.empty()) {
    file.open(path);
    if (!file) throw ConfigError("cannot write report to " + path);
    out = &file;
  }
  *out << "set: " << (report.set_name.empty() ? "-" : report.set_name) << '\n'
       << "ade_m: " << report.ade << '\n'
       << "fde_m: " << report.fde << '\n'
       << "k: " << report.k << '\n'
       << "seed: " << report.seed << '\n'
       << "num_windows: " << report.num_windows << '\n'
       << "num_pedestrians: " << report.num_pedestrians << '\n';
  *out << summary_line(report) << '\n';
}

int cmd_train(const std::string& config_path) {
  const RunConfig cfg = RunConfig::from_file(config_path);
  if (cfg.test_set.empty()) {
    throw ConfigError("config: test_set is required for train");
  }
  const std::vector<NamedWindows> sets = load_sets(cfg);
  const DatasetSplit split = split_leave_one_out(sets, cfg.test_set, cfg.val_fraction, cfg.seed);
  std::cout << "windows: train=" << split.train.size() << " val=" << split.val.size()
            << " test=" << split.test.size() << " (test set " << cfg.test_set << ")\n";

  ModelConfig model_cfg;
  model_cfg.t_obs = cfg.t_obs;
  LocationPredictorModel model = LocationPredictorModel::init(model_cfg, cfg.seed);

  TrainConfig train_cfg;
  train_cfg.lr = cfg.lr;
  train_cfg.batch_size = cfg.batch_size;
  train_cfg.epochs = cfg.epochs;
  train_cfg.seed = cfg.seed;
  train_cfg.val_every = cfg.val_every;
  train_cfg.metrics_log_path = cfg.metrics_log;
  const TrainingHistory history = train(model, split, train_cfg);

  double best_val = std::numeric_limits<double>::infinity();
  for (double v : history.val_nll) {
    if (std::isfinite(v)) best_val = std::min(best_val, v);
  }
  CheckpointMeta meta;
  meta.seed = cfg.seed;
  meta.epochs = cfg.epochs;
  meta.best_val_nll = std::isfinite(best_val) ? best_val : history.train_nll.back();
  const std::string out_path =
      cfg.checkpoint_out.empty() ? "socialpec_checkpoint.json" : cfg.checkpoint_out;
  save_checkpoint(out_path, model, meta);
  std::cout << "final train NLL " << history.train_nll.back() << ", best val NLL "
            << meta.best_val_nll << '\n';
  std::cout << "checkpoint written to " << out_path << '\n';
  return 0;
}

int cmd_eval(const std::string& checkpoint_path, const std::string& config_path, std::size_t k,
             const std::string& mode) {
  RunConfig cfg = RunConfig::from_file(config_path);
  if (cfg.test_set.empty()) {
    throw ConfigError("config: test_set is required for eval");
  }
  if (k != 0) cfg.k = k;
  if (!mode.empty()) cfg.mode = parse_mode(mode);

  const LocationPredictorModel model = load_checkpoint(checkpoint_path);
  if (model.cfg.t_obs != cfg.t_obs) {
    throw ConfigError("config t_obs " + std::to_string(cfg.t_obs) +
                      " does not match checkpoint t_obs " + std::to_string(model.cfg.t_obs));
  }
  const std::vector<NamedWindows> sets = load_sets(cfg);
  const DatasetSplit split = split_leave_one_out(sets, cfg.test_set, cfg.val_fraction, cfg.seed);

  const PecForecaster forecaster(model, cfg.mode);
  EvalOptions opts;
  opts.mode = cfg.mode;
  opts.independent_fde = cfg.independent_fde;
  MetricsReport report = evaluate(forecaster, split.test, cfg.k, cfg.eval_seed, opts);
  report.set_name = cfg.test_set;
  write_report(report, cfg.report_out);
  if (!cfg.report_out.empty()) std::cout << summary_line(report) << '\n';
  return 0;
}

int cmd_baseline(const std::string& config_path) {
  const RunConfig cfg = RunConfig::from_file(config_path);
  const std::vector<NamedWindows> sets = load_sets(cfg);
  const LinearForecaster baseline;
  EvalOptions opts;
  opts.mode = RolloutMode::mean;

  double ade_sum = 0.0, fde_sum = 0.0;
  std::size_t peds = 0;
  for (const NamedWindows& set : sets) {
    if (!cfg.test_set.empty() && set.name != cfg.test_set) continue;
    MetricsReport report = evaluate(baseline, set.windows, 1, cfg.eval_seed, opts);
    report.set_name = set.name;
    std::cout << summary_line(report) << '\n';
    ade_sum += report.ade * static_cast<double>(report.num_pedestrians);
    fde_sum += report.fde * static_cast<double>(report.num_pedestrians);
    peds += report.num_pedestrians;
  }
  if (peds == 0) {
    throw ConfigError("baseline: no windows to evaluate");
  }
  std::printf("aggregate ADE/FDE: %.2f / %.2f over %zu pedestrians\n",
              ade_sum / static_cast<double>(peds), fde_sum / static_cast<double>(peds), peds);
  return 0;
}

int cmd_predict(const std::string& checkpoint_path, const std::string& input_path,
                const std::string& out_path, std::size_t k, const std::string& mode,
                std::size_t t_pred, std::uint64_t seed) {
  const LocationPredictorModel model = load_checkpoint(checkpoint_path);
  const std::vector<AnnotationRecord> records = load_annotation_file(input_path);
  if (records.empty()) {
    throw DataError("predict: no annotations in " + input_path);
  }
  // Pedestrians fully present over the final t_obs frames are extrapolated.
  std::vector<std::int64_t> frames;
  for (const AnnotationRecord& r : records) {
    if (frames.empty() || frames.back() != r.frame_id) frames.push_back(r.frame_id);
  }
  if (frames.size() < model.cfg.t_obs) {
    throw DataError("predict: input has " + std::to_string(frames.size()) +
                    " frames, need " + std::to_string(model.cfg.t_obs));
  }
  const std::int64_t frame_step = frames.size() > 1 ? frames[1] - frames[0] : 1;
  std::vector<AnnotationRecord> tail;
  const std::int64_t first_kept = frames[frames.size() - model.cfg.t_obs];
  for (const AnnotationRecord& r : records) {
    if (r.frame_id >= first_kept) tail.push_back(r);
  }
  const std::vector<SceneWindow> windows =
      build_windows(tail, model.cfg.t_obs, 1, model.cfg.t_obs);
  if (windows.empty()) {
    throw DataError("predict: no pedestrian covers the last " +
                    std::to_string(model.cfg.t_obs) + " frames");
  }
  const SceneWindow& obs = windows.front();

  RolloutConfig roll;
  roll.mode = mode.empty() ? RolloutMode::sample : parse_mode(mode);
  roll.num_rollouts = k;
  roll.seed = seed;
  roll.t_pred = t_pred;
  const ModelLocPredictor predictor(model);
  const Tensor pred = rollout(predictor, obs, roll);

  std::ofstream out(out_path);
  if (!out) {
    throw ConfigError("predict: cannot write " + out_path);
  }
  out << std::setprecision(17);
  const std::size_t num_peds = obs.num_peds();
  for (std::size_t ki = 0; ki < roll.num_rollouts; ++ki) {
    for (std::size_t t = 0; t < roll.t_pred; ++t) {
      const std::int64_t frame = frames.back() + static_cast<std::int64_t>(t + 1) * frame_step;
      for (std::size_t m = 0; m < num_peds; ++m) {
        const std::size_t base = ((ki * num_peds + m) * roll.t_pred + t) * 2;
        out << frame << ' ' << obs.ped_ids[m] << ' ' << pred[base] << ' ' << pred[base + 1]
            << ' ' << ki << '\n';
      }
    }
  }
  std::cout << "wrote " << roll.num_rollouts * roll.t_pred * num_peds << " rows to " << out_path
            << '\n';
  return 0;
}

int cmd_dump_patterns(const std::string& checkpoint_path, const std::string& format,
                      const std::string& which, const std::string& out_path,
                      double axis_range) {
  const LocationPredictorModel model = load_checkpoint(checkpoint_path);
  const std::string path = out_path.empty() ? ("patterns_" + which + "." + format) : out_path;
  export_patterns(path, model, which, format, axis_range);
  std::cout << "wrote " << path << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Social-PEC trajectory prediction toolkit"};
  app.require_subcommand(1);

  std::string config_path, checkpoint_path, input_path, out_path, mode, format = "csv",
                                                                        which = "context";
  std::size_t k = 0;
  std::size_t t_pred = 12;
  std::uint64_t seed = 1;
  double axis_range = 6.0;

  CLI::App* train_cmd = app.add_subcommand("train", "Train on the leave-one-out split");
  train_cmd->add_option("--config", config_path, "run configuration file")->required();

  CLI::App* eval_cmd = app.add_subcommand("eval", "Best-of-K evaluation on the test set");
  eval_cmd->add_option("--checkpoint", checkpoint_path, "model checkpoint")->required();
  eval_cmd->add_option("--config", config_path, "run configuration file")->required();
  eval_cmd->add_option("--k", k, "rollouts per pedestrian (overrides config)");
  eval_cmd->add_option("--mode", mode, "sample|mean (overrides config)");

  CLI::App* baseline_cmd =
      app.add_subcommand("baseline", "Linear-extrapolation baseline metrics");
  baseline_cmd->add_option("--config", config_path, "run configuration file")->required();

  CLI::App* predict_cmd = app.add_subcommand("predict", "Roll out futures for one scene");
  predict_cmd->add_option("--checkpoint", checkpoint_path, "model checkpoint")->required();
  predict_cmd->add_option("--input", input_path, "annotation file (frame ped x y)")->required();
  predict_cmd->add_option("--out", out_path, "output file (frame ped x y rollout_k)")
      ->required();
  predict_cmd->add_option("--k", k, "number of rollouts")->default_val(1);
  predict_cmd->add_option("--mode", mode, "sample|mean");
  predict_cmd->add_option("--t-pred", t_pred, "prediction horizon in steps");
  predict_cmd->add_option("--seed", seed, "sampling seed");

  CLI::App* dump_cmd = app.add_subcommand("dump-patterns", "Export learned motion patterns");
  dump_cmd->add_option("--checkpoint", checkpoint_path, "model checkpoint")->required();
  dump_cmd->add_option("--format", format, "csv|svg");
  dump_cmd->add_option("--which", which, "context|target");
  dump_cmd->add_option("--out", out_path, "output path");
  dump_cmd->add_option("--axis-range", axis_range, "svg half-extent in meters");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train_cmd->parsed()) return cmd_train(config_path);
    if (eval_cmd->parsed()) return cmd_eval(checkpoint_path, config_path, k, mode);
    if (baseline_cmd->parsed()) return cmd_baseline(config_path);
    if (predict_cmd->parsed()) {
      return cmd_predict(checkpoint_path, input_path, out_path, k == 0 ? 1 : k, mode, t_pred,
                         seed);
    }
    if (dump_cmd->parsed()) {
      return cmd_dump_patterns(checkpoint_path, format, which, out_path, axis_range);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
