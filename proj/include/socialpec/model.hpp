#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "socialpec/gaussian.hpp"
#include "socialpec/geometry.hpp"
#include "socialpec/ops.hpp"

namespace socialpec {

struct PoolSpec {
  std::size_t window = 2;
  std::size_t stride = 2;
  bool ceil_mode = true;

  bool operator==(const PoolSpec&) const = default;
};

struct EncoderConfig {
  std::size_t num_patterns = 0;   // N
  std::size_t pattern_len = 2;    // L
  std::size_t conv_channels = 0;  // kernels of the conventional layer
  std::size_t conv_len = 2;
  PoolSpec pool;

  bool operator==(const EncoderConfig&) const = default;
};

struct ModelConfig {
  EncoderConfig context{100, 2, 160, 2, {}};
  EncoderConfig target{50, 2, 80, 2, {}};
  std::vector<std::size_t> mlp_widths{300, 120, 80, 5};
  std::size_t t_obs = 8;
  double leaky_slope = 0.01;

  // Time extent surviving the pec -> pool -> conv pipeline for a t_obs-step
  // trajectory. With the defaults: 8 -> 7 -> 4 -> 3.
  std::size_t encoder_out_len(const EncoderConfig& enc) const;

  // Flattened target embedding followed by the flattened context embedding.
  std::size_t mlp_input_width() const;

  void validate() const;

  bool operator==(const ModelConfig&) const = default;
};

// One trajectory encoder: a pattern-extraction layer (the learned motion
// patterns with their scales and biases) followed by a conventional
// convolution, with tanh activations and max pooling in between.
struct PecEncoder {
  EncoderConfig cfg;
  Parameter patterns;   // [N, L, 2] pattern states, egocentric meters
  Parameter lambda;     // [N] scale per pattern
  Parameter bias;       // [N]
  Parameter kernels;    // [C_out, N, conv_len]
  Parameter conv_bias;  // [C_out]
};

// The full location predictor: context and target trajectory encoders plus
// the MLP head producing the 5 raw Gaussian outputs.
struct LocationPredictorModel {
  ModelConfig cfg;
  PecEncoder context;
  PecEncoder target;
  std::vector<Parameter> mlp_weights;
  std::vector<Parameter> mlp_biases;

  static LocationPredictorModel init(const ModelConfig& cfg, std::uint64_t seed);

  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;

  std::vector<Tensor> snapshot() const;
  void restore(const std::vector<Tensor>& snap);
};

// Parameter slots staged on a tape.
struct EncoderVars {
  Var patterns, lambda, bias, kernels, conv_bias;
};
struct ModelVars {
  EncoderVars context, target;
  std::vector<Var> mlp_w, mlp_b;
};

// Stage for training (gradients will be deposited) or frozen inference.
ModelVars stage(Tape& tape, LocationPredictorModel& model);
ModelVars stage_frozen(Tape& tape, const LocationPredictorModel& model);

// Encoder pipeline tanh(conv(maxpool(tanh(pec(phi))))) for phi:[2, T].
Var encode(Tape& tape, const EncoderVars& enc, const PoolSpec& pool, Var phi_2xt);

// Elementwise max over the context embeddings; an empty context yields a
// tensor filled with -1, the infimum of the tanh-bounded embedding.
Var pool_context(Tape& tape, const std::vector<Var>& omegas,
                 const std::vector<std::size_t>& shape_if_empty);

// Raw 5-wide head output for target pedestrian m of an egocentric window
// with exactly cfg.t_obs steps.
Var loc_predict_raw(Tape& tape, const ModelVars& vars, const ModelConfig& cfg,
                    const SceneWindow& ego_window, std::size_t m);

// One-step location distribution for pedestrian m; the window must already
// be in m's egocentric frame.
GaussianParams loc_predict(const LocationPredictorModel& model, const SceneWindow& ego_window,
                           std::size_t m);

// [2, T] tensor (x row then y row) of pedestrian m's trajectory.
Tensor trajectory_2xt(const SceneWindow& window, std::size_t m);

}  // namespace socialpec
