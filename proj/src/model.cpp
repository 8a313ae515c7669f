#include "socialpec/model.hpp"

#include "socialpec/rng.hpp"

namespace socialpec {

namespace {

std::size_t pooled_len(std::size_t t, const PoolSpec& p) {
  if (t >= p.window) {
    std::size_t span = t - p.window;
    std::size_t out = span / p.stride + 1;
    if (p.ceil_mode && span % p.stride != 0) ++out;
    if (p.ceil_mode) out = std::min(out, (t - 1) / p.stride + 1);
    return out;
  }
  return p.ceil_mode ? 1 : 0;
}

// Displacement scale for pattern initialization: a brisk walking speed over
// one 0.4 s annotation interval.
constexpr double kPatternStepSigma = 0.56;
constexpr double kPatternRange = 4.0;

PecEncoder init_encoder(const std::string& name, const EncoderConfig& cfg, RngStream& rng) {
  PecEncoder enc;
  enc.cfg = cfg;
  Tensor patterns({cfg.num_patterns, cfg.pattern_len, 2});
  for (std::size_t j = 0; j < cfg.num_patterns; ++j) {
    patterns.at(j, 0, 0) = rng.uniform(-kPatternRange, kPatternRange);
    patterns.at(j, 0, 1) = rng.uniform(-kPatternRange, kPatternRange);
    for (std::size_t k = 1; k < cfg.pattern_len; ++k) {
      patterns.at(j, k, 0) = patterns.at(j, k - 1, 0) + kPatternStepSigma * rng.normal();
      patterns.at(j, k, 1) = patterns.at(j, k - 1, 1) + kPatternStepSigma * rng.normal();
    }
  }
  enc.patterns = Parameter(name + ".patterns", std::move(patterns));
  // lambda < 0 makes closer segments score higher; bias starts neutral.
  enc.lambda = Parameter(name + ".lambda", Tensor::full({cfg.num_patterns}, -1.0));
  enc.bias = Parameter(name + ".pattern_bias", Tensor::zeros({cfg.num_patterns}));

  const double bound = 1.0 / std::sqrt(static_cast<double>(cfg.num_patterns * cfg.conv_len));
  Tensor kernels({cfg.conv_channels, cfg.num_patterns, cfg.conv_len});
  for (std::size_t i = 0; i < kernels.numel(); ++i) kernels[i] = rng.uniform(-bound, bound);
  enc.kernels = Parameter(name + ".conv_kernels", std::move(kernels));
  Tensor cbias({cfg.conv_channels});
  for (std::size_t i = 0; i < cbias.numel(); ++i) cbias[i] = rng.uniform(-bound, bound);
  enc.conv_bias = Parameter(name + ".conv_bias", std::move(cbias));
  return enc;
}

}  // namespace

std::size_t ModelConfig::encoder_out_len(const EncoderConfig& enc) const {
  const std::size_t after_pec = t_obs - enc.pattern_len + 1;
  const std::size_t after_pool = pooled_len(after_pec, enc.pool);
  if (after_pool < enc.conv_len) {
    throw DimensionError("encoder pipeline collapses below the conv kernel length");
  }
  return after_pool - enc.conv_len + 1;
}

std::size_t ModelConfig::mlp_input_width() const {
  return target.conv_channels * encoder_out_len(target) +
         context.conv_channels * encoder_out_len(context);
}

void ModelConfig::validate() const {
  if (context.num_patterns < 1 || target.num_patterns < 1) {
    throw ConfigError("model: at least one motion pattern per encoder is required");
  }
  if (t_obs < std::max(context.pattern_len, target.pattern_len)) {
    throw ConfigError("model: observation length shorter than the pattern length");
  }
  if (mlp_widths.empty() || mlp_widths.back() != 5) {
    throw ConfigError("model: the MLP must end in the 5 raw Gaussian outputs");
  }
}

LocationPredictorModel LocationPredictorModel::init(const ModelConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  RngStream rng = RngStream::keyed({seed, 0x6d6f64656cull});  // "model"
  LocationPredictorModel model;
  model.cfg = cfg;
  model.context = init_encoder("context", cfg.context, rng);
  model.target = init_encoder("target", cfg.target, rng);

  std::size_t in_width = cfg.mlp_input_width();
  for (std::size_t layer = 0; layer < cfg.mlp_widths.size(); ++layer) {
    const std::size_t out_width = cfg.mlp_widths[layer];
    const double bound = 1.0 / std::sqrt(static_cast<double>(in_width));
    Tensor w({out_width, in_width});
    for (std::size_t i = 0; i < w.numel(); ++i) w[i] = rng.uniform(-bound, bound);
    Tensor b({out_width});
    for (std::size_t i = 0; i < b.numel(); ++i) b[i] = rng.uniform(-bound, bound);
    const std::string idx = std::to_string(layer);
    model.mlp_weights.emplace_back("mlp." + idx + ".weight", std::move(w));
    model.mlp_biases.emplace_back("mlp." + idx + ".bias", std::move(b));
    in_width = out_width;
  }
  return model;
}

std::vector<Parameter*> LocationPredictorModel::parameters() {
  std::vector<Parameter*> out;
  for (PecEncoder* enc : {&context, &target}) {
    out.push_back(&enc->patterns);
    out.push_back(&enc->lambda);
    out.push_back(&enc->bias);
    out.push_back(&enc->kernels);
    out.push_back(&enc->conv_bias);
  }
  for (std::size_t i = 0; i < mlp_weights.size(); ++i) {
    out.push_back(&mlp_weights[i]);
    out.push_back(&mlp_biases[i]);
  }
  return out;
}

std::vector<const Parameter*> LocationPredictorModel::parameters() const {
  auto mutable_params = const_cast<LocationPredictorModel*>(this)->parameters();
  return {mutable_params.begin(), mutable_params.end()};
}

std::vector<Tensor> LocationPredictorModel::snapshot() const {
  std::vector<Tensor> snap;
  for (const Parameter* p : parameters()) snap.push_back(p->value);
  return snap;
}

void LocationPredictorModel::restore(const std::vector<Tensor>& snap) {
  auto params = parameters();
  if (snap.size() != params.size()) {
    throw ContractError("restore: snapshot has " + std::to_string(snap.size()) +
                        " tensors, model has " + std::to_string(params.size()));
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!params[i]->value.same_shape(snap[i])) {
      throw ContractError("restore: shape mismatch for " + params[i]->name);
    }
    params[i]->value = snap[i];
  }
}

namespace {

EncoderVars stage_encoder(Tape& tape, PecEncoder& enc) {
  return {tape.param(enc.patterns), tape.param(enc.lambda), tape.param(enc.bias),
          tape.param(enc.kernels), tape.param(enc.conv_bias)};
}

EncoderVars stage_encoder_frozen(Tape& tape, const PecEncoder& enc) {
  return {tape.ref(enc.patterns.value), tape.ref(enc.lambda.value), tape.ref(enc.bias.value),
          tape.ref(enc.kernels.value), tape.ref(enc.conv_bias.value)};
}

}  // namespace

ModelVars stage(Tape& tape, LocationPredictorModel& model) {
  ModelVars vars;
  vars.context = stage_encoder(tape, model.context);
  vars.target = stage_encoder(tape, model.target);
  for (std::size_t i = 0; i < model.mlp_weights.size(); ++i) {
    vars.mlp_w.push_back(tape.param(model.mlp_weights[i]));
    vars.mlp_b.push_back(tape.param(model.mlp_biases[i]));
  }
  return vars;
}

ModelVars stage_frozen(Tape& tape, const LocationPredictorModel& model) {
  ModelVars vars;
  vars.context = stage_encoder_frozen(tape, model.context);
  vars.target = stage_encoder_frozen(tape, model.target);
  for (std::size_t i = 0; i < model.mlp_weights.size(); ++i) {
    vars.mlp_w.push_back(tape.ref(model.mlp_weights[i].value));
    vars.mlp_b.push_back(tape.ref(model.mlp_biases[i].value));
  }
  return vars;
}

Var encode(Tape& tape, const EncoderVars& enc, const PoolSpec& pool, Var phi_2xt) {
  Var phi = ops::transpose2d(tape, phi_2xt);  // [T, 2] for the pattern layer
  Var psi = ops::pec(tape, phi, enc.patterns, enc.lambda, enc.bias);
  Var psi_ct = ops::transpose2d(tape, psi);  // patterns become channels
  Var activated = ops::tanh_act(tape, psi_ct);
  Var pooled = ops::maxpool1d(tape, activated, pool.window, pool.stride, pool.ceil_mode);
  Var conv = ops::conv1d(tape, pooled, enc.kernels, enc.conv_bias);
  return ops::tanh_act(tape, conv);
}

Var pool_context(Tape& tape, const std::vector<Var>& omegas,
                 const std::vector<std::size_t>& shape_if_empty) {
  if (omegas.empty()) {
    return tape.constant(Tensor::full(shape_if_empty, -1.0));
  }
  return ops::max_reduce(tape, omegas);
}

Tensor trajectory_2xt(const SceneWindow& window, std::size_t m) {
  window.check_ped(m);
  const std::size_t t_len = window.t_total();
  Tensor phi({2, t_len});
  for (std::size_t t = 0; t < t_len; ++t) {
    State s = window.at(m, t);
    phi.at(0, t) = s.x;
    phi.at(1, t) = s.y;
  }
  return phi;
}

Var loc_predict_raw(Tape& tape, const ModelVars& vars, const ModelConfig& cfg,
                    const SceneWindow& ego_window, std::size_t m) {
  ego_window.check_ped(m);
  if (ego_window.t_total() != cfg.t_obs) {
    throw DimensionError("loc_predict: window has " + std::to_string(ego_window.t_total()) +
                         " steps, model expects " + std::to_string(cfg.t_obs));
  }
  Var target_phi = tape.constant(trajectory_2xt(ego_window, m));
  Var omega_m = encode(tape, vars.target, cfg.target.pool, target_phi);

  std::vector<Var> context_omegas;
  context_omegas.reserve(ego_window.num_peds() - 1);
  for (std::size_t p = 0; p < ego_window.num_peds(); ++p) {
    if (p == m) continue;
    Var phi = tape.constant(trajectory_2xt(ego_window, p));
    context_omegas.push_back(encode(tape, vars.context, cfg.context.pool, phi));
  }
  Var omega_bar = pool_context(tape, context_omegas,
                               {cfg.context.conv_channels, cfg.encoder_out_len(cfg.context)});

  Var x = ops::concat(tape, ops::flatten(tape, omega_m), ops::flatten(tape, omega_bar));
  const std::size_t layers = vars.mlp_w.size();
  for (std::size_t i = 0; i < layers; ++i) {
    x = ops::dense(tape, x, vars.mlp_w[i], vars.mlp_b[i]);
    if (i + 1 < layers) x = ops::leaky_relu(tape, x, cfg.leaky_slope);
  }
  return x;
}

GaussianParams loc_predict(const LocationPredictorModel& model, const SceneWindow& ego_window,
                           std::size_t m) {
  Tape tape;
  ModelVars vars = stage_frozen(tape, model);
  Var raw = loc_predict_raw(tape, vars, model.cfg, ego_window, m);
  const Tensor& r = tape.val(raw);
  return gaussian_head({r[0], r[1], r[2], r[3], r[4]});
}

}  // namespace socialpec
