#include "socialpec/checkpoint.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace socialpec {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

json encoder_config_json(const EncoderConfig& cfg) {
  return json{{"num_patterns", cfg.num_patterns},
              {"pattern_len", cfg.pattern_len},
              {"conv_channels", cfg.conv_channels},
              {"conv_len", cfg.conv_len},
              {"pool_window", cfg.pool.window},
              {"pool_stride", cfg.pool.stride},
              {"pool_ceil", cfg.pool.ceil_mode}};
}

EncoderConfig encoder_config_from(const json& j, const std::string& where) {
  EncoderConfig cfg;
  try {
    cfg.num_patterns = j.at("num_patterns").get<std::size_t>();
    cfg.pattern_len = j.at("pattern_len").get<std::size_t>();
    cfg.conv_channels = j.at("conv_channels").get<std::size_t>();
    cfg.conv_len = j.at("conv_len").get<std::size_t>();
    cfg.pool.window = j.at("pool_window").get<std::size_t>();
    cfg.pool.stride = j.at("pool_stride").get<std::size_t>();
    cfg.pool.ceil_mode = j.at("pool_ceil").get<bool>();
  } catch (const json::exception& e) {
    throw LoadError("checkpoint: bad " + where + " architecture: " + e.what());
  }
  return cfg;
}

json tensor_json(const Tensor& t) {
  json shape = json::array();
  for (std::size_t e : t.shape()) shape.push_back(e);
  json data = json::array();
  for (std::size_t i = 0; i < t.numel(); ++i) data.push_back(t[i]);
  return json{{"shape", shape}, {"data", data}};
}

void load_parameter(const json& params, Parameter& p) {
  auto it = params.find(p.name);
  if (it == params.end()) {
    throw LoadError("checkpoint: missing parameter \"" + p.name + "\"");
  }
  std::vector<std::size_t> shape;
  std::vector<double> data;
  try {
    shape = it->at("shape").get<std::vector<std::size_t>>();
    data = it->at("data").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw LoadError("checkpoint: bad tensor for \"" + p.name + "\": " + e.what());
  }
  if (shape != p.value.shape()) {
    throw LoadError("checkpoint: parameter \"" + p.name + "\" has shape " + shape_str(shape) +
                    ", model expects " + shape_str(p.value.shape()));
  }
  Tensor loaded(shape, std::move(data));
  loaded.assert_finite("checkpoint parameter " + p.name);
  p.value = std::move(loaded);
}

}  // namespace

void save_checkpoint(const std::string& path, const LocationPredictorModel& model,
                     const CheckpointMeta& meta) {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["architecture"] = json{{"t_obs", model.cfg.t_obs},
                             {"leaky_slope", model.cfg.leaky_slope},
                             {"context", encoder_config_json(model.cfg.context)},
                             {"target", encoder_config_json(model.cfg.target)},
                             {"mlp_widths", model.cfg.mlp_widths}};
  json params = json::object();
  for (const Parameter* p : model.parameters()) {
    p->value.assert_finite("parameter " + p->name + " while saving");
    params[p->name] = tensor_json(p->value);
  }
  doc["parameters"] = std::move(params);
  doc["metadata"] = json{{"seed", meta.seed},
                         {"epochs", meta.epochs},
                         {"best_val_nll", meta.best_val_nll}};

  std::ofstream out(path);
  if (!out) {
    throw LoadError("checkpoint: cannot write " + path);
  }
  out << doc.dump(1) << '\n';
  if (!out) {
    throw LoadError("checkpoint: write to " + path + " failed");
  }
}

LocationPredictorModel load_checkpoint(const std::string& path, CheckpointMeta* meta) {
  std::ifstream in(path);
  if (!in) {
    throw LoadError("checkpoint: cannot open " + path);
  }
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw LoadError("checkpoint: parse error in " + path + ": " + e.what());
  }
  if (!doc.contains("format_version") || !doc["format_version"].is_number_integer()) {
    throw LoadError("checkpoint: missing format_version");
  }
  if (doc["format_version"].get<int>() != kFormatVersion) {
    throw LoadError("checkpoint: unsupported format_version " +
                    doc["format_version"].dump() + ", expected " +
                    std::to_string(kFormatVersion));
  }
  if (!doc.contains("architecture")) {
    throw LoadError("checkpoint: missing architecture");
  }
  const json& arch = doc["architecture"];
  ModelConfig cfg;
  try {
    cfg.t_obs = arch.at("t_obs").get<std::size_t>();
    cfg.leaky_slope = arch.at("leaky_slope").get<double>();
    cfg.mlp_widths = arch.at("mlp_widths").get<std::vector<std::size_t>>();
  } catch (const json::exception& e) {
    throw LoadError(std::string("checkpoint: bad architecture: ") + e.what());
  }
  cfg.context = encoder_config_from(arch.value("context", json::object()), "context");
  cfg.target = encoder_config_from(arch.value("target", json::object()), "target");
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw LoadError(std::string("checkpoint: invalid architecture: ") + e.what());
  }

  LocationPredictorModel model = LocationPredictorModel::init(cfg, 0);
  if (!doc.contains("parameters") || !doc["parameters"].is_object()) {
    throw LoadError("checkpoint: missing parameters object");
  }
  const json& params = doc["parameters"];
  for (Parameter* p : model.parameters()) {
    load_parameter(params, *p);
  }
  if (meta != nullptr && doc.contains("metadata")) {
    const json& md = doc["metadata"];
    meta->seed = md.value("seed", std::uint64_t{0});
    meta->epochs = md.value("epochs", std::size_t{0});
    meta->best_val_nll = md.value("best_val_nll", 0.0);
  }
  return model;
}

LocationPredictorModel load_checkpoint_expect(const std::string& path,
                                              const ModelConfig& expected,
                                              CheckpointMeta* meta) {
  LocationPredictorModel model = load_checkpoint(path, meta);
  if (!(model.cfg == expected)) {
    if (model.cfg.context.num_patterns != expected.context.num_patterns ||
        model.cfg.target.num_patterns != expected.target.num_patterns) {
      throw LoadError("checkpoint: architecture mismatch: num_patterns (context " +
                      std::to_string(model.cfg.context.num_patterns) + "/target " +
                      std::to_string(model.cfg.target.num_patterns) + ") vs expected (" +
                      std::to_string(expected.context.num_patterns) + "/" +
                      std::to_string(expected.target.num_patterns) + ")");
    }
    throw LoadError("checkpoint: architecture does not match the run configuration");
  }
  return model;
}

}  // namespace socialpec
