#include "socialpec/config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace socialpec {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::string resolve_against(const std::string& base_file, const std::string& path) {
  if (path.empty()) return path;
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(base_file).parent_path() / p).string();
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::istream& in, const std::string& origin) {
  KeyValueConfig cfg;
  cfg.origin_ = origin;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ParseError(origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw ParseError(origin + ":" + std::to_string(line_no) + ": empty key");
    }
    if (cfg.entries_.count(key) != 0) {
      throw ParseError(origin + ":" + std::to_string(line_no) + ": duplicate key \"" + key +
                       "\"");
    }
    cfg.entries_[key] = value;
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  return parse(in, path);
}

bool KeyValueConfig::has(const std::string& key) const { return entries_.count(key) != 0; }

std::string KeyValueConfig::get_string(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    throw ConfigError(origin_ + ": missing required key \"" + key + "\"");
  }
  return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key,
                                       const std::string& fallback) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  try {
    std::size_t used = 0;
    double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(origin_ + ": key \"" + key + "\" is not a number: " + it->second);
  }
}

std::int64_t KeyValueConfig::get_int(const std::string& key, std::int64_t fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  try {
    std::size_t used = 0;
    long long v = std::stoll(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(origin_ + ": key \"" + key + "\" is not an integer: " + it->second);
  }
}

std::uint64_t KeyValueConfig::get_uint(const std::string& key, std::uint64_t fallback) const {
  std::int64_t v = get_int(key, static_cast<std::int64_t>(fallback));
  if (v < 0) {
    throw ConfigError(origin_ + ": key \"" + key + "\" must be non-negative");
  }
  return static_cast<std::uint64_t>(v);
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  std::string v = it->second;
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(origin_ + ": key \"" + key + "\" is not a boolean: " + it->second);
}

void KeyValueConfig::restrict_keys(const std::vector<std::string>& allowed) const {
  for (const auto& [key, value] : entries_) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(origin_ + ": unknown key \"" + key + "\"");
    }
  }
}

RolloutMode parse_mode(const std::string& text) {
  if (text == "sample") return RolloutMode::sample;
  if (text == "mean") return RolloutMode::mean;
  throw ConfigError("mode must be 'sample' or 'mean', got \"" + text + "\"");
}

RunConfig RunConfig::from_file(const std::string& path) {
  const KeyValueConfig kv = KeyValueConfig::parse_file(path);
  kv.restrict_keys({"manifest", "test_set", "t_obs", "t_pred", "stride", "k", "seed",
                    "eval_seed", "val_fraction", "lr", "batch_size", "epochs", "val_every",
                    "mode", "independent_fde", "allow_frame_gaps", "checkpoint_out",
                    "metrics_log", "report_out"});
  RunConfig cfg;
  cfg.manifest_path = resolve_against(path, kv.get_string("manifest", ""));
  cfg.test_set = kv.get_string("test_set", "");
  cfg.t_obs = static_cast<std::size_t>(kv.get_uint("t_obs", 8));
  cfg.t_pred = static_cast<std::size_t>(kv.get_uint("t_pred", 12));
  cfg.stride = static_cast<std::size_t>(kv.get_uint("stride", 1));
  cfg.k = static_cast<std::size_t>(kv.get_uint("k", 20));
  cfg.seed = kv.get_uint("seed", 1);
  cfg.eval_seed = kv.get_uint("eval_seed", cfg.seed);
  cfg.val_fraction = kv.get_double("val_fraction", 0.2);
  cfg.lr = kv.get_double("lr", 0.001);
  cfg.batch_size = static_cast<std::size_t>(kv.get_uint("batch_size", 64));
  cfg.epochs = static_cast<std::size_t>(kv.get_uint("epochs", 150));
  cfg.val_every = static_cast<std::size_t>(kv.get_uint("val_every", 1));
  cfg.mode = parse_mode(kv.get_string("mode", "sample"));
  cfg.independent_fde = kv.get_bool("independent_fde", false);
  cfg.allow_frame_gaps = kv.get_bool("allow_frame_gaps", false);
  cfg.checkpoint_out = resolve_against(path, kv.get_string("checkpoint_out", ""));
  cfg.metrics_log = resolve_against(path, kv.get_string("metrics_log", ""));
  cfg.report_out = resolve_against(path, kv.get_string("report_out", ""));
  return cfg;
}

std::vector<std::pair<std::string, std::string>> load_manifest(const std::string& path) {
  const KeyValueConfig kv = KeyValueConfig::parse_file(path);
  if (kv.entries().empty()) {
    throw ConfigError("manifest " + path + " lists no datasets");
  }
  std::vector<std::pair<std::string, std::string>> sets;
  for (const auto& [name, rel] : kv.entries()) {
    sets.emplace_back(name, resolve_against(path, rel));
  }
  return sets;
}

}  // namespace socialpec
