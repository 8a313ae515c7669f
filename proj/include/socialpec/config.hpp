#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "socialpec/predictor.hpp"

namespace socialpec {

// Flat "key = value" text with '#' comments.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::istream& in, const std::string& origin = "<stream>");
  static KeyValueConfig parse_file(const std::string& path);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }
  const std::string& origin() const { return origin_; }

  // Fails on keys outside the allowed set (typo protection).
  void restrict_keys(const std::vector<std::string>& allowed) const;

 private:
  std::map<std::string, std::string> entries_;
  std::string origin_;
};

// Everything a CLI run needs. Paths from the file are resolved against the
// config file's directory.
struct RunConfig {
  std::string manifest_path;
  std::string test_set;
  std::size_t t_obs = 8;
  std::size_t t_pred = 12;
  std::size_t stride = 1;
  std::size_t k = 20;
  std::uint64_t seed = 1;
  std::uint64_t eval_seed = 1;
  double val_fraction = 0.2;
  double lr = 0.001;
  std::size_t batch_size = 64;
  std::size_t epochs = 150;
  std::size_t val_every = 1;
  RolloutMode mode = RolloutMode::sample;
  bool independent_fde = false;
  bool allow_frame_gaps = false;
  std::string checkpoint_out;
  std::string metrics_log;
  std::string report_out;

  static RunConfig from_file(const std::string& path);
};

// Dataset manifest: "name = path" per line, paths relative to the manifest.
std::vector<std::pair<std::string, std::string>> load_manifest(const std::string& path);

RolloutMode parse_mode(const std::string& text);

}  // namespace socialpec
