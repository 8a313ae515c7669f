#pragma once

#include <cstdint>
#include <string>

#include "socialpec/model.hpp"

namespace socialpec {

struct CheckpointMeta {
  std::uint64_t seed = 0;
  std::size_t epochs = 0;
  double best_val_nll = 0.0;
};

// Human-readable JSON document: format version, architecture configuration,
// every named parameter tensor as decimal arrays (round-trip exact at 64-bit
// precision) and training metadata.
void save_checkpoint(const std::string& path, const LocationPredictorModel& model,
                     const CheckpointMeta& meta = {});

// Rebuilds the model with the architecture stored in the file. Any schema
// violation, shape mismatch or unknown version throws LoadError naming the
// offending field; nothing is partially loaded.
LocationPredictorModel load_checkpoint(const std::string& path, CheckpointMeta* meta = nullptr);

// Same, but additionally requires the stored architecture to equal
// `expected`.
LocationPredictorModel load_checkpoint_expect(const std::string& path,
                                              const ModelConfig& expected,
                                              CheckpointMeta* meta = nullptr);

}  // namespace socialpec
