#pragma once

#include <stdexcept>
#include <string>

namespace socialpec {

// Error taxonomy shared across the library. The CLI maps any of these to a
// nonzero exit code with a one-line diagnostic.

// Tensor/layer shape mismatch.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Input sequence too short, bad argument ranges.
struct InvalidInputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Pedestrian or element index out of range.
struct IndexError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// Malformed text input (annotation files, configs).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Structurally valid input that violates a data contract (duplicates,
// inconsistent frame spacing).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad or inconsistent run configuration.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Checkpoint cannot be read back into a model.
struct LoadError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// API misuse (non-scalar loss, gradients requested before backward).
struct ContractError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace socialpec
