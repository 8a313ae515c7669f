#pragma once

#include <cstdint>
#include <vector>

#include "socialpec/tape.hpp"

namespace socialpec {

struct AdamHyper {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Per-parameter Adam state: first/second moment estimates and step counter.
struct AdamState {
  Tensor m;
  Tensor v;
  std::uint64_t t = 0;
  AdamHyper hyper;

  static AdamState for_param(const Parameter& p, AdamHyper hyper = {}) {
    AdamState s;
    s.m = Tensor::zeros(p.value.shape());
    s.v = Tensor::zeros(p.value.shape());
    s.hyper = hyper;
    return s;
  }
};

// One bias-corrected Adam update from p.grad; the gradient is zeroed
// afterwards so accumulation starts fresh for the next batch.
void adam_step(Parameter& p, AdamState& state);

// Convenience wrapper stepping a whole parameter set in a fixed order.
class Adam {
 public:
  Adam(std::vector<Parameter*> params, AdamHyper hyper = {});
  void step();
  const std::vector<Parameter*>& params() const { return params_; }

 private:
  std::vector<Parameter*> params_;
  std::vector<AdamState> states_;
};

}  // namespace socialpec
