#include "socialpec/adam.hpp"

#include <cmath>

namespace socialpec {

void adam_step(Parameter& p, AdamState& state) {
  state.t += 1;
  const double b1 = state.hyper.beta1;
  const double b2 = state.hyper.beta2;
  const double corr1 = 1.0 - std::pow(b1, static_cast<double>(state.t));
  const double corr2 = 1.0 - std::pow(b2, static_cast<double>(state.t));
  for (std::size_t i = 0; i < p.value.numel(); ++i) {
    const double g = p.grad[i];
    state.m[i] = b1 * state.m[i] + (1.0 - b1) * g;
    state.v[i] = b2 * state.v[i] + (1.0 - b2) * g * g;
    const double m_hat = state.m[i] / corr1;
    const double v_hat = state.v[i] / corr2;
    p.value[i] -= state.hyper.lr * m_hat / (std::sqrt(v_hat) + state.hyper.eps);
  }
  p.zero_grad();
}

Adam::Adam(std::vector<Parameter*> params, AdamHyper hyper) : params_(std::move(params)) {
  states_.reserve(params_.size());
  for (Parameter* p : params_) states_.push_back(AdamState::for_param(*p, hyper));
}

void Adam::step() {
  for (std::size_t i = 0; i < params_.size(); ++i) adam_step(*params_[i], states_[i]);
}

}  // namespace socialpec
