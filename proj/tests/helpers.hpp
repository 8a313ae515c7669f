#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "socialpec/gradcheck.hpp"
#include "socialpec/model.hpp"
#include "socialpec/rng.hpp"
#include "socialpec/scene.hpp"

namespace testutil {

using namespace socialpec;

inline Tensor random_tensor(std::vector<std::size_t> shape, RngStream& rng, double lo = -1.0,
                            double hi = 1.0) {
  Tensor t(std::move(shape));
  for (std::size_t i = 0; i < t.numel(); ++i) t[i] = rng.uniform(lo, hi);
  return t;
}

// Runs one forward/backward for a scalar-valued graph builder over the given
// parameters, then compares the analytic gradients against central finite
// differences. Returns the max relative error.
inline double gradient_check(const std::function<Var(Tape&)>& build,
                             const std::vector<Parameter*>& params, double h = 1e-6) {
  for (Parameter* p : params) p->zero_grad();
  {
    Tape tape;
    Var loss = build(tape);
    tape.backward(loss);
  }
  auto objective = [&]() {
    Tape tape;
    return tape.val(build(tape)).item();
  };
  return finite_diff_check(objective, params, h);
}

// A window where every pedestrian walks a straight line with a bit of noise;
// convenient gradient-check and rollout fodder.
inline SceneWindow random_walk_window(std::size_t num_peds, std::size_t t_total,
                                      std::size_t t_obs, RngStream& rng, double jitter = 0.05) {
  SceneWindow w(num_peds, t_total, t_obs);
  for (std::size_t m = 0; m < num_peds; ++m) {
    w.ped_ids[m] = static_cast<std::int64_t>(m + 1);
    State pos{rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)};
    const double angle = rng.uniform(-3.14159, 3.14159);
    const double speed = rng.uniform(0.2, 0.6);
    State vel{speed * std::cos(angle), speed * std::sin(angle)};
    for (std::size_t t = 0; t < t_total; ++t) {
      w.set(m, t, pos);
      pos.x += vel.x + jitter * rng.normal();
      pos.y += vel.y + jitter * rng.normal();
    }
  }
  return w;
}

// Tiny architecture exercising every code path at unit-test speed.
inline ModelConfig tiny_config() {
  ModelConfig cfg;
  cfg.context = EncoderConfig{4, 2, 6, 2, {}};
  cfg.target = EncoderConfig{3, 2, 5, 2, {}};
  cfg.mlp_widths = {12, 8, 5};
  cfg.t_obs = 8;
  return cfg;
}

}  // namespace testutil
