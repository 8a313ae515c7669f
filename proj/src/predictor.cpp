#include "socialpec/predictor.hpp"

namespace socialpec {

State sample_location(const GaussianParams& g, RngStream& rng) {
  const double z0 = rng.normal();
  const double z1 = rng.normal();
  return sample_gaussian(g, z0, z1);
}

Tensor rollout(const LocPredictor& predictor, const SceneWindow& obs, const RolloutConfig& cfg) {
  const std::size_t t_obs = obs.t_obs;
  const std::size_t num_peds = obs.num_peds();
  if (obs.t_total() < t_obs) {
    throw InvalidInputError("rollout: observation has " + std::to_string(obs.t_total()) +
                            " steps, need " + std::to_string(t_obs));
  }
  if (cfg.num_rollouts < 1) {
    throw ConfigError("rollout: K must be >= 1");
  }
  Tensor out({cfg.num_rollouts, num_peds, cfg.t_pred, 2});
  if (cfg.t_pred == 0 || num_peds == 0) return out;

  // Trailing t_obs observed steps seed the rolling buffer.
  const SceneWindow seed_window = obs.slice_time(obs.t_total() - t_obs, obs.t_total());

  for (std::size_t k = 0; k < cfg.num_rollouts; ++k) {
    // positions over t_obs + t_pred steps, extended step by step
    SceneWindow buffer(num_peds, t_obs + cfg.t_pred, t_obs);
    buffer.ped_ids = obs.ped_ids;
    buffer.start_frame = obs.start_frame;
    for (std::size_t m = 0; m < num_peds; ++m) {
      for (std::size_t t = 0; t < t_obs; ++t) buffer.set(m, t, seed_window.at(m, t));
    }
    for (std::size_t t = t_obs; t < t_obs + cfg.t_pred; ++t) {
      // the window excludes step t, so per-step predictions are independent
      const SceneWindow window = buffer.slice_time(t - t_obs, t);
      for (std::size_t m = 0; m < num_peds; ++m) {
        auto [ego, frame] = convert(window, m);
        const GaussianParams g = predictor.predict(ego, m);
        State local;
        if (cfg.mode == RolloutMode::mean) {
          local = g.mu;
        } else {
          RngStream rng = RngStream::keyed(
              {cfg.seed, k, static_cast<std::uint64_t>(buffer.ped_ids[m]), t});
          local = sample_location(g, rng);
        }
        const State world = convert_back(local, frame);
        buffer.set(m, t, world);
        out[((k * num_peds + m) * cfg.t_pred + (t - t_obs)) * 2] = world.x;
        out[((k * num_peds + m) * cfg.t_pred + (t - t_obs)) * 2 + 1] = world.y;
      }
    }
  }
  return out;
}

}  // namespace socialpec
