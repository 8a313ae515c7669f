#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "socialpec/tensor.hpp"

namespace socialpec {

// 2-D world or egocentric location in meters.
struct State {
  double x = 0.0;
  double y = 0.0;
};

inline State operator+(State a, State b) { return {a.x + b.x, a.y + b.y}; }
inline State operator-(State a, State b) { return {a.x - b.x, a.y - b.y}; }

inline double distance(State a, State b) {
  double dx = a.x - b.x;
  double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

// M pedestrians over t_total consecutive frames, the first t_obs of which
// count as observed. positions is [M, t_total, 2]; every included pedestrian
// is present at all t_total frames.
struct SceneWindow {
  Tensor positions;
  std::vector<std::int64_t> ped_ids;
  std::int64_t start_frame = 0;
  std::size_t t_obs = 8;

  SceneWindow() = default;
  SceneWindow(std::size_t num_peds, std::size_t t_total, std::size_t t_obs_)
      : positions({num_peds, t_total, 2}), ped_ids(num_peds, 0), t_obs(t_obs_) {}

  std::size_t num_peds() const { return positions.rank() == 3 ? positions.extent(0) : 0; }
  std::size_t t_total() const { return positions.rank() == 3 ? positions.extent(1) : 0; }

  State at(std::size_t m, std::size_t t) const {
    return {positions.at(m, t, 0), positions.at(m, t, 1)};
  }

  void set(std::size_t m, std::size_t t, State s) {
    positions.at(m, t, 0) = s.x;
    positions.at(m, t, 1) = s.y;
  }

  std::vector<State> trajectory(std::size_t m) const {
    check_ped(m);
    std::vector<State> traj(t_total());
    for (std::size_t t = 0; t < traj.size(); ++t) traj[t] = at(m, t);
    return traj;
  }

  // Timesteps [t0, t1); t_obs is clamped to the new length.
  SceneWindow slice_time(std::size_t t0, std::size_t t1) const {
    if (t0 > t1 || t1 > t_total()) {
      throw InvalidInputError("slice_time: bad range [" + std::to_string(t0) + ", " +
                              std::to_string(t1) + ") for window of length " +
                              std::to_string(t_total()));
    }
    SceneWindow out(num_peds(), t1 - t0, std::min(t_obs, t1 - t0));
    out.ped_ids = ped_ids;
    out.start_frame = start_frame;
    for (std::size_t m = 0; m < num_peds(); ++m) {
      for (std::size_t t = t0; t < t1; ++t) out.set(m, t - t0, at(m, t));
    }
    return out;
  }

  void check_ped(std::size_t m) const {
    if (m >= num_peds()) {
      throw IndexError("pedestrian index " + std::to_string(m) + " out of range (M=" +
                       std::to_string(num_peds()) + ")");
    }
  }
};

}  // namespace socialpec
