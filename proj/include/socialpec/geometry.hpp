#pragma once

#include <span>
#include <utility>
#include <vector>

#include "socialpec/scene.hpp"

namespace socialpec {

// Egocentric frame: origin in world coordinates, heading theta in (-pi, pi].
// Local coordinates put the anchor pedestrian at the origin facing +x.
struct Frame {
  State origin;
  double theta = 0.0;

  State to_local(State world) const {
    double c = std::cos(theta), s = std::sin(theta);
    double dx = world.x - origin.x, dy = world.y - origin.y;
    return {c * dx + s * dy, -s * dx + c * dy};
  }

  State to_world(State local) const {
    double c = std::cos(theta), s = std::sin(theta);
    return {c * local.x - s * local.y + origin.x, s * local.x + c * local.y + origin.y};
  }
};

// Angle of the latest nonzero displacement, scanning backwards through the
// trajectory; 0 for a pedestrian that never moved. Needs >= 2 states.
double heading_of(std::span<const State> traj);

// Rigid transform of the whole window into pedestrian m's egocentric frame:
// origin at m's last state, heading from m's trajectory. Returns the
// transformed window and the frame used.
std::pair<SceneWindow, Frame> convert(const SceneWindow& window, std::size_t m);

// Exact inverse of the frame mapping for a single point.
State convert_back(State local, const Frame& frame);

// Constant-velocity continuation. The velocity is the least-squares slope of
// x(t) and y(t) over the observations; prediction advances from the last
// observed state. Needs >= 2 observations.
std::vector<State> linear_extrapolate(std::span<const State> obs, std::size_t n);

}  // namespace socialpec
