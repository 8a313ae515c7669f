#include "socialpec/geometry.hpp"

#include <cmath>

namespace socialpec {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

double heading_of(std::span<const State> traj) {
  if (traj.size() < 2) {
    throw InvalidInputError("heading_of: need at least 2 states, got " +
                            std::to_string(traj.size()));
  }
  for (std::size_t i = traj.size() - 1; i >= 1; --i) {
    double dx = traj[i].x - traj[i - 1].x;
    double dy = traj[i].y - traj[i - 1].y;
    if (dx != 0.0 || dy != 0.0) {
      double theta = std::atan2(dy, dx);
      if (theta <= -kPi) theta = kPi;  // keep theta in (-pi, pi]
      return theta;
    }
  }
  return 0.0;  // stationary: fall back to +x
}

std::pair<SceneWindow, Frame> convert(const SceneWindow& window, std::size_t m) {
  window.check_ped(m);
  std::vector<State> traj = window.trajectory(m);
  Frame frame;
  frame.origin = traj.back();
  frame.theta = heading_of(traj);

  SceneWindow local = window;
  for (std::size_t p = 0; p < window.num_peds(); ++p) {
    for (std::size_t t = 0; t < window.t_total(); ++t) {
      local.set(p, t, frame.to_local(window.at(p, t)));
    }
  }
  // The anchor's last state lands exactly on the origin.
  local.set(m, window.t_total() - 1, State{0.0, 0.0});
  return {std::move(local), frame};
}

State convert_back(State local, const Frame& frame) { return frame.to_world(local); }

std::vector<State> linear_extrapolate(std::span<const State> obs, std::size_t n) {
  if (obs.size() < 2) {
    throw InvalidInputError("linear_extrapolate: need at least 2 observations, got " +
                            std::to_string(obs.size()));
  }
  const double len = static_cast<double>(obs.size());
  const double t_mean = (len - 1.0) / 2.0;
  double sxx = 0.0, sxy_x = 0.0, sxy_y = 0.0;
  double x_mean = 0.0, y_mean = 0.0;
  for (const State& s : obs) {
    x_mean += s.x;
    y_mean += s.y;
  }
  x_mean /= len;
  y_mean /= len;
  for (std::size_t t = 0; t < obs.size(); ++t) {
    double dt = static_cast<double>(t) - t_mean;
    sxx += dt * dt;
    sxy_x += dt * (obs[t].x - x_mean);
    sxy_y += dt * (obs[t].y - y_mean);
  }
  const double vx = sxy_x / sxx;
  const double vy = sxy_y / sxx;

  std::vector<State> future(n);
  State last = obs.back();
  for (std::size_t k = 0; k < n; ++k) {
    double step = static_cast<double>(k + 1);
    future[k] = {last.x + step * vx, last.y + step * vy};
  }
  return future;
}

}  // namespace socialpec
