#include "socialpec/gaussian.hpp"

#include <cmath>

#include "socialpec/errors.hpp"

namespace socialpec {

namespace {
constexpr double kRhoLimit = 1.0 - 1e-6;
constexpr double kLog2Pi = 1.8378770664093454835606594728112;
}  // namespace

GaussianParams gaussian_head(const RawHeadOutput& raw) {
  double sx = std::exp(raw.a);
  double sy = std::exp(raw.b);
  double rho = std::tanh(raw.c);
  if (rho > kRhoLimit) rho = kRhoLimit;
  if (rho < -kRhoLimit) rho = -kRhoLimit;
  GaussianParams g;
  g.mu = {raw.x, raw.y};
  g.sxx = sx * sx;
  g.syy = sy * sy;
  g.sxy = rho * sx * sy;
  return g;
}

double nll(const GaussianParams& g, const State& s) {
  const double det = g.det();
  if (!(det > 0.0) || !(g.sxx > 0.0)) {
    throw ContractError("nll: covariance is not positive definite");
  }
  const double dx = s.x - g.mu.x;
  const double dy = s.y - g.mu.y;
  // Quadratic form via the explicit 2x2 inverse.
  const double quad = (g.syy * dx * dx - 2.0 * g.sxy * dx * dy + g.sxx * dy * dy) / det;
  return kLog2Pi + 0.5 * std::log(det) + 0.5 * quad;
}

State sample_gaussian(const GaussianParams& g, double z0, double z1) {
  const double det = g.det();
  if (!(det > 0.0) || !(g.sxx > 0.0)) {
    throw ContractError("sample_gaussian: covariance is not positive definite");
  }
  const double l11 = std::sqrt(g.sxx);
  const double l21 = g.sxy / l11;
  const double l22 = std::sqrt(det / g.sxx);  // = sqrt(syy - sxy^2/sxx)
  return {g.mu.x + l11 * z0, g.mu.y + l21 * z0 + l22 * z1};
}

}  // namespace socialpec
