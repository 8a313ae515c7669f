#pragma once

#include "socialpec/scene.hpp"

namespace socialpec {

// The five unconstrained network outputs the location head is built from.
struct RawHeadOutput {
  double x = 0.0;
  double y = 0.0;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

// Bivariate Gaussian over the one-step location in the egocentric frame.
// Covariance entries are stored explicitly; symmetry is structural.
struct GaussianParams {
  State mu;
  double sxx = 1.0;
  double sxy = 0.0;
  double syy = 1.0;

  double det() const { return sxx * syy - sxy * sxy; }
};

// Link functions mapping raw outputs to a valid distribution: exp(a), exp(b)
// are read as standard deviations and tanh(c) as the correlation (clamped to
// |rho| <= 1 - 1e-6), so the covariance is positive definite for every finite
// input.
GaussianParams gaussian_head(const RawHeadOutput& raw);

// Negative log density of s under g. g must be positive definite, which
// gaussian_head guarantees.
double nll(const GaussianParams& g, const State& s);

// Draw via the 2x2 Cholesky factor applied to two standard normal variates.
State sample_gaussian(const GaussianParams& g, double z0, double z1);

}  // namespace socialpec
