#pragma once

#include <functional>
#include <vector>

#include "socialpec/tape.hpp"

namespace socialpec {

// Central finite-difference verification. f() must deterministically evaluate
// the scalar objective at the current parameter values; the analytic
// gradients to compare against must already sit in each Parameter's grad.
// Returns max over all parameter entries of
//   |analytic - (f(x+h) - f(x-h)) / 2h| / (|analytic| + |numeric| + 1e-12).
double finite_diff_check(const std::function<double()>& f,
                         const std::vector<Parameter*>& params, double h);

}  // namespace socialpec
