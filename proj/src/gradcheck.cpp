#include "socialpec/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace socialpec {

double finite_diff_check(const std::function<double()>& f,
                         const std::vector<Parameter*>& params, double h) {
  double max_rel = 0.0;
  for (Parameter* p : params) {
    for (std::size_t i = 0; i < p->value.numel(); ++i) {
      const double saved = p->value[i];
      p->value[i] = saved + h;
      const double f_plus = f();
      p->value[i] = saved - h;
      const double f_minus = f();
      p->value[i] = saved;
      const double numeric = (f_plus - f_minus) / (2.0 * h);
      const double analytic = p->grad[i];
      const double rel = std::abs(analytic - numeric) /
                         (std::abs(analytic) + std::abs(numeric) + 1e-12);
      max_rel = std::max(max_rel, rel);
    }
  }
  return max_rel;
}

}  // namespace socialpec
