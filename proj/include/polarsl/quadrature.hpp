#pragma once

#include <functional>

namespace polarsl {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  int evaluations = 0;
};

// Adaptive Gauss-Kronrod (7/15) with bisection until the summed error
// estimate is below `abs_tol`. Panels are split at their midpoint; a panel
// narrower than machine resolution or deeper than `max_depth`, or more than
// 10000 live panels, raises NumericError.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double abs_tol,
                                    int max_depth = 100);

}  // namespace polarsl
