#pragma once

#include <functional>

namespace nexlab {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// Adaptive Simpson on [a, b] to absolute tolerance `tol`. Throws InputError if
/// the integrand returns a non-finite value.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                                  int max_depth = 48);

}  // namespace nexlab
