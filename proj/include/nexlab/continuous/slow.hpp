#pragma once

#include "nexlab/continuous/parametrization.hpp"
#include "nexlab/core/operator.hpp"

namespace nexlab {

/// Integral of lambda over [a, b].
double lambda_integral(const Parametrization& param, double a, double b, double quad_tol);

/// L(t) = exp int_0^t (|lambda'| / lambda - lambda). Table parametrizations are
/// refused with InputError.
double L_factor(const Parametrization& param, double t, double quad_tol);

struct SlowParamTerms {
  double value = 0.0;     // the bound
  double lambda_t = 0.0;
  double L_t = 0.0;
  double u_prime0 = 0.0;  // ||Phi(lambda(0), u0) - u0||
  double C = 0.0;
  double C_prime = 0.0;   // ||J(0)||
  double integral = 0.0;  // int_0^t |lambda'(s)| L(t) / L(s) ds
  double quad_error = 0.0;  // additive allowance for the quadratures
};

/// L(t)/lambda(t) [||u'(0)|| + (C + C') int_0^t |lambda'(s)| / L(s) ds].
SlowParamTerms slow_param_terms(const OperatorInstance& op, const Parametrization& param, const Vec& u0, double t,
                                double quad_tol);

inline double slow_param_bound(const OperatorInstance& op, const Parametrization& param, const Vec& u0, double t,
                               double quad_tol) {
  return slow_param_terms(op, param, u0, t, quad_tol).value;
}

}  // namespace nexlab
