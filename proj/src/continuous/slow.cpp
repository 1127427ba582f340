#include "nexlab/continuous/slow.hpp"

#include <cmath>

#include "nexlab/continuous/quadrature.hpp"
#include "nexlab/core/error.hpp"

namespace nexlab {

namespace {

void require_c1(const Parametrization& param, const char* who) {
  if (!param.is_c1()) throw InputError(std::string(who) + ": parametrization must be continuously differentiable");
}

double log_L_integrand(const Parametrization& param, double s) {
  const ParamValue pv = param_eval(param, s);
  return std::abs(pv.derivative) / pv.lambda - pv.lambda;
}

}  // namespace

double lambda_integral(const Parametrization& param, double a, double b, double quad_tol) {
  if (a == b) return 0.0;
  return adaptive_simpson([&](double s) { return param_lambda(param, s); }, a, b, quad_tol).value;
}

double L_factor(const Parametrization& param, double t, double quad_tol) {
  require_c1(param, "L_factor");
  if (t < 0.0) throw InputError("L_factor: t must be >= 0");
  if (t == 0.0) return 1.0;
  const auto q = adaptive_simpson([&](double s) { return log_L_integrand(param, s); }, 0.0, t, quad_tol);
  return std::exp(q.value);
}

SlowParamTerms slow_param_terms(const OperatorInstance& op, const Parametrization& param, const Vec& u0, double t,
                                double quad_tol) {
  require_c1(param, "slow_param_bound");
  if (t < 0.0) throw InputError("slow_param_bound: t must be >= 0");
  if (u0.size() != op.dim()) throw InputError("slow_param_bound: u0 has the wrong dimension");

  SlowParamTerms r;
  r.lambda_t = param_lambda(param, t);
  r.L_t = L_factor(param, t, quad_tol);
  r.u_prime0 = op.norm(apply_Phi(op, param_lambda(param, 0.0), u0) - u0);
  r.C = hypothesis_H_constant(op);
  r.C_prime = op.norm(apply_J(op, Vec::Zero(op.dim())));

  // L(t) int |lambda'| / L computed as int |lambda'(s)| exp(l(t) - l(s)) so
  // that nothing overflows for long horizons.
  if (t > 0.0) {
    const auto h = [&](double s) {
      const double d = std::abs(param_eval(param, s).derivative);
      if (d == 0.0 || s == t) return d;
      const double tail = adaptive_simpson([&](double x) { return log_L_integrand(param, x); }, s, t, quad_tol).value;
      return d * std::exp(tail);
    };
    r.integral = adaptive_simpson(h, 0.0, t, quad_tol).value;
  }
  const double k = r.C + r.C_prime;
  r.value = (r.L_t * r.u_prime0 + k * r.integral) / r.lambda_t;
  // Each inner quadrature is off by at most quad_tol in the exponent, giving a
  // relative error of about quad_tol on every exponential term.
  const double rel = std::expm1(2.0 * quad_tol);
  r.quad_error = (rel * r.L_t * r.u_prime0 + k * (quad_tol + rel * r.integral)) / r.lambda_t;
  return r;
}

}  // namespace nexlab
