#include "nexlab/continuous/parametrization.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nexlab/core/error.hpp"

namespace nexlab {

Parametrization Parametrization::constant(double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw InputError("constant parametrization: lambda outside (0, 1]");
  return Parametrization(ConstantParam{lambda});
}

Parametrization Parametrization::inverse_time_zeta() { return Parametrization(InverseTimeZetaParam{}); }

Parametrization Parametrization::power_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw InputError("power parametrization: alpha outside [0, 1)");
  return Parametrization(PowerAlphaParam{alpha});
}

Parametrization Parametrization::table(std::vector<double> t, std::vector<double> lambda) {
  if (t.empty() || t.size() != lambda.size()) throw InputError("table parametrization: knot arrays mismatch");
  if (t.front() != 0.0) throw InputError("table parametrization: first knot must be at t = 0");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i > 0 && !(t[i] > t[i - 1])) throw InputError("table parametrization: knots must strictly increase");
    if (!(lambda[i] > 0.0 && lambda[i] <= 1.0)) throw InputError("table parametrization: lambda outside (0, 1]");
  }
  return Parametrization(TableParam{std::move(t), std::move(lambda)});
}

std::string Parametrization::describe() const {
  std::ostringstream os;
  if (auto c = std::get_if<ConstantParam>(&v_)) {
    os << "constant(" << c->lambda << ")";
  } else if (std::holds_alternative<InverseTimeZetaParam>(v_)) {
    os << "inverse_time_zeta";
  } else if (auto p = std::get_if<PowerAlphaParam>(&v_)) {
    os << "power_alpha(" << p->alpha << ")";
  } else {
    os << "table(" << std::get<TableParam>(v_).t.size() << " knots)";
  }
  return os.str();
}

double zeta(double t) { return t + std::log1p(t); }

double zeta_inverse(double s) {
  if (!(s >= 0.0)) throw InputError("zeta_inverse: argument must be >= 0");
  if (s == 0.0) return 0.0;
  const double tol = 1e-12 * std::max(1.0, s);
  double t = std::max(0.0, s - std::log1p(s));
  for (int it = 0; it < 100; ++it) {
    const double r = zeta(t) - s;
    if (std::abs(r) <= tol) return t;
    // zeta' = 1 + 1/(1+t) lies in (1, 2], so Newton is globally convergent here.
    t = std::max(0.0, t - r / (1.0 + 1.0 / (1.0 + t)));
  }
  return t;
}

ParamValue param_eval(const Parametrization& p, double t) {
  if (!(t >= 0.0)) throw InputError("param_eval: t must be >= 0");
  const auto& v = p.variant();
  if (auto c = std::get_if<ConstantParam>(&v)) return {c->lambda, 0.0};
  if (std::holds_alternative<InverseTimeZetaParam>(v)) {
    const double r = zeta_inverse(t);
    const double denom = 2.0 + r;
    // d/dt zeta^{-1}(t) = 1 / zeta'(zeta^{-1}(t)).
    const double dr = 1.0 / (1.0 + 1.0 / (1.0 + r));
    return {1.0 / denom, -dr / (denom * denom)};
  }
  if (auto a = std::get_if<PowerAlphaParam>(&v)) {
    const double base = 1.0 + t;
    return {std::pow(base, a->alpha - 1.0), (a->alpha - 1.0) * std::pow(base, a->alpha - 2.0)};
  }
  const auto& tab = std::get<TableParam>(v);
  if (t >= tab.t.back()) return {tab.lambda.back(), 0.0};
  const auto it = std::upper_bound(tab.t.begin(), tab.t.end(), t);
  const auto i = static_cast<std::size_t>(it - tab.t.begin());  // t in [t_{i-1}, t_i)
  const double slope = (tab.lambda[i] - tab.lambda[i - 1]) / (tab.t[i] - tab.t[i - 1]);
  return {tab.lambda[i - 1] + slope * (t - tab.t[i - 1]), slope};
}

}  // namespace nexlab
