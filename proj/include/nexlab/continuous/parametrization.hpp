#pragma once

#include <string>
#include <variant>
#include <vector>

namespace nexlab {

struct ConstantParam {
  double lambda;
};
/// lambda(t) = 1 / (2 + zeta^{-1}(t)), zeta(t) = t + ln(1 + t).
struct InverseTimeZetaParam {};
/// lambda(t) = (1 + t)^{alpha - 1}, alpha in [0, 1).
struct PowerAlphaParam {
  double alpha;
};
/// Continuous piecewise-linear through (t_i, lambda_i); constant beyond the
/// last knot. Not C^1.
struct TableParam {
  std::vector<double> t;
  std::vector<double> lambda;
};

/// A path t -> lambda(t) in (0, 1].
class Parametrization {
 public:
  using Variant = std::variant<ConstantParam, InverseTimeZetaParam, PowerAlphaParam, TableParam>;

  static Parametrization constant(double lambda);
  static Parametrization inverse_time_zeta();
  static Parametrization power_alpha(double alpha);
  static Parametrization table(std::vector<double> t, std::vector<double> lambda);

  const Variant& variant() const { return v_; }
  bool is_c1() const { return !std::holds_alternative<TableParam>(v_); }
  std::string describe() const;

 private:
  explicit Parametrization(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

struct ParamValue {
  double lambda;
  double derivative;
};

/// Value and derivative at t >= 0. For tables the right slope is used at knots.
ParamValue param_eval(const Parametrization& p, double t);

inline double param_lambda(const Parametrization& p, double t) { return param_eval(p, t).lambda; }

double zeta(double t);
/// Newton's method from max(0, s - ln(1 + s)); stops at |zeta(t) - s| <= 1e-12 max(1, s).
double zeta_inverse(double s);

}  // namespace nexlab
