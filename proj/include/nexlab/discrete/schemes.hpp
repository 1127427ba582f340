#pragma once

#include <optional>
#include <span>
#include <vector>

#include "nexlab/core/operator.hpp"
#include "nexlab/discrete/steps.hpp"

namespace nexlab {

enum class Scheme { value_iteration, euler, phi_recursion, proximal };

/// points[0] is the origin; points[n] the n-th iterate.
struct DiscreteOrbit {
  Scheme scheme = Scheme::value_iteration;
  std::vector<double> lambdas;  // empty for value iteration
  std::vector<Vec> points;

  const Vec& origin() const { return points.front(); }
  int length() const { return static_cast<int>(points.size()) - 1; }
};

struct ValueIteration {
  DiscreteOrbit V;       // V_n = J^n(0)
  std::vector<Vec> v;    // v_n = V_n / n, v_0 = 0
  // max_n ||V_n/n - w_n|| with w_n = Phi(1/n, w_{n-1}), w_0 = 0.
  double recursion_gap = 0.0;
};

ValueIteration iterate_Vn(const OperatorInstance& op, int N);

struct DiscountedValue {
  double lambda = 1.0;
  Vec v;                        // v_lambda
  double certified_error = 0.0; // a-posteriori bound on ||v - v_lambda||
  long iterations = 0;

  Vec V() const { return v / lambda; }
};

inline constexpr long kVlambdaIterationCap = 10'000'000;

/// Iterates w <- Phi(lambda, w) from 0 until (1-lambda)/lambda ||w_k - w_{k-1}|| <= tol.
/// Throws DiagnosticsError past kVlambdaIterationCap iterations.
DiscountedValue solve_vlambda(const OperatorInstance& op, double lambda, double tol);

/// x_n = (1 - lambda_n) x_{n-1} + lambda_n J(x_{n-1}).
DiscreteOrbit euler_scheme(const OperatorInstance& op, const Vec& x0, const StepSequence& steps);

/// w_n = Phi(lambda_n, w_{n-1}).
DiscreteOrbit phi_recursion(const OperatorInstance& op, std::span<const double> lambdas, const Vec& w0);

/// Solves x + lambda A(x) = y by the lambda/(1+lambda)-contraction
/// x <- (y + lambda J(x)) / (1 + lambda); ||x - x*|| <= tol on return.
Vec resolvent(const OperatorInstance& op, double lambda, const Vec& y, double tol);

/// x_n = (I + lambda_n A)^{-1} x_{n-1}, each step solved to `tol`.
DiscreteOrbit proximal_scheme(const OperatorInstance& op, const Vec& x0, const StepSequence& steps, double tol);

/// ||x0 - z|| + ||xhat0 - z|| + ||A z|| sqrt((sigma_k - sigmahat_l)^2 + tau_k + tauhat_l);
/// z defaults to x0.
double kobayashi_rhs(const OperatorInstance& op, const StepSequence& steps1, const StepSequence& steps2, int k,
                     int l, const Vec& x0, const Vec& xhat0, const std::optional<Vec>& z = std::nullopt);

}  // namespace nexlab
