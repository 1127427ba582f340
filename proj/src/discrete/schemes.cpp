#include "nexlab/discrete/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "nexlab/core/error.hpp"

namespace nexlab {

ValueIteration iterate_Vn(const OperatorInstance& op, int N) {
  if (N < 1) throw InputError("iterate_Vn: N must be >= 1");
  ValueIteration out;
  out.V.scheme = Scheme::value_iteration;
  out.V.points.reserve(static_cast<std::size_t>(N) + 1);
  out.v.reserve(static_cast<std::size_t>(N) + 1);
  out.V.points.push_back(Vec::Zero(op.dim()));
  out.v.push_back(Vec::Zero(op.dim()));
  Vec w = Vec::Zero(op.dim());
  for (int n = 1; n <= N; ++n) {
    out.V.points.push_back(apply_J(op, out.V.points.back()));
    out.v.push_back(out.V.points.back() / static_cast<double>(n));
    w = apply_Phi(op, 1.0 / n, w);
    out.recursion_gap = std::max(out.recursion_gap, op.norm(out.v.back() - w));
  }
  return out;
}

DiscountedValue solve_vlambda(const OperatorInstance& op, double lambda, double tol) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw InputError("solve_vlambda: lambda outside (0, 1]");
  if (!(tol > 0.0)) throw InputError("solve_vlambda: tol must be positive");
  DiscountedValue out;
  out.lambda = lambda;
  const double factor = (1.0 - lambda) / lambda;
  Vec w = Vec::Zero(op.dim());
  for (long k = 1;; ++k) {
    Vec next = apply_Phi(op, lambda, w);
    if (!next.allFinite()) throw InternalError("solve_vlambda: non-finite iterate");
    const double err = factor * op.norm(next - w);
    w = std::move(next);
    if (err <= tol) {
      out.v = std::move(w);
      // The a-posteriori bound holds in exact arithmetic; each evaluation of Phi
      // also rounds at the scale of ||w||, and that error accumulates as 1/lambda.
      const double rounding = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, op.norm(w)) / lambda;
      out.certified_error = err + rounding;
      out.iterations = k;
      return out;
    }
    if (k >= kVlambdaIterationCap) {
      std::ostringstream msg;
      msg << "solve_vlambda: no certificate after " << k << " iterations for lambda = " << lambda
          << " (last bound " << err << ")";
      throw DiagnosticsError(msg.str());
    }
  }
}

DiscreteOrbit euler_scheme(const OperatorInstance& op, const Vec& x0, const StepSequence& steps) {
  DiscreteOrbit orbit;
  orbit.scheme = Scheme::euler;
  orbit.lambdas.assign(steps.steps().begin(), steps.steps().end());
  orbit.points.reserve(orbit.lambdas.size() + 1);
  orbit.points.push_back(x0);
  for (double lambda : orbit.lambdas) {
    const Vec& prev = orbit.points.back();
    orbit.points.push_back((1.0 - lambda) * prev + lambda * apply_J(op, prev));
  }
  return orbit;
}

DiscreteOrbit phi_recursion(const OperatorInstance& op, std::span<const double> lambdas, const Vec& w0) {
  DiscreteOrbit orbit;
  orbit.scheme = Scheme::phi_recursion;
  orbit.lambdas.assign(lambdas.begin(), lambdas.end());
  orbit.points.reserve(lambdas.size() + 1);
  orbit.points.push_back(w0);
  for (double lambda : lambdas) orbit.points.push_back(apply_Phi(op, lambda, orbit.points.back()));
  return orbit;
}

Vec resolvent(const OperatorInstance& op, double lambda, const Vec& y, double tol) {
  if (!(lambda > 0.0)) throw InputError("resolvent: lambda must be positive");
  if (!(tol > 0.0)) throw InputError("resolvent: tol must be positive");
  // Certified error of the last iterate: q/(1-q) * step = lambda * step.
  Vec x = y;
  for (long k = 1;; ++k) {
    Vec next = (y + lambda * apply_J(op, x)) / (1.0 + lambda);
    const double err = lambda * op.norm(next - x);
    x = std::move(next);
    if (err <= tol) return x;
    if (k >= kVlambdaIterationCap) throw DiagnosticsError("resolvent: no certificate within iteration cap");
  }
}

DiscreteOrbit proximal_scheme(const OperatorInstance& op, const Vec& x0, const StepSequence& steps, double tol) {
  DiscreteOrbit orbit;
  orbit.scheme = Scheme::proximal;
  orbit.lambdas.assign(steps.steps().begin(), steps.steps().end());
  orbit.points.push_back(x0);
  for (double lambda : orbit.lambdas) orbit.points.push_back(resolvent(op, lambda, orbit.points.back(), tol));
  return orbit;
}

double kobayashi_rhs(const OperatorInstance& op, const StepSequence& steps1, const StepSequence& steps2, int k,
                     int l, const Vec& x0, const Vec& xhat0, const std::optional<Vec>& z) {
  if (k < 0 || k > steps1.size() || l < 0 || l > steps2.size()) {
    throw InputError("kobayashi_rhs: index outside the step sequences");
  }
  const Vec& anchor = z ? *z : x0;
  const double ds = steps1.sigma(k) - steps2.sigma(l);
  return op.norm(x0 - anchor) + op.norm(xhat0 - anchor) +
         op.norm(apply_A(op, anchor)) * std::sqrt(ds * ds + steps1.tau(k) + steps2.tau(l));
}

}  // namespace nexlab
