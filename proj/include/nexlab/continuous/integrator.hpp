#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "nexlab/continuous/parametrization.hpp"
#include "nexlab/core/operator.hpp"

namespace nexlab {

/// Samples of an integrated solution. err_bound[i] is the norm of the
/// difference between the last two refinement levels at times[i].
struct Trajectory {
  struct ExpoCrossCheck {
    long m = 0;
    double gap = 0.0;    // ||U_T^m(U0) - U(T)||
    double bound = 0.0;  // ||A(U0)|| T / sqrt(m)
  };

  std::vector<double> times;
  std::vector<Vec> points;
  std::vector<double> err_bound;
  std::vector<Vec> derivative;
  long steps = 0;
  int refinements = 0;
  std::optional<ExpoCrossCheck> expo;

  /// Index of a sample time; the time must be on the grid.
  std::size_t index_of(double t) const;
  const Vec& at(double t) const { return points[index_of(t)]; }
  double err_at(double t) const { return err_bound[index_of(t)]; }
  double max_err() const;
};

struct IntegratorOptions {
  /// Increasing, starting at 0 and ending at T. Empty means 101 uniform samples.
  std::vector<double> sample_times;
  double initial_step = 0.05;
  long max_steps = 1L << 24;
};

/// Sorted, de-duplicated grid: `uniform` evenly spaced points on [0, T] plus `extra`.
std::vector<double> make_sample_grid(double T, int uniform, const std::vector<double>& extra = {});

using Rhs = std::function<Vec(double, const Vec&)>;

/// Fixed-step RK4 on each sample interval, halving the step until the largest
/// change at the samples is <= tol/2. Throws ResourceError beyond max_steps.
Trajectory integrate(const Rhs& rhs, const Vec& x0, double T, double tol, NormKind norm,
                     const IntegratorOptions& options = {});

/// U' = J(U) - U, cross-checked at T against the Euler product (I - T/m A)^m U0.
Trajectory integrate_U(const OperatorInstance& op, const Vec& U0, double T, double tol,
                       const IntegratorOptions& options = {});

/// u' = Phi(lambda(t), u) - u.
Trajectory integrate_u(const OperatorInstance& op, const Parametrization& param, const Vec& u0, double T, double tol,
                       const IntegratorOptions& options = {});

/// (I - t/m A)^m x.
Vec euler_power(const OperatorInstance& op, const Vec& x, double t, long m);

}  // namespace nexlab
