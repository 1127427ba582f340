#include "nexlab/continuous/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "nexlab/core/error.hpp"

namespace nexlab {

std::size_t Trajectory::index_of(double t) const {
  const auto it = std::lower_bound(times.begin(), times.end(), t);
  if (it == times.end() || *it != t) {
    std::ostringstream msg;
    msg << "trajectory: t = " << t << " is not a sample time";
    throw InputError(msg.str());
  }
  return static_cast<std::size_t>(it - times.begin());
}

double Trajectory::max_err() const {
  return err_bound.empty() ? 0.0 : *std::max_element(err_bound.begin(), err_bound.end());
}

std::vector<double> make_sample_grid(double T, int uniform, const std::vector<double>& extra) {
  std::vector<double> g;
  g.push_back(0.0);
  for (int i = 1; i < uniform; ++i) g.push_back(T * i / (uniform - 1));
  g.push_back(T);
  for (double e : extra)
    if (e >= 0.0 && e <= T) g.push_back(e);
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

namespace {

std::vector<Vec> rk4_level(const Rhs& rhs, const Vec& x0, const std::vector<double>& times,
                           const std::vector<long>& substeps) {
  std::vector<Vec> out;
  out.reserve(times.size());
  out.push_back(x0);
  Vec x = x0;
  for (std::size_t s = 0; s + 1 < times.size(); ++s) {
    const double a = times[s];
    const long n = substeps[s];
    const double h = (times[s + 1] - a) / static_cast<double>(n);
    for (long k = 0; k < n; ++k) {
      const double t = a + static_cast<double>(k) * h;
      const Vec k1 = rhs(t, x);
      const Vec k2 = rhs(t + 0.5 * h, x + (0.5 * h) * k1);
      const Vec k3 = rhs(t + 0.5 * h, x + (0.5 * h) * k2);
      const Vec k4 = rhs(t + h, x + h * k3);
      x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    if (!x.allFinite()) throw InternalError("integrator: non-finite state");
    out.push_back(x);
  }
  return out;
}

}  // namespace

Trajectory integrate(const Rhs& rhs, const Vec& x0, double T, double tol, NormKind norm,
                     const IntegratorOptions& options) {
  if (!(T > 0.0)) throw InputError("integrate: horizon T must be positive");
  if (!(tol > 0.0)) throw InputError("integrate: tol must be positive");
  if (!x0.allFinite()) throw InputError("integrate: non-finite initial state");
  std::vector<double> times = options.sample_times.empty() ? make_sample_grid(T, 101) : options.sample_times;
  if (times.front() != 0.0 || times.back() != T) {
    throw InputError("integrate: sample grid must start at 0 and end at T");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw InputError("integrate: sample grid must be strictly increasing");
  }

  std::vector<long> substeps(times.size() - 1);
  long total = 0;
  for (std::size_t s = 0; s + 1 < times.size(); ++s) {
    substeps[s] = std::max(1L, static_cast<long>(std::ceil((times[s + 1] - times[s]) / options.initial_step)));
    total += substeps[s];
  }

  std::vector<Vec> coarse = rk4_level(rhs, x0, times, substeps);
  for (int level = 1;; ++level) {
    total *= 2;
    if (total > options.max_steps) {
      std::ostringstream msg;
      msg << "integrate: tolerance " << tol << " not reached within " << options.max_steps << " steps";
      throw ResourceError(msg.str());
    }
    for (long& n : substeps) n *= 2;
    std::vector<Vec> fine = rk4_level(rhs, x0, times, substeps);
    std::vector<double> diff(times.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      diff[i] = nexlab::norm(fine[i] - coarse[i], norm);
      worst = std::max(worst, diff[i]);
    }
    if (worst <= 0.5 * tol) {
      Trajectory tr;
      tr.times = std::move(times);
      tr.points = std::move(fine);
      tr.err_bound = std::move(diff);
      tr.steps = total;
      tr.refinements = level;
      tr.derivative.reserve(tr.points.size());
      for (std::size_t i = 0; i < tr.points.size(); ++i) tr.derivative.push_back(rhs(tr.times[i], tr.points[i]));
      return tr;
    }
    coarse = std::move(fine);
  }
}

Vec euler_power(const OperatorInstance& op, const Vec& x, double t, long m) {
  if (m < 1) throw InputError("euler_power: m must be >= 1");
  const double lambda = t / static_cast<double>(m);
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InputError("euler_power: requires m >= t");
  Vec y = x;
  for (long k = 0; k < m; ++k) y = (1.0 - lambda) * y + lambda * apply_J(op, y);
  return y;
}

Trajectory integrate_U(const OperatorInstance& op, const Vec& U0, double T, double tol,
                       const IntegratorOptions& options) {
  if (U0.size() != op.dim()) throw InputError("integrate_U: initial state has the wrong dimension");
  const Rhs rhs = [&op](double, const Vec& x) -> Vec { return apply_J(op, x) - x; };
  Trajectory tr = integrate(rhs, U0, T, tol, op.norm_kind(), options);

  Trajectory::ExpoCrossCheck expo;
  expo.m = std::max(64L, static_cast<long>(std::ceil(4.0 * T)));
  expo.gap = op.norm(euler_power(op, U0, T, expo.m) - tr.points.back());
  expo.bound = op.norm(apply_A(op, U0)) * T / std::sqrt(static_cast<double>(expo.m));
  if (expo.gap > expo.bound + tr.err_bound.back() + 1e-9) {
    std::ostringstream msg;
    msg << "integrate_U: exponential-formula cross-check failed at T (gap " << expo.gap << ", bound " << expo.bound
        << ")";
    throw InternalError(msg.str());
  }
  tr.expo = expo;
  return tr;
}

Trajectory integrate_u(const OperatorInstance& op, const Parametrization& param, const Vec& u0, double T, double tol,
                       const IntegratorOptions& options) {
  if (u0.size() != op.dim()) throw InputError("integrate_u: initial state has the wrong dimension");
  const Rhs rhs = [&op, &param](double t, const Vec& x) -> Vec {
    return apply_Phi(op, param_lambda(param, t), x) - x;
  };
  return integrate(rhs, u0, T, tol, op.norm_kind(), options);
}

}  // namespace nexlab
