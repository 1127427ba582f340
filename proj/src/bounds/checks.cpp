#include "nexlab/bounds/checks.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "nexlab/continuous/integrator.hpp"
#include "nexlab/continuous/quadrature.hpp"
#include "nexlab/continuous/slow.hpp"
#include "nexlab/core/error.hpp"
#include "nexlab/discrete/schemes.hpp"

namespace nexlab {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<CheckId, const char*>, 23> kNames{{
    {CheckId::norm_bounds, "norm_bounds"},
    {CheckId::accretivity, "accretivity"},
    {CheckId::solution_contraction, "solution_contraction"},
    {CheckId::derivative_decay, "derivative_decay"},
    {CheckId::chernoff, "chernoff"},
    {CheckId::convvn, "convvn"},
    {CheckId::expo, "expo"},
    {CheckId::kobayashi, "kobayashi"},
    {CheckId::euler_vs_ode, "euler_vs_ode"},
    {CheckId::normalized_euler, "normalized_euler"},
    {CheckId::interpolation, "interpolation"},
    {CheckId::stationarity_gap, "stationarity_gap"},
    {CheckId::constant_decay, "constant_decay"},
    {CheckId::initial_independence, "initial_independence"},
    {CheckId::wn_tracks_vn, "wn_tracks_vn"},
    {CheckId::convboth, "convboth"},
    {CheckId::hypothesis_H, "hypothesis_H"},
    {CheckId::slow_param, "slow_param"},
    {CheckId::convder_decay, "convder_decay"},
    {CheckId::two_param, "two_param"},
    {CheckId::vlambda_lipschitz, "vlambda_lipschitz"},
    {CheckId::discrete_slow, "discrete_slow"},
    {CheckId::alpha_family, "alpha_family"},
}};

constexpr std::array<CheckId, 23> kAll = [] {
  std::array<CheckId, 23> a{};
  for (std::size_t i = 0; i < kNames.size(); ++i) a[i] = kNames[i].first;
  return a;
}();

}  // namespace

const char* to_string(CheckId id) {
  for (const auto& [k, name] : kNames)
    if (k == id) return name;
  return "unknown";
}

CheckId parse_check_id(std::string_view name) {
  for (const auto& [k, n] : kNames)
    if (name == n) return k;
  throw InputError("unknown check id '" + std::string(name) + "'");
}

std::span<const CheckId> all_checks() { return kAll; }

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::skipped: return "skipped";
  }
  return "unknown";
}

BoundReport make_report(CheckId check, double lhs, double rhs, double tol_budget, json context) {
  if (!std::isfinite(lhs) || !std::isfinite(rhs) || !std::isfinite(tol_budget)) {
    throw InternalError(std::string("check ") + to_string(check) + " produced a non-finite quantity");
  }
  BoundReport r;
  r.check = check;
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  r.tol_budget = tol_budget;
  r.verdict = lhs <= rhs + tol_budget ? Verdict::pass : Verdict::fail;
  r.context = std::move(context);
  return r;
}

BoundReport skipped_report(CheckId check, json context, const std::string& reason) {
  BoundReport r;
  r.check = check;
  r.verdict = Verdict::skipped;
  r.context = std::move(context);
  r.context["skip_reason"] = reason;
  return r;
}

bool all_passed(std::span<const BoundReport> reports) {
  return std::none_of(reports.begin(), reports.end(), [](const BoundReport& r) { return r.verdict == Verdict::fail; });
}

Vec scenario_start(const Scenario& s, std::size_t i) {
  if (i < s.starts.size()) {
    if (s.starts[i].size() != s.op.dim()) throw InputError("scenario start has the wrong dimension");
    return s.starts[i];
  }
  SplitMix64 rng(s.seed * 0x2545f4914f6cdd1dULL + i + 1);
  return sample_ball(rng, s.op.dim(), 1.0, s.op.norm_kind());
}

namespace {

struct Run {
  CheckId id;
  const Scenario& s;
  const VerifySettings& cfg;

  const OperatorInstance& op() const { return s.op; }
  double nrm(const Vec& x) const { return s.op.norm(x); }
  Vec zero() const { return Vec::Zero(s.op.dim()); }
  double j0() const { return nrm(apply_J(s.op, zero())); }

  json ctx() const {
    return json{{"scenario", s.name}, {"operator", s.op.describe()}, {"seed", s.seed}};
  }
  BoundReport report(double lhs, double rhs, double budget, json extra) const {
    json c = ctx();
    c.update(extra);
    return make_report(id, lhs, rhs, budget, std::move(c));
  }
};

/// Keeps the candidate with the smallest margin rhs + budget - lhs.
struct Worst {
  double lhs = 0.0, rhs = 0.0, budget = 0.0;
  json where;
  int evaluated = 0;
  int failures = 0;
  bool any = false;

  void offer(double l, double r, double b, json w) {
    ++evaluated;
    if (l > r + b) ++failures;
    if (!any || r + b - l < rhs + budget - lhs) {
      lhs = l;
      rhs = r;
      budget = b;
      where = std::move(w);
      any = true;
    }
  }
  BoundReport emit(const Run& run, json extra = json::object()) const {
    extra["worst_case"] = where;
    extra["evaluated"] = evaluated;
    extra["failures"] = failures;
    return run.report(lhs, rhs, budget, std::move(extra));
  }
};

/// count points geometrically spaced from lo to hi inclusive.
std::vector<double> log_points(double lo, double hi, int count) {
  std::vector<double> p;
  for (int k = 0; k < count; ++k) p.push_back(lo * std::pow(hi / lo, static_cast<double>(k) / (count - 1)));
  p.front() = lo;
  p.back() = hi;
  return p;
}

std::vector<int> log_integers(int lo, int hi, int count) {
  std::vector<int> out;
  for (double x : log_points(lo, hi, count)) out.push_back(static_cast<int>(std::lround(x)));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

IntegratorOptions grid_options(double T, int uniform, const std::vector<double>& extra) {
  IntegratorOptions o;
  o.sample_times = make_sample_grid(T, uniform, extra);
  return o;
}

/// Decay report: final gap against decay_factor times the first gap.
BoundReport decay_report(const Run& run, const std::vector<double>& at, const std::vector<double>& gaps,
                         const std::vector<double>& errs, json extra) {
  const double f = run.cfg.decay_factor;
  extra["checkpoints"] = at;
  extra["gaps"] = gaps;
  extra["decay_factor"] = f;
  extra["kind"] = "decay";
  const double budget = run.cfg.base_budget + errs.back() + f * errs.front();
  return run.report(gaps.back(), f * gaps.front(), budget, std::move(extra));
}

double lipschitz_slack(double err) { return 2.0 * err; }

bool premise_slow(const Parametrization& p) {
  // lambda' / lambda^2 -> 0
  return std::visit(
      [](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ConstantParam>) return true;
        else if constexpr (std::is_same_v<T, PowerAlphaParam>) return v.alpha > 0.0;
        else return false;
      },
      p.variant());
}

// ---------------------------------------------------------------------------

std::vector<BoundReport> norm_bounds(const Run& run) {
  const int N = run.s.N.value_or(1000);
  const double j0 = run.j0();
  const ValueIteration vi = iterate_Vn(run.op(), N);
  double worst = 0.0;
  int at = 0;
  for (int n = 1; n <= N; ++n) {
    const double v = run.nrm(vi.v[static_cast<std::size_t>(n)]);
    if (v > worst) worst = v, at = n;
  }
  std::vector<BoundReport> out;
  out.push_back(run.report(worst, j0, run.cfg.base_budget, {{"family", "v_n"}, {"N", N}, {"argmax_n", at}}));

  double worst_l = 0.0, at_l = 0.0;
  for (double l : run.cfg.vlambda_grid) {
    const double v = run.nrm(solve_vlambda(run.op(), l, run.cfg.vlambda_tol).v);
    if (v >= worst_l) worst_l = v, at_l = l;
  }
  out.push_back(run.report(worst_l, j0, run.cfg.base_budget + run.cfg.vlambda_tol,
                           {{"family", "v_lambda"}, {"lambdas", run.cfg.vlambda_grid}, {"argmax_lambda", at_l}}));
  return out;
}

std::vector<BoundReport> accretivity(const Run& run) {
  std::vector<BoundReport> out;
  for (double l : run.cfg.accretivity_lambdas) {
    const PropertyReport p = check_accretive(run.op(), l, run.cfg.samples, run.s.seed);
    out.push_back(run.report(1.0, p.worst_ratio, run.cfg.base_budget,
                             {{"lambda", l}, {"samples", p.samples}, {"violations", p.violations}}));
  }
  return out;
}

std::vector<BoundReport> solution_contraction(const Run& run) {
  const double T = run.s.T.value_or(10.0);
  const Vec U0 = scenario_start(run.s, 0), V0 = scenario_start(run.s, 1);
  const IntegratorOptions o = grid_options(T, 201, {});
  const Trajectory U = integrate_U(run.op(), U0, T, run.cfg.ode_tol, o);
  const Trajectory V = integrate_U(run.op(), V0, T, run.cfg.ode_tol, o);
  Worst w;
  const double budget = run.cfg.base_budget + 2.0 * (U.max_err() + V.max_err());
  double prev = run.nrm(U.points[0] - V.points[0]);
  for (std::size_t i = 1; i < U.times.size(); ++i) {
    const double cur = run.nrm(U.points[i] - V.points[i]);
    w.offer(cur - prev, 0.0, budget, {{"t", U.times[i]}, {"distance", cur}});
    prev = cur;
  }
  return {w.emit(run, {{"T", T}, {"kind", "monotonicity"}, {"final_distance", prev}})};
}

std::vector<BoundReport> derivative_decay(const Run& run) {
  const double T = run.s.T.value_or(10.0);
  const Trajectory U = integrate_U(run.op(), scenario_start(run.s, 0), T, run.cfg.ode_tol, grid_options(T, 201, {}));
  Worst w;
  const double budget = run.cfg.base_budget + 2.0 * lipschitz_slack(U.max_err());
  double prev = run.nrm(U.derivative[0]);
  for (std::size_t i = 1; i < U.times.size(); ++i) {
    const double cur = run.nrm(U.derivative[i]);
    w.offer(cur - prev, 0.0, budget, {{"t", U.times[i]}, {"derivative_norm", cur}});
    prev = cur;
  }
  return {w.emit(run, {{"T", T}, {"kind", "monotonicity"}})};
}

std::vector<BoundReport> chernoff(const Run& run) {
  const double T = run.s.T.value_or(50.0);
  const Vec U0 = scenario_start(run.s, 0);
  std::vector<double> ts;
  std::vector<int> ns;
  for (int i = 1; i <= 20; ++i) {
    ts.push_back(T * i / 20.0);
    ns.push_back(std::max(1, static_cast<int>(std::lround(T * i / 20.0))));
  }
  const Trajectory U = integrate_U(run.op(), U0, T, run.cfg.ode_tol, grid_options(T, 101, ts));
  std::vector<Vec> powers{U0};
  for (int n = 1; n <= ns.back(); ++n) powers.push_back(apply_J(run.op(), powers.back()));
  const double d0 = run.nrm(apply_A(run.op(), U0));
  Worst w;
  for (double t : ts) {
    for (int n : ns) {
      const double lhs = run.nrm(U.at(t) - powers[static_cast<std::size_t>(n)]);
      const double rhs = d0 * std::sqrt(t + (n - t) * (n - t));
      w.offer(lhs, rhs, run.cfg.base_budget + U.err_at(t), {{"t", t}, {"n", n}});
    }
  }
  return {w.emit(run, {{"T", T}, {"grid", "20x20"}})};
}

std::vector<BoundReport> convvn(const Run& run) {
  std::vector<int> ns = run.s.N ? std::vector<int>{*run.s.N} : std::vector<int>{10, 100, 1000};
  const double T = ns.back();
  std::vector<double> extra(ns.begin(), ns.end());
  const Trajectory U = integrate_U(run.op(), run.zero(), T, run.cfg.ode_tol, grid_options(T, 101, extra));
  const ValueIteration vi = iterate_Vn(run.op(), ns.back());
  const double j0 = run.j0();
  std::vector<BoundReport> out;
  for (int n : ns) {
    const Vec& vn = vi.v[static_cast<std::size_t>(n)];
    const double lhs = run.nrm(U.at(n) / n - vn);
    out.push_back(run.report(lhs, j0 / std::sqrt(static_cast<double>(n)), run.cfg.base_budget + U.err_at(n) / n,
                             {{"n", n}}));
  }
  return out;
}

std::vector<BoundReport> expo(const Run& run) {
  const double T = run.s.T.value_or(5.0);
  const Vec U0 = scenario_start(run.s, 0);
  const Trajectory U = integrate_U(run.op(), U0, T, run.cfg.ode_tol, grid_options(T, 101, {}));
  const double a0 = run.nrm(apply_A(run.op(), U0));
  std::vector<BoundReport> out;
  for (long m : run.cfg.expo_m) {
    if (static_cast<double>(m) < T) continue;
    const double lhs = run.nrm(euler_power(run.op(), U0, T, m) - U.points.back());
    out.push_back(run.report(lhs, a0 * T / std::sqrt(static_cast<double>(m)),
                             run.cfg.base_budget + U.err_bound.back(), {{"t", T}, {"m", m}}));
  }
  return out;
}

std::vector<int> subgrid(int len) {
  std::vector<int> k;
  for (int i = 0; i < 10; ++i) k.push_back(static_cast<int>(std::lround(static_cast<double>(i) * len / 9.0)));
  k.erase(std::unique(k.begin(), k.end()), k.end());
  return k;
}

std::vector<BoundReport> kobayashi(const Run& run) {
  Worst w;
  const auto check_pair = [&](const StepSequence& a, const StepSequence& b, const Vec& x0, const Vec& xh0, int pair) {
    const DiscreteOrbit x = euler_scheme(run.op(), x0, a);
    const DiscreteOrbit xh = euler_scheme(run.op(), xh0, b);
    for (int k : subgrid(a.size())) {
      for (int l : subgrid(b.size())) {
        const double lhs = run.nrm(x.points[static_cast<std::size_t>(k)] - xh.points[static_cast<std::size_t>(l)]);
        const double rhs = kobayashi_rhs(run.op(), a, b, k, l, x0, xh0);
        w.offer(lhs, rhs, run.cfg.base_budget, {{"pair", pair}, {"k", k}, {"l", l}});
      }
    }
  };
  if (run.s.steps) {
    const Vec x0 = scenario_start(run.s, 0);
    check_pair(*run.s.steps, *run.s.steps, x0, x0, 0);
    return {w.emit(run, {{"pairs", 1}})};
  }
  SplitMix64 rng(run.s.seed ^ 0x6b6f62617961ULL);
  const auto draw = [&] {
    const int len = 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(run.cfg.kobayashi_max_len));
    std::vector<double> st(static_cast<std::size_t>(len));
    for (double& v : st) v = rng.uniform_open_closed();
    return StepSequence(std::move(st));
  };
  for (int p = 0; p < run.cfg.kobayashi_pairs; ++p) {
    const StepSequence a = draw(), b = draw();
    const Vec x0 = sample_ball(rng, run.op().dim(), 1.0, run.op().norm_kind());
    const Vec xh0 = sample_ball(rng, run.op().dim(), 1.0, run.op().norm_kind());
    check_pair(a, b, x0, xh0, p);
  }
  return {w.emit(run, {{"pairs", run.cfg.kobayashi_pairs}, {"max_len", run.cfg.kobayashi_max_len}})};
}

struct NamedSteps {
  std::string name;
  StepSequence steps;
};

std::vector<NamedSteps> euler_specs(const Scenario& s) {
  if (s.steps) return {{"custom", *s.steps}};
  return {{"harmonic", StepSequence::harmonic(1000)}, {"inverse_sqrt", StepSequence::inverse_sqrt(400)}};
}

std::vector<int> step_checkpoints(int N) { return log_integers(1, N, 10); }

std::vector<BoundReport> euler_vs_ode(const Run& run) {
  const Vec U0 = scenario_start(run.s, 0);
  const Vec& x0 = U0;
  const double a0 = run.nrm(apply_A(run.op(), U0));
  std::vector<BoundReport> out;
  for (const auto& [name, steps] : euler_specs(run.s)) {
    const DiscreteOrbit x = euler_scheme(run.op(), x0, steps);
    const double T = steps.sigma(steps.size());
    const std::vector<int> ks = step_checkpoints(steps.size());
    std::vector<double> ts;
    for (int i = 1; i <= 10; ++i) ts.push_back(T * i / 10.0);
    for (int k : ks) ts.push_back(steps.sigma(k));
    const Trajectory U = integrate_U(run.op(), U0, T, run.cfg.ode_tol, grid_options(T, 101, ts));
    Worst w;
    for (int k : ks) {
      for (double t : ts) {
        const double lhs = run.nrm(x.points[static_cast<std::size_t>(k)] - U.at(t));
        const double d = steps.sigma(k) - t;
        const double rhs = run.nrm(x0 - U0) + a0 * std::sqrt(d * d + steps.tau(k));
        w.offer(lhs, rhs, run.cfg.base_budget + U.err_at(t), {{"k", k}, {"t", t}});
      }
    }
    out.push_back(w.emit(run, {{"steps", name}, {"N", steps.size()}, {"sigma_N", T}}));
  }
  return out;
}

std::vector<BoundReport> normalized_euler(const Run& run) {
  const Vec U0 = scenario_start(run.s, 0);
  const Vec& x0 = U0;
  const double a0 = run.nrm(apply_A(run.op(), U0));
  std::vector<BoundReport> out;
  for (const auto& [name, steps] : euler_specs(run.s)) {
    const DiscreteOrbit x = euler_scheme(run.op(), x0, steps);
    const double T = steps.sigma(steps.size());
    const std::vector<int> ks = step_checkpoints(steps.size());
    std::vector<double> ts;
    for (int k : ks) ts.push_back(steps.sigma(k));
    const Trajectory U = integrate_U(run.op(), U0, T, run.cfg.ode_tol, grid_options(T, 101, ts));
    Worst w;
    for (int k : ks) {
      const double t = steps.sigma(k);
      const double lhs = run.nrm(x.points[static_cast<std::size_t>(k)] - U.at(t)) / t;
      const double rhs = (run.nrm(x0 - U0) + a0 * std::sqrt(t)) / t;
      w.offer(lhs, rhs, run.cfg.base_budget + U.err_at(t) / t, {{"k", k}, {"t", t}});
    }
    out.push_back(w.emit(run, {{"steps", name}, {"N", steps.size()}}));
  }
  return out;
}

/// Piecewise-linear interpolation of an Euler orbit through (sigma_k, x_k).
Vec interpolate_orbit(const DiscreteOrbit& x, const StepSequence& steps, double t) {
  const auto sig = steps.sigmas();
  const double top = sig.back();
  if (t >= top) return x.points.back();
  const auto it = std::upper_bound(sig.begin(), sig.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - sig.begin());  // sig[k-1] <= t < sig[k]
  const double a = sig[k - 1], b = sig[k];
  const double w = (t - a) / (b - a);
  return (1.0 - w) * x.points[k - 1] + w * x.points[k];
}

std::vector<BoundReport> interpolation(const Run& run) {
  const Vec U0 = scenario_start(run.s, 0);
  const double a0 = run.nrm(apply_A(run.op(), U0));
  std::vector<BoundReport> out;

  const auto sup_gap = [&](const StepSequence& steps, const Trajectory& U) {
    const DiscreteOrbit x = euler_scheme(run.op(), U0, steps);
    double gap = 0.0, where = 0.0;
    for (std::size_t i = 0; i < U.times.size(); ++i) {
      const double g = run.nrm(interpolate_orbit(x, steps, U.times[i]) - U.points[i]);
      if (g > gap) gap = g, where = U.times[i];
    }
    return std::pair{gap, where};
  };

  if (run.s.steps) {
    const StepSequence& steps = *run.s.steps;
    const double t = steps.sigma(steps.size());
    const Trajectory U = integrate_U(run.op(), U0, t, run.cfg.ode_tol, grid_options(t, 201, {}));
    const auto [gap, where] = sup_gap(steps, U);
    const double rhs = a0 * (1.0 + (1.0 + std::sqrt(2.0)) * t) * std::sqrt(steps.max_step());
    out.push_back(run.report(gap, rhs, run.cfg.base_budget + U.max_err(), {{"steps", "custom"}, {"t", t}, {"argmax_t", where}}));
    return out;
  }

  const double t = run.s.T.value_or(10.0);
  const Trajectory U = integrate_U(run.op(), U0, t, run.cfg.ode_tol, grid_options(t, 201, {}));
  const std::array<double, 4> caps{1.0, 0.25, 0.0625, 0.015625};
  for (const char* base : {"harmonic", "inverse_sqrt"}) {
    const bool harmonic = std::string_view(base) == "harmonic";
    std::vector<double> gaps;
    for (double cap : caps) {
      const StepSequence steps = StepSequence::covering(
          t,
          [&](int i) {
            const double raw = harmonic ? 1.0 / i : 1.0 / std::sqrt(static_cast<double>(i));
            return std::min(cap, raw);
          },
          1 << 26);
      const auto [gap, where] = sup_gap(steps, U);
      gaps.push_back(gap);
      const double rhs = a0 * (1.0 + (1.0 + std::sqrt(2.0)) * t) * std::sqrt(steps.max_step());
      out.push_back(run.report(gap, rhs, run.cfg.base_budget + U.max_err(),
                               {{"steps", base}, {"cap", cap}, {"N", steps.size()}, {"t", t}, {"argmax_t", where}}));
    }
    double worst_increase = -std::numeric_limits<double>::infinity();
    for (std::size_t r = 1; r < gaps.size(); ++r) worst_increase = std::max(worst_increase, gaps[r] - gaps[r - 1]);
    out.push_back(run.report(worst_increase, 0.0, run.cfg.base_budget + 2.0 * U.max_err(),
                             {{"steps", base}, {"kind", "refinement_monotonicity"}, {"caps", caps}, {"gaps", gaps}}));
  }
  return out;
}

Parametrization param_or(const std::optional<Parametrization>& p, Parametrization fallback) {
  return p ? *p : std::move(fallback);
}

std::vector<BoundReport> stationarity_gap(const Run& run) {
  const Parametrization param = param_or(run.s.param, Parametrization::power_alpha(0.5));
  const double T = run.s.T.value_or(100.0);
  std::vector<double> cps = log_points(T / 100.0, T, 5);
  cps.insert(cps.begin(), 0.0);
  const Trajectory u =
      integrate_u(run.op(), param, scenario_start(run.s, 0), T, run.cfg.ode_tol, grid_options(T, 101, cps));
  std::vector<BoundReport> out;
  for (double t : cps) {
    const double lam = param_lambda(param, t);
    const DiscountedValue v = solve_vlambda(run.op(), lam, run.cfg.vlambda_tol);
    const std::size_t i = u.index_of(t);
    const double lhs = run.nrm(u.points[i] - v.v);
    const double rhs = run.nrm(u.derivative[i]) / lam;
    const double budget = run.cfg.base_budget + u.err_bound[i] + run.cfg.vlambda_tol + lipschitz_slack(u.err_bound[i]) / lam;
    out.push_back(run.report(lhs, rhs, budget, {{"t", t}, {"lambda", lam}, {"param", param.describe()}}));
  }
  return out;
}

std::vector<BoundReport> constant_decay(const Run& run) {
  std::vector<double> lambdas{0.5, 0.1};
  if (run.s.param) {
    if (const auto* c = std::get_if<ConstantParam>(&run.s.param->variant())) lambdas = {c->lambda};
  }
  const double T = run.s.T.value_or(20.0);
  std::vector<double> ts{0.0};
  for (double t : {1.0, 5.0, 10.0, 20.0})
    if (t < T) ts.push_back(t);
  ts.push_back(T);
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  const Vec u0 = scenario_start(run.s, 0);
  std::vector<BoundReport> out;
  for (double lam : lambdas) {
    const Parametrization p = Parametrization::constant(lam);
    const Trajectory u = integrate_u(run.op(), p, u0, T, run.cfg.ode_tol, grid_options(T, 101, ts));
    const DiscountedValue v = solve_vlambda(run.op(), lam, run.cfg.vlambda_tol);
    const double d0 = run.nrm(apply_Phi(run.op(), lam, u0) - u0);
    for (double t : ts) {
      const std::size_t i = u.index_of(t);
      const double e = u.err_bound[i];
      const double decay = std::exp(-lam * t);
      out.push_back(run.report(run.nrm(u.derivative[i]), d0 * decay, run.cfg.base_budget + lipschitz_slack(e),
                               {{"lambda", lam}, {"t", t}, {"quantity", "derivative"}}));
      out.push_back(run.report(run.nrm(u.points[i] - v.v), d0 * decay / lam,
                               run.cfg.base_budget + e + run.cfg.vlambda_tol,
                               {{"lambda", lam}, {"t", t}, {"quantity", "gap"}}));
    }
  }
  return out;
}

std::vector<BoundReport> initial_independence(const Run& run) {
  const Parametrization param = param_or(run.s.param, Parametrization::power_alpha(0.5));
  const double T = run.s.T.value_or(100.0);
  const std::vector<double> cps = log_points(T / 100.0, T, 5);
  const Vec u0 = scenario_start(run.s, 0), v0 = scenario_start(run.s, 1);
  const IntegratorOptions o = grid_options(T, 101, cps);
  const Trajectory u = integrate_u(run.op(), param, u0, T, run.cfg.ode_tol, o);
  const Trajectory v = integrate_u(run.op(), param, v0, T, run.cfg.ode_tol, o);
  const double d0 = run.nrm(u0 - v0);
  std::vector<BoundReport> out;
  std::vector<double> gaps, errs;
  for (double t : cps) {
    const std::size_t i = u.index_of(t);
    const double gap = run.nrm(u.points[i] - v.points[i]);
    const double rhs = d0 * std::exp(-lambda_integral(param, 0.0, t, run.cfg.quad_tol));
    const double e = u.err_bound[i] + v.err_bound[i];
    gaps.push_back(gap);
    errs.push_back(e);
    out.push_back(run.report(gap, rhs, run.cfg.base_budget + e + rhs * std::expm1(run.cfg.quad_tol),
                             {{"t", t}, {"param", param.describe()}}));
  }
  out.push_back(decay_report(run, cps, gaps, errs, {{"param", param.describe()}}));
  return out;
}

std::vector<BoundReport> wn_tracks_vn(const Run& run) {
  const Parametrization param = Parametrization::inverse_time_zeta();
  const int N = run.s.N.value_or(1000);
  const std::vector<int> ns = log_integers(std::max(1, N / 100), N, 5);
  std::vector<double> cps(ns.begin(), ns.end());
  const Trajectory w = integrate_u(run.op(), param, run.zero(), N, run.cfg.ode_tol, grid_options(N, 101, cps));
  const ValueIteration vi = iterate_Vn(run.op(), N);
  std::vector<double> gaps, errs;
  for (int n : ns) {
    gaps.push_back(run.nrm(w.at(n) - vi.v[static_cast<std::size_t>(n)]));
    errs.push_back(w.err_at(n));
  }
  return {decay_report(run, cps, gaps, errs, {{"param", param.describe()}})};
}

std::vector<BoundReport> convboth(const Run& run) {
  const auto* tr = std::get_if<Translation>(&run.op().variant());
  if (!tr) return {skipped_report(run.id, run.ctx(), "premise not certified")};
  const Vec& l = tr->c;  // U'(t) = c for every t
  const ValueIteration vi = iterate_Vn(run.op(), 1000);
  std::vector<double> ns{10, 100, 1000}, gaps_n, errs_n{0.0, 0.0, 0.0};
  for (double n : ns) gaps_n.push_back(run.nrm(vi.v[static_cast<std::size_t>(n)] - l));
  std::vector<double> ls{0.1, 0.01, 0.001}, gaps_l, errs_l;
  for (double lam : ls) {
    gaps_l.push_back(run.nrm(solve_vlambda(run.op(), lam, run.cfg.vlambda_tol).v - l));
    errs_l.push_back(run.cfg.vlambda_tol);
  }
  return {decay_report(run, ns, gaps_n, errs_n, {{"family", "v_n"}}),
          decay_report(run, ls, gaps_l, errs_l, {{"family", "v_lambda"}})};
}

std::vector<BoundReport> hypothesis_H(const Run& run) {
  const double C = hypothesis_H_constant(run.op());
  SplitMix64 rng(run.s.seed ^ 0x48ULL);
  Worst w;
  for (int i = 0; i < run.cfg.samples; ++i) {
    const Vec x = sample_ball(rng, run.op().dim(), 10.0, run.op().norm_kind());
    const double l = rng.uniform_open_closed(), m = rng.uniform_open_closed();
    const double scale = std::abs(l - m) * (C + run.nrm(x));
    if (scale < kMinPairDistance) continue;
    const double ratio = run.nrm(apply_Phi(run.op(), l, x) - apply_Phi(run.op(), m, x)) / scale;
    w.offer(ratio, 1.0, run.cfg.base_budget, {{"lambda", l}, {"mu", m}});
  }
  if (!w.any) return {skipped_report(run.id, run.ctx(), "no admissible samples")};
  return {w.emit(run, {{"C", C}, {"samples", run.cfg.samples}})};
}

struct SlowRun {
  Parametrization param;
  double T;
  Vec u0;
  Trajectory u;
};

SlowRun slow_trajectory(const Run& run, const std::vector<double>& cps, double T, const Parametrization& param) {
  if (!param.is_c1()) throw InputError(std::string(to_string(run.id)) + ": parametrization must be continuously differentiable");
  const Vec u0 = scenario_start(run.s, 0);
  return {param, T, u0, integrate_u(run.op(), param, u0, T, run.cfg.ode_tol, grid_options(T, 101, cps))};
}

std::vector<BoundReport> slow_param(const Run& run) {
  const Parametrization param = param_or(run.s.param, Parametrization::power_alpha(0.5));
  const double T = run.s.T.value_or(1000.0);
  const std::vector<double> cps{T / 100.0, T / 10.0, T};
  const SlowRun sr = slow_trajectory(run, cps, T, param);
  std::vector<BoundReport> out;
  for (double t : cps) {
    const SlowParamTerms b = slow_param_terms(run.op(), param, sr.u0, t, run.cfg.quad_tol);
    const DiscountedValue v = solve_vlambda(run.op(), b.lambda_t, run.cfg.vlambda_tol);
    const double lhs = run.nrm(sr.u.at(t) - v.v);
    const double budget = run.cfg.base_budget + sr.u.err_at(t) + run.cfg.vlambda_tol + b.quad_error;
    out.push_back(run.report(lhs, b.value, budget,
                             {{"t", t},
                              {"param", param.describe()},
                              {"lambda", b.lambda_t},
                              {"L", b.L_t},
                              {"C", b.C},
                              {"C_prime", b.C_prime},
                              {"u_prime0", b.u_prime0},
                              {"integral", b.integral}}));
  }
  return out;
}

std::vector<BoundReport> convder_decay(const Run& run) {
  const Parametrization param = param_or(run.s.param, Parametrization::power_alpha(0.5));
  if (!param.is_c1()) throw InputError("convder_decay: parametrization must be continuously differentiable");
  if (!premise_slow(param)) {
    json c = run.ctx();
    c["param"] = param.describe();
    return {skipped_report(run.id, c, "lambda'/lambda^2 does not tend to 0")};
  }
  const double T = run.s.T.value_or(1000.0);
  const std::vector<double> cps = log_points(T / 100.0, T, 5);
  const SlowRun sr = slow_trajectory(run, cps, T, param);
  std::vector<double> gaps, errs;
  for (double t : cps) {
    const DiscountedValue v = solve_vlambda(run.op(), param_lambda(param, t), run.cfg.vlambda_tol);
    gaps.push_back(run.nrm(sr.u.at(t) - v.v));
    errs.push_back(sr.u.err_at(t) + run.cfg.vlambda_tol);
  }
  return {decay_report(run, cps, gaps, errs, {{"param", param.describe()}})};
}

std::vector<BoundReport> two_param(const Run& run) {
  const Parametrization lam = param_or(run.s.param, Parametrization::inverse_time_zeta());
  const Parametrization mu = param_or(run.s.param2, Parametrization::power_alpha(0.0));
  const double T = run.s.T.value_or(1000.0);
  const double tol = run.cfg.quad_tol;
  // Total allowance for the outer integral, spread over the sample intervals.
  const double kOuterTol = 1e-9;
  const std::vector<double> cps = log_points(T / 100.0, T, 5);
  const Vec u0 = scenario_start(run.s, 0), v0 = scenario_start(run.s, 1);
  const IntegratorOptions o = grid_options(T, 2001, cps);
  const Trajectory u = integrate_u(run.op(), lam, u0, T, run.cfg.ode_tol, o);
  const Trajectory v = integrate_u(run.op(), mu, v0, T, run.cfg.ode_tol, o);

  const double C = hypothesis_H_constant(run.op());
  // ||u(s)|| <= max(||u0||, ||J(0)||) for all s, and ||u'|| <= 2 of that.
  const double B = std::max(run.nrm(u0), run.j0());
  const double G = 2.0 * B;
  const auto& ts = u.times;
  std::vector<double> un(ts.size());
  double observed = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    un[i] = run.nrm(u.points[i]) + u.err_bound[i];
    observed = std::max(observed, run.nrm(u.points[i]));
  }
  const auto envelope = [&](std::size_t i, double s) {
    return std::min(B + u.err_bound[i], std::min(un[i] + (s - ts[i]) * G, un[i + 1] + (ts[i + 1] - s) * G));
  };
  // M[i] = int_0^{t_i} mu.
  std::vector<double> M(ts.size(), 0.0);
  for (std::size_t i = 1; i < ts.size(); ++i) M[i] = M[i - 1] + lambda_integral(mu, ts[i - 1], ts[i], tol / ts.size());

  std::vector<BoundReport> out;
  std::vector<double> gaps, errs;
  for (double t : cps) {
    const std::size_t it = u.index_of(t);
    double I = 0.0;
    for (std::size_t i = 0; i < it; ++i) {
      const auto h = [&](double s) {
        const double inner = s == ts[i] ? 0.0 : lambda_integral(mu, ts[i], s, tol);
        const double d = std::abs(param_lambda(lam, s) - param_lambda(mu, s));
        return (C + envelope(i, s)) * d * std::exp(M[i] + inner - M[it]);
      };
      I += adaptive_simpson(h, ts[i], ts[i + 1], kOuterTol * (ts[i + 1] - ts[i]) / t).value;
    }
    const double rhs = std::exp(-M[it]) * run.nrm(u0 - v0) + I;
    const double gap = run.nrm(u.points[it] - v.points[it]);
    const double e = u.err_bound[it] + v.err_bound[it];
    const double quad = std::expm1(2.0 * tol) * rhs + kOuterTol;
    gaps.push_back(gap);
    errs.push_back(e);
    out.push_back(run.report(gap, rhs, run.cfg.base_budget + e + quad,
                             {{"t", t}, {"lambda", lam.describe()}, {"mu", mu.describe()}}));
  }
  const double abs_lam_mu = adaptive_simpson([&](double s) { return std::abs(param_lambda(lam, s) - param_lambda(mu, s)); }, 0.0,
                                T, 1e-8)
                   .value;
  out.push_back(decay_report(run, cps, gaps, errs,
                             {{"lambda", lam.describe()},
                              {"mu", mu.describe()},
                              {"lambda_over_mu_at_T", param_lambda(lam, T) / param_lambda(mu, T)},
                              {"int_abs_lambda_minus_mu", abs_lam_mu},
                              {"observed_sup_norm_u", observed},
                              {"boundedness", "finite-horizon surrogate"}}));
  return out;
}

std::vector<BoundReport> vlambda_lipschitz(const Run& run) {
  const double C = hypothesis_H_constant(run.op());
  const double Cp = run.j0();
  std::vector<DiscountedValue> vs;
  for (double l : run.cfg.vlambda_grid) vs.push_back(solve_vlambda(run.op(), l, run.cfg.vlambda_tol));
  Worst w;
  for (const auto& a : vs) {
    for (const auto& b : vs) {
      if (a.lambda == b.lambda) continue;
      w.offer(run.nrm(a.v - b.v), std::abs(1.0 - a.lambda / b.lambda) * (C + Cp),
              run.cfg.base_budget + 2.0 * run.cfg.vlambda_tol, {{"lambda", a.lambda}, {"mu", b.lambda}});
    }
  }
  return {w.emit(run, {{"C", C}, {"C_prime", Cp}, {"lambdas", run.cfg.vlambda_grid}})};
}

std::vector<BoundReport> discrete_slow(const Run& run) {
  StepSequence steps;
  std::string name = "custom";
  if (run.s.steps) {
    steps = *run.s.steps;
  } else {
    steps = StepSequence::inverse_sqrt(run.s.N.value_or(10000));
    name = "inverse_sqrt";
  }
  const int N = steps.size();
  const DiscreteOrbit w = phi_recursion(run.op(), steps.steps(), run.zero());
  const std::vector<int> ns = log_integers(std::max(1, N / 100), N, 5);
  std::vector<double> gaps, errs;
  for (int n : ns) {
    const DiscountedValue v = solve_vlambda(run.op(), steps.step(n), run.cfg.vlambda_tol);
    gaps.push_back(run.nrm(w.points[static_cast<std::size_t>(n)] - v.v));
    errs.push_back(run.cfg.vlambda_tol);
  }
  return {decay_report(run, std::vector<double>(ns.begin(), ns.end()), gaps, errs, {{"steps", name}, {"N", N}})};
}

std::vector<BoundReport> alpha_family(const Run& run) {
  double alpha = 0.5;
  if (run.s.param) {
    const auto* pa = std::get_if<PowerAlphaParam>(&run.s.param->variant());
    if (!pa || pa->alpha <= 0.0) throw InputError("alpha_family: parametrization must be PowerAlpha with alpha in (0, 1)");
    alpha = pa->alpha;
  }
  const double T = run.s.T.value_or(1000.0);
  std::vector<BoundReport> out;
  {
    const Parametrization p = Parametrization::power_alpha(alpha);
    const std::vector<double> cps = log_points(T / 100.0, T, 5);
    const SlowRun sr = slow_trajectory(run, cps, T, p);
    std::vector<double> gaps, errs;
    for (double t : cps) {
      const DiscountedValue v = solve_vlambda(run.op(), param_lambda(p, t), run.cfg.vlambda_tol);
      gaps.push_back(run.nrm(sr.u.at(t) - v.v));
      errs.push_back(sr.u.err_at(t) + run.cfg.vlambda_tol);
    }
    out.push_back(decay_report(run, cps, gaps, errs, {{"param", p.describe()}, {"target", "v_lambda(t)"}}));
  }
  {
    const Parametrization p = Parametrization::power_alpha(0.0);
    const int N = static_cast<int>(T);
    const std::vector<int> ns = log_integers(std::max(1, N / 100), N, 5);
    const std::vector<double> cps(ns.begin(), ns.end());
    const SlowRun sr = slow_trajectory(run, cps, N, p);
    const ValueIteration vi = iterate_Vn(run.op(), N);
    std::vector<double> gaps, errs;
    for (int n : ns) {
      gaps.push_back(run.nrm(sr.u.at(n) - vi.v[static_cast<std::size_t>(n)]));
      errs.push_back(sr.u.err_at(n));
    }
    out.push_back(decay_report(run, cps, gaps, errs, {{"param", p.describe()}, {"target", "v_n"}}));
  }
  return out;
}

}  // namespace

std::vector<BoundReport> verify(CheckId check, const Scenario& scenario, const VerifySettings& settings) {
  const Run run{check, scenario, settings};
  switch (check) {
    case CheckId::norm_bounds: return norm_bounds(run);
    case CheckId::accretivity: return accretivity(run);
    case CheckId::solution_contraction: return solution_contraction(run);
    case CheckId::derivative_decay: return derivative_decay(run);
    case CheckId::chernoff: return chernoff(run);
    case CheckId::convvn: return convvn(run);
    case CheckId::expo: return expo(run);
    case CheckId::kobayashi: return kobayashi(run);
    case CheckId::euler_vs_ode: return euler_vs_ode(run);
    case CheckId::normalized_euler: return normalized_euler(run);
    case CheckId::interpolation: return interpolation(run);
    case CheckId::stationarity_gap: return stationarity_gap(run);
    case CheckId::constant_decay: return constant_decay(run);
    case CheckId::initial_independence: return initial_independence(run);
    case CheckId::wn_tracks_vn: return wn_tracks_vn(run);
    case CheckId::convboth: return convboth(run);
    case CheckId::hypothesis_H: return hypothesis_H(run);
    case CheckId::slow_param: return slow_param(run);
    case CheckId::convder_decay: return convder_decay(run);
    case CheckId::two_param: return two_param(run);
    case CheckId::vlambda_lipschitz: return vlambda_lipschitz(run);
    case CheckId::discrete_slow: return discrete_slow(run);
    case CheckId::alpha_family: return alpha_family(run);
  }
  throw InternalError("verify: unhandled check id");
}

}  // namespace nexlab
