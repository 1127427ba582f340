#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nexlab/continuous/parametrization.hpp"
#include "nexlab/core/operator.hpp"
#include "nexlab/discrete/steps.hpp"

namespace nexlab {

enum class CheckId {
  norm_bounds,
  accretivity,
  solution_contraction,
  derivative_decay,
  chernoff,
  convvn,
  expo,
  kobayashi,
  euler_vs_ode,
  normalized_euler,
  interpolation,
  stationarity_gap,
  constant_decay,
  initial_independence,
  wn_tracks_vn,
  convboth,
  hypothesis_H,
  slow_param,
  convder_decay,
  two_param,
  vlambda_lipschitz,
  discrete_slow,
  alpha_family,
};

const char* to_string(CheckId id);
/// Throws InputError on an unknown name.
CheckId parse_check_id(std::string_view name);
std::span<const CheckId> all_checks();

enum class Verdict { pass, fail, skipped };
const char* to_string(Verdict v);

struct BoundReport {
  CheckId check = CheckId::norm_bounds;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
  double tol_budget = 0.0;
  Verdict verdict = Verdict::pass;
  nlohmann::json context = nlohmann::json::object();
};

/// verdict = pass iff lhs <= rhs + tol_budget.
BoundReport make_report(CheckId check, double lhs, double rhs, double tol_budget, nlohmann::json context);
BoundReport skipped_report(CheckId check, nlohmann::json context, const std::string& reason);

/// Inputs for a check. Unset fields fall back to per-check defaults; missing
/// starts are drawn from the ball of radius 1 with the scenario seed.
struct Scenario {
  Scenario(std::string name_, OperatorInstance op_) : name(std::move(name_)), op(std::move(op_)) {}

  std::string name;
  OperatorInstance op;
  std::optional<double> T;
  std::optional<int> N;
  std::optional<Parametrization> param;
  std::optional<Parametrization> param2;
  std::optional<StepSequence> steps;
  std::vector<Vec> starts;
  std::uint64_t seed = 1;
};

struct VerifySettings {
  double ode_tol = 1e-8;
  double vlambda_tol = 1e-10;
  double quad_tol = 1e-10;
  double base_budget = 1e-9;
  double decay_factor = 0.2;
  int samples = 1000;
  int kobayashi_pairs = 100;
  int kobayashi_max_len = 200;
  std::vector<double> accretivity_lambdas{0.1, 0.5, 1.0, 2.0};
  std::vector<double> vlambda_grid{1.0, 0.7, 0.5, 0.3, 0.2, 0.1, 0.05, 0.02, 0.01, 0.005};
  std::vector<long> expo_m{25, 100, 400, 1600};
};

/// Start i of the scenario (explicit or seeded).
Vec scenario_start(const Scenario& s, std::size_t i);

/// Runs one registry check; returns one report per checkpoint or variant.
std::vector<BoundReport> verify(CheckId check, const Scenario& scenario, const VerifySettings& settings = {});

bool all_passed(std::span<const BoundReport> reports);

}  // namespace nexlab
