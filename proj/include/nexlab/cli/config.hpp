#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "nexlab/bounds/checks.hpp"
#include "nexlab/continuous/parametrization.hpp"
#include "nexlab/core/operator.hpp"
#include "nexlab/discrete/steps.hpp"

namespace nexlab::cli {

enum class Task { value_iter, discounted, euler, ode, phi_ode, verify, suite, generate_game };

const char* to_string(Task t);
/// Throws ConfigError.
Task parse_task(const std::string& name);

struct ExperimentConfig {
  Task task = Task::value_iter;
  nlohmann::json doc = nlohmann::json::object();
  std::filesystem::path base_dir;  // relative game paths resolve against this
  std::filesystem::path out_dir;
};

/// Reads a JSON config file; ConfigError on parse failure, IoError if unreadable.
nlohmann::json load_config_file(const std::filesystem::path& path);

/// Applies "a.b.c=value". The value is parsed as JSON when possible, otherwise
/// taken as a string.
void apply_override(nlohmann::json& doc, const std::string& assignment);

OperatorInstance build_operator(const nlohmann::json& spec, const std::filesystem::path& base_dir);
Parametrization build_param(const nlohmann::json& spec);
StepSequence build_steps(const nlohmann::json& spec);
VerifySettings build_settings(const nlohmann::json& spec);
/// Checks named by "checks": "all" or an array of ids.
std::vector<CheckId> build_check_list(const nlohmann::json& spec);

/// Scenario from an object carrying "operator" plus optional T, N, param,
/// param2, steps, starts, seed and name.
Scenario build_scenario(const nlohmann::json& spec, const std::filesystem::path& base_dir);

StochasticGame matching_pennies_game();

}  // namespace nexlab::cli
