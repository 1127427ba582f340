#include "nexlab/cli/config.hpp"

#include <fstream>
#include <numbers>
#include <sstream>

#include "nexlab/core/error.hpp"

namespace nexlab::cli {

using nlohmann::json;

namespace {

constexpr std::pair<Task, const char*> kTasks[] = {
    {Task::value_iter, "value_iter"}, {Task::discounted, "discounted"}, {Task::euler, "euler"},
    {Task::ode, "ode"},               {Task::phi_ode, "phi_ode"},       {Task::verify, "verify"},
    {Task::suite, "suite"},           {Task::generate_game, "generate_game"},
};

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw ConfigError(where + "." + key + ": missing");
  return obj.at(key);
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where + ": expected a number");
  return v.get<double>();
}

int integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ConfigError(where + ": expected an integer");
  return v.get<int>();
}

Vec vector_of(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) throw ConfigError(where + ": expected a non-empty array of numbers");
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = number(v[i], where + "[" + std::to_string(i) + "]");
  return out;
}

Mat matrix_of(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty() || !v[0].is_array()) throw ConfigError(where + ": expected a matrix (array of rows)");
  const std::size_t rows = v.size(), cols = v[0].size();
  Mat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!v[i].is_array() || v[i].size() != cols) throw ConfigError(where + ": ragged matrix at row " + std::to_string(i));
    for (std::size_t j = 0; j < cols; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          number(v[i][j], where + "[" + std::to_string(i) + "][" + std::to_string(j) + "]");
    }
  }
  return m;
}

NormKind norm_or(const json& spec, NormKind fallback, const std::string& where) {
  if (!spec.contains("norm")) return fallback;
  try {
    return parse_norm_kind(spec.at("norm").get<std::string>());
  } catch (const std::exception&) {
    throw ConfigError(where + ".norm: expected \"sup\" or \"euclidean\"");
  }
}

std::string type_of(const json& spec, const std::string& where) {
  const json& t = field(spec, "type", where);
  if (!t.is_string()) throw ConfigError(where + ".type: expected a string");
  return t.get<std::string>();
}

}  // namespace

const char* to_string(Task t) {
  for (const auto& [k, n] : kTasks)
    if (k == t) return n;
  return "unknown";
}

Task parse_task(const std::string& name) {
  for (const auto& [k, n] : kTasks)
    if (name == n) return k;
  throw ConfigError("task: unknown task '" + name + "'");
}

json load_config_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read config '" + path.string() + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path.string() + "': " + e.what());
  }
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("--set " + assignment + ": expected key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;
  }
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("--set " + assignment + ": empty key component");
    if (!node->is_object()) {
      if (!node->is_null()) throw ConfigError("--set " + key + ": '" + part + "' is below a non-object");
      *node = json::object();
    }
    if (dot == std::string::npos) {
      (*node)[part] = std::move(value);
      return;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

StochasticGame matching_pennies_game() {
  StochasticGame g;
  g.states = {"s0"};
  g.actions = {{2, 2}};
  Mat pay(2, 2);
  pay << 1, -1, -1, 1;
  g.payoff = {pay};
  g.transition = {Mat::Ones(4, 1)};
  validate_game(g);
  return g;
}

OperatorInstance build_operator(const json& spec, const std::filesystem::path& base_dir) {
  const std::string where = "operator";
  const std::string type = type_of(spec, where);
  if (type == "translation") return OperatorInstance::translation(vector_of(field(spec, "c", where), where + ".c"), norm_or(spec, NormKind::sup, where));
  if (type == "rotation") {
    const double deg = number(field(spec, "degrees", where), where + ".degrees");
    return OperatorInstance::rotation(deg * std::numbers::pi / 180.0);
  }
  if (type == "isometry") {
    return OperatorInstance::linear_isometry(matrix_of(field(spec, "matrix", where), where + ".matrix"),
                                             norm_or(spec, NormKind::euclidean, where));
  }
  if (type == "affine") {
    return OperatorInstance::affine(matrix_of(field(spec, "matrix", where), where + ".matrix"),
                                    vector_of(field(spec, "offset", where), where + ".offset"),
                                    norm_or(spec, NormKind::sup, where));
  }
  if (type == "identity") {
    return OperatorInstance::identity(integer(field(spec, "dim", where), where + ".dim"), norm_or(spec, NormKind::sup, where));
  }
  if (type == "matching_pennies") return OperatorInstance::shapley(matching_pennies_game());
  if (type == "game") {
    const json& p = field(spec, "path", where);
    if (!p.is_string()) throw ConfigError(where + ".path: expected a string");
    std::filesystem::path path = p.get<std::string>();
    if (path.is_relative()) path = base_dir / path;
    return OperatorInstance::shapley(load_game(path));
  }
  if (type == "game_inline") return OperatorInstance::shapley(parse_game(field(spec, "document", where)));
  if (type == "random_game") {
    const json& range = field(spec, "range", where);
    if (!range.is_array() || range.size() != 2) throw ConfigError(where + ".range: expected [lo, hi]");
    return OperatorInstance::shapley(random_game(
        integer(field(spec, "states", where), where + ".states"), integer(field(spec, "m", where), where + ".m"),
        integer(field(spec, "n", where), where + ".n"), number(range[0], where + ".range[0]"),
        number(range[1], where + ".range[1]"), field(spec, "seed", where).get<std::uint64_t>()));
  }
  throw ConfigError(where + ".type: unknown operator type '" + type + "'");
}

Parametrization build_param(const json& spec) {
  const std::string where = "param";
  const std::string type = type_of(spec, where);
  if (type == "constant") return Parametrization::constant(number(field(spec, "lambda", where), where + ".lambda"));
  if (type == "inverse_time_zeta") return Parametrization::inverse_time_zeta();
  if (type == "power_alpha") return Parametrization::power_alpha(number(field(spec, "alpha", where), where + ".alpha"));
  if (type == "table") {
    const Vec t = vector_of(field(spec, "t", where), where + ".t");
    const Vec l = vector_of(field(spec, "lambda", where), where + ".lambda");
    return Parametrization::table(std::vector<double>(t.begin(), t.end()), std::vector<double>(l.begin(), l.end()));
  }
  throw ConfigError(where + ".type: unknown parametrization '" + type + "'");
}

StepSequence build_steps(const json& spec) {
  const std::string where = "steps";
  const std::string type = type_of(spec, where);
  if (type == "explicit") {
    const Vec v = vector_of(field(spec, "lambdas", where), where + ".lambdas");
    return StepSequence(std::vector<double>(v.begin(), v.end()));
  }
  const int n = integer(field(spec, "N", where), where + ".N");
  if (n < 1) throw ConfigError(where + ".N: must be >= 1");
  if (type == "constant") return StepSequence::constant(number(field(spec, "lambda", where), where + ".lambda"), n);
  if (type == "harmonic") return StepSequence::harmonic(n);
  if (type == "inverse_sqrt") return StepSequence::inverse_sqrt(n);
  throw ConfigError(where + ".type: unknown step sequence '" + type + "'");
}

VerifySettings build_settings(const json& spec) {
  VerifySettings s;
  if (spec.is_null()) return s;
  if (!spec.is_object()) throw ConfigError("settings: expected an object");
  const auto num = [&](const char* key, double& dst) {
    if (spec.contains(key)) dst = number(spec.at(key), std::string("settings.") + key);
  };
  const auto integ = [&](const char* key, int& dst) {
    if (spec.contains(key)) dst = integer(spec.at(key), std::string("settings.") + key);
  };
  num("ode_tol", s.ode_tol);
  num("vlambda_tol", s.vlambda_tol);
  num("quad_tol", s.quad_tol);
  num("base_budget", s.base_budget);
  num("decay_factor", s.decay_factor);
  integ("samples", s.samples);
  integ("kobayashi_pairs", s.kobayashi_pairs);
  integ("kobayashi_max_len", s.kobayashi_max_len);
  if (spec.contains("vlambda_grid")) {
    const Vec g = vector_of(spec.at("vlambda_grid"), "settings.vlambda_grid");
    s.vlambda_grid.assign(g.begin(), g.end());
  }
  if (spec.contains("accretivity_lambdas")) {
    const Vec g = vector_of(spec.at("accretivity_lambdas"), "settings.accretivity_lambdas");
    s.accretivity_lambdas.assign(g.begin(), g.end());
  }
  return s;
}

std::vector<CheckId> build_check_list(const json& spec) {
  if (spec.is_null() || (spec.is_string() && spec.get<std::string>() == "all")) {
    const auto all = all_checks();
    return {all.begin(), all.end()};
  }
  if (!spec.is_array()) throw ConfigError("checks: expected \"all\" or an array of check ids");
  std::vector<CheckId> out;
  for (const auto& c : spec) {
    if (!c.is_string()) throw ConfigError("checks: expected strings");
    try {
      out.push_back(parse_check_id(c.get<std::string>()));
    } catch (const InputError& e) {
      throw ConfigError(std::string("checks: ") + e.what());
    }
  }
  return out;
}

Scenario build_scenario(const json& spec, const std::filesystem::path& base_dir) {
  Scenario s(spec.value("name", std::string("scenario")), build_operator(field(spec, "operator", "scenario"), base_dir));
  if (spec.contains("T")) s.T = number(spec.at("T"), "T");
  if (spec.contains("N")) s.N = integer(spec.at("N"), "N");
  if (spec.contains("param")) s.param = build_param(spec.at("param"));
  if (spec.contains("param2")) s.param2 = build_param(spec.at("param2"));
  if (spec.contains("steps")) s.steps = build_steps(spec.at("steps"));
  if (spec.contains("seed")) s.seed = spec.at("seed").get<std::uint64_t>();
  if (spec.contains("starts")) {
    const json& st = spec.at("starts");
    if (!st.is_array()) throw ConfigError("starts: expected an array of vectors");
    for (std::size_t i = 0; i < st.size(); ++i) s.starts.push_back(vector_of(st[i], "starts[" + std::to_string(i) + "]"));
  }
  return s;
}

}  // namespace nexlab::cli
