#include "nexlab/cli/run.hpp"

#include <CLI11.hpp>
#include <iostream>

#include "nexlab/bounds/report_io.hpp"
#include "nexlab/cli/presets.hpp"
#include "nexlab/continuous/integrator.hpp"
#include "nexlab/discrete/schemes.hpp"

namespace nexlab::cli {

using nlohmann::json;
namespace fs = std::filesystem;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config: return 2;
    case ErrorKind::schema: return 3;
    case ErrorKind::input: return 4;
    case ErrorKind::resource: return 5;
    case ErrorKind::io: return 6;
    case ErrorKind::internal: return 7;
    case ErrorKind::diagnostics: return 8;
  }
  return 7;
}

namespace {

class Csv {
 public:
  explicit Csv(const std::vector<std::string>& header) { line(header); }

  void row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_double(v));
    line(cells);
  }
  const std::string& text() const { return text_; }

 private:
  void line(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) text_ += ',';
      text_ += csv_field(cells[i]);
    }
    text_ += '\n';
  }
  std::string text_;
};

std::vector<std::string> coord_names(const char* prefix, int dim) {
  std::vector<std::string> out;
  for (int i = 1; i <= dim; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

void append(std::vector<double>& row, const Vec& x) { row.insert(row.end(), x.begin(), x.end()); }

double num_or(const json& doc, const char* key, double fallback) {
  if (!doc.contains(key)) return fallback;
  if (!doc.at(key).is_number()) throw ConfigError(std::string(key) + ": expected a number");
  return doc.at(key).get<double>();
}

int int_or(const json& doc, const char* key, int fallback) {
  if (!doc.contains(key)) return fallback;
  if (!doc.at(key).is_number_integer()) throw ConfigError(std::string(key) + ": expected an integer");
  return doc.at(key).get<int>();
}

Vec start_or_zero(const json& doc, const OperatorInstance& op) {
  if (!doc.contains("x0")) return Vec::Zero(op.dim());
  const json& v = doc.at("x0");
  if (!v.is_array() || static_cast<int>(v.size()) != op.dim()) {
    throw ConfigError("x0: expected an array of " + std::to_string(op.dim()) + " numbers");
  }
  Vec x(op.dim());
  for (int i = 0; i < op.dim(); ++i) {
    if (!v[static_cast<std::size_t>(i)].is_number()) throw ConfigError("x0[" + std::to_string(i) + "]: expected a number");
    x[i] = v[static_cast<std::size_t>(i)].get<double>();
  }
  return x;
}

const json& operator_spec(const json& doc) {
  if (!doc.contains("operator")) throw ConfigError("operator: missing");
  return doc.at("operator");
}

class Writer {
 public:
  explicit Writer(const fs::path& dir) : dir_(dir) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_)) throw IoError("cannot create output directory '" + dir_.string() + "'");
  }
  void put(const std::string& name, const std::string& content) {
    write_file_atomic(dir_ / name, content);
    files.push_back(dir_ / name);
  }
  std::vector<fs::path> files;

 private:
  fs::path dir_;
};

RunOutcome task_value_iter(const ExperimentConfig& c, Writer& w) {
  const OperatorInstance op = build_operator(operator_spec(c.doc), c.base_dir);
  const int N = int_or(c.doc, "N", 100);
  if (N < 1) throw ConfigError("N: must be >= 1");
  const ValueIteration vi = iterate_Vn(op, N);
  Csv csv(concat(concat({"n"}, coord_names("v", op.dim())), {"norm"}));
  for (int n = 1; n <= N; ++n) {
    std::vector<double> row{static_cast<double>(n)};
    append(row, vi.v[static_cast<std::size_t>(n)]);
    row.push_back(op.norm(vi.v[static_cast<std::size_t>(n)]));
    csv.row(row);
  }
  w.put("value_iter.csv", csv.text());
  return {kExitOk, {}, "value_iter: " + std::to_string(N) + " rows"};
}

RunOutcome task_discounted(const ExperimentConfig& c, Writer& w) {
  const OperatorInstance op = build_operator(operator_spec(c.doc), c.base_dir);
  std::vector<double> lambdas{0.5, 0.1, 0.01};
  if (c.doc.contains("lambdas")) {
    const json& l = c.doc.at("lambdas");
    if (!l.is_array() || l.empty()) throw ConfigError("lambdas: expected a non-empty array");
    lambdas.clear();
    for (const auto& v : l) {
      if (!v.is_number()) throw ConfigError("lambdas: expected numbers");
      lambdas.push_back(v.get<double>());
    }
  }
  const double tol = num_or(c.doc, "vlambda_tol", 1e-10);
  Csv csv(concat(concat({"lambda"}, coord_names("v", op.dim())), {"certified_error", "iterations"}));
  for (double l : lambdas) {
    const DiscountedValue d = solve_vlambda(op, l, tol);
    std::vector<double> row{l};
    append(row, d.v);
    row.push_back(d.certified_error);
    row.push_back(static_cast<double>(d.iterations));
    csv.row(row);
  }
  w.put("discounted.csv", csv.text());
  return {kExitOk, {}, "discounted: " + std::to_string(lambdas.size()) + " rows"};
}

RunOutcome task_euler(const ExperimentConfig& c, Writer& w) {
  const OperatorInstance op = build_operator(operator_spec(c.doc), c.base_dir);
  const StepSequence steps = c.doc.contains("steps") ? build_steps(c.doc.at("steps")) : StepSequence::harmonic(100);
  const DiscreteOrbit orbit = euler_scheme(op, start_or_zero(c.doc, op), steps);
  Csv csv(concat({"n", "sigma", "tau"}, coord_names("x", op.dim())));
  for (int n = 0; n <= steps.size(); ++n) {
    std::vector<double> row{static_cast<double>(n), steps.sigma(n), steps.tau(n)};
    append(row, orbit.points[static_cast<std::size_t>(n)]);
    csv.row(row);
  }
  w.put("euler.csv", csv.text());
  return {kExitOk, {}, "euler: " + std::to_string(steps.size()) + " steps"};
}

RunOutcome task_ode(const ExperimentConfig& c, Writer& w, bool phi) {
  const OperatorInstance op = build_operator(operator_spec(c.doc), c.base_dir);
  const double T = num_or(c.doc, "T", 10.0);
  const double tol = num_or(c.doc, "tol", 1e-8);
  const int samples = int_or(c.doc, "samples", 101);
  if (samples < 2) throw ConfigError("samples: must be >= 2");
  IntegratorOptions o;
  o.sample_times = make_sample_grid(T, samples);
  const Vec x0 = start_or_zero(c.doc, op);
  std::optional<Parametrization> param;
  Trajectory tr;
  if (phi) {
    param = c.doc.contains("param") ? build_param(c.doc.at("param")) : Parametrization::power_alpha(0.5);
    tr = integrate_u(op, *param, x0, T, tol, o);
  } else {
    tr = integrate_U(op, x0, T, tol, o);
  }
  std::vector<std::string> header = concat(concat({"t"}, coord_names("x", op.dim())), {"err_bound"});
  if (phi) header.push_back("lambda");
  Csv csv(header);
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    std::vector<double> row{tr.times[i]};
    append(row, tr.points[i]);
    row.push_back(tr.err_bound[i]);
    if (phi) row.push_back(param_lambda(*param, tr.times[i]));
    csv.row(row);
  }
  const char* name = phi ? "phi_ode" : "ode";
  w.put(std::string(name) + ".csv", csv.text());
  return {kExitOk, {}, std::string(name) + ": " + std::to_string(tr.times.size()) + " samples, max err_bound " +
                           format_double(tr.max_err())};
}

std::vector<std::string> formats_of(const json& doc) {
  if (!doc.contains("formats")) return {"json", "csv"};
  std::vector<std::string> out;
  for (const auto& f : doc.at("formats")) {
    const std::string s = f.is_string() ? f.get<std::string>() : "";
    if (s != "json" && s != "csv") throw ConfigError("formats: expected \"json\" and/or \"csv\"");
    out.push_back(s);
  }
  return out;
}

RunOutcome task_reports(const ExperimentConfig& c, Writer& w, bool suite) {
  std::vector<json> specs;
  if (suite && c.doc.contains("scenarios")) {
    const json& sc = c.doc.at("scenarios");
    if (!sc.is_array() || sc.empty()) throw ConfigError("scenarios: expected a non-empty array");
    specs.assign(sc.begin(), sc.end());
  } else {
    json spec{{"name", c.doc.value("name", std::string("scenario"))}, {"operator", operator_spec(c.doc)}};
    if (c.doc.contains("verify")) spec.update(c.doc.at("verify"));
    specs.push_back(spec);
  }
  const VerifySettings settings = build_settings(c.doc.contains("settings") ? c.doc.at("settings") : json());
  const std::vector<CheckId> checks = build_check_list(c.doc.contains("checks") ? c.doc.at("checks") : json());

  std::vector<BoundReport> reports;
  for (const json& spec : specs) {
    const Scenario s = build_scenario(spec, c.base_dir);
    for (CheckId id : checks) {
      for (auto& r : verify(id, s, settings)) reports.push_back(std::move(r));
    }
  }
  for (const auto& f : formats_of(c.doc)) {
    if (f == "json") w.put("reports.json", reports_to_json_text(reports));
    else w.put("reports.csv", reports_to_csv(reports));
  }
  int failed = 0, skipped = 0;
  for (const auto& r : reports) {
    failed += r.verdict == Verdict::fail;
    skipped += r.verdict == Verdict::skipped;
  }
  RunOutcome out;
  out.exit_code = failed ? kExitChecksFailed : kExitOk;
  out.summary = std::string(suite ? "suite" : "verify") + ": " + std::to_string(reports.size()) + " reports, " +
                std::to_string(failed) + " failed, " + std::to_string(skipped) + " skipped";
  return out;
}

RunOutcome task_generate_game(const ExperimentConfig& c, Writer& w) {
  if (!c.doc.contains("game")) throw ConfigError("game: missing random-game spec");
  json spec = c.doc.at("game");
  spec["type"] = "random_game";
  const OperatorInstance op = build_operator(spec, c.base_dir);
  const auto& game = *std::get<ShapleyOperator>(op.variant()).game;
  const std::string file = c.doc.at("game").value("file", std::string("game.json"));
  w.put(file, game_to_json(game).dump(2) + "\n");
  return {kExitOk, {}, "generate_game: " + std::to_string(game.num_states()) + " states"};
}

}  // namespace

RunOutcome run(const ExperimentConfig& config) {
  Writer w(config.out_dir);
  RunOutcome out;
  try {
    switch (config.task) {
      case Task::value_iter: out = task_value_iter(config, w); break;
      case Task::discounted: out = task_discounted(config, w); break;
      case Task::euler: out = task_euler(config, w); break;
      case Task::ode: out = task_ode(config, w, false); break;
      case Task::phi_ode: out = task_ode(config, w, true); break;
      case Task::verify: out = task_reports(config, w, false); break;
      case Task::suite: out = task_reports(config, w, true); break;
      case Task::generate_game: out = task_generate_game(config, w); break;
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  json resolved = config.doc;
  resolved["task"] = to_string(config.task);
  w.put("config.json", resolved.dump(2) + "\n");
  out.files = w.files;
  return out;
}

int main_entry(int argc, char** argv) {
  CLI::App app{"nexlab: dynamics of nonexpansive operators"};
  std::string task, config_path, preset_name, out_dir;
  std::vector<std::string> sets;
  app.add_option("task", task, "value_iter | discounted | euler | ode | phi_ode | verify | suite | generate_game")
      ->required();
  auto* cfg = app.add_option("--config", config_path, "JSON config file");
  auto* pre = app.add_option("--preset", preset_name, "translation | rotation30 | matching-pennies | random3 | paper-suite");
  cfg->excludes(pre);
  app.add_option("--set", sets, "override a config key, e.g. --set N=1000 or --set settings.ode_tol=1e-9");
  app.add_option("--out", out_dir, "output directory")->required();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_code_for(ErrorKind::config);
  }

  try {
    ExperimentConfig c;
    c.task = parse_task(task);
    c.out_dir = out_dir;
    if (!config_path.empty()) {
      c.doc = load_config_file(config_path);
      c.base_dir = fs::path(config_path).parent_path();
    } else if (!preset_name.empty()) {
      c.doc = preset(preset_name);
      c.base_dir = fs::current_path();
    }
    for (const auto& s : sets) apply_override(c.doc, s);
    const RunOutcome out = run(c);
    std::cout << out.summary << "\n";
    for (const auto& f : out.files) std::cout << "  wrote " << f.string() << "\n";
    return out.exit_code;
  } catch (const Error& e) {
    std::cerr << "nexlab: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "nexlab: internal-error: " << e.what() << "\n";
    return exit_code_for(ErrorKind::internal);
  }
}

}  // namespace nexlab::cli
