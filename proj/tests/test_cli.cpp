#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nexlab/cli/config.hpp"
#include "nexlab/cli/presets.hpp"
#include "nexlab/cli/run.hpp"
#include "nexlab/shapley/game.hpp"

using namespace nexlab;
using namespace nexlab::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("nexlab_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

int invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "nexlab");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return main_entry(static_cast<int>(argv.size()), argv.data());
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("overrides") {
  json doc{{"N", 10}, {"operator", {{"type", "translation"}, {"c", {1.0}}}}};
  apply_override(doc, "N=250");
  apply_override(doc, "operator.c=[3, 4]");
  apply_override(doc, "name=plain text");
  apply_override(doc, "settings.ode_tol=1e-9");
  CHECK(doc.at("N") == 250);
  CHECK(doc.at("operator").at("c") == json::array({3, 4}));
  CHECK(doc.at("name") == "plain text");
  CHECK(doc.at("settings").at("ode_tol") == 1e-9);
  CHECK_THROWS_AS(apply_override(doc, "no-equals"), ConfigError);
  CHECK_THROWS_AS(apply_override(doc, "=5"), ConfigError);
  CHECK_THROWS_AS(apply_override(doc, "a..b=1"), ConfigError);
  CHECK_THROWS_AS(apply_override(doc, "N.x=1"), ConfigError);
}

TEST_CASE("config builders") {
  CHECK(parse_task("verify") == Task::verify);
  CHECK_THROWS_AS(parse_task("bogus"), ConfigError);
  CHECK_THROWS_AS(build_operator(json{{"type", "warp"}}, {}), ConfigError);
  CHECK_THROWS_AS(build_operator(json{{"type", "translation"}}, {}), ConfigError);
  CHECK(build_operator(json{{"type", "identity"}, {"dim", 3}}, {}).dim() == 3);
  CHECK(build_operator(json{{"type", "rotation"}, {"degrees", 90.0}}, {}).dim() == 2);
  CHECK_THROWS_AS(build_param(json{{"type", "constant"}}), ConfigError);
  CHECK(param_lambda(build_param(json{{"type", "power_alpha"}, {"alpha", 0.5}}), 3.0) == doctest::Approx(0.5));
  CHECK(build_steps(json{{"type", "explicit"}, {"lambdas", {0.5, 0.25}}}).sigma(2) == 0.75);
  CHECK_THROWS_AS(build_steps(json{{"type", "harmonic"}, {"N", 0}}), ConfigError);
  CHECK(build_check_list(json("all")).size() == 23);
  CHECK(build_check_list(json::array({"expo", "convvn"})) == std::vector<CheckId>{CheckId::expo, CheckId::convvn});
  CHECK_THROWS_AS(build_check_list(json::array({"expo", "nope"})), ConfigError);
  CHECK(build_settings(json{{"samples", 50}}).samples == 50);
  CHECK_THROWS_AS(build_settings(json{{"ode_tol", "tight"}}), ConfigError);
  const Scenario s = build_scenario(json{{"name", "s"}, {"operator", {{"type", "matching_pennies"}}}, {"T", 3.0}, {"seed", 9}}, {});
  CHECK(s.name == "s");
  CHECK(*s.T == 3.0);
  CHECK(s.seed == 9);
  CHECK_THROWS_AS(preset("nope"), ConfigError);
  for (const auto& n : preset_names()) {
    const json p = preset(n);
    CHECK(p.at("preset") == n);
    CHECK(p.at("preset_version") == kPresetVersion);
  }
}

TEST_CASE("value_iter and discounted outputs") {
  const fs::path out = scratch("vi");
  ExperimentConfig c;
  c.task = Task::value_iter;
  c.doc = preset("translation");
  c.out_dir = out;
  const RunOutcome r = run(c);
  CHECK(r.exit_code == 0);
  auto rows = read_csv(out / "value_iter.csv");
  REQUIRE(rows.size() == 51);
  CHECK(rows[0] == std::vector<std::string>{"n", "v1", "norm"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::stoi(rows[i][0]) == static_cast<int>(i));
    CHECK(std::stod(rows[i][1]) == 1.0);
  }
  CHECK(fs::exists(out / "config.json"));
  CHECK(json::parse(slurp(out / "config.json")).at("task") == "value_iter");

  c.task = Task::discounted;
  c.doc = preset("matching-pennies");
  run(c);
  rows = read_csv(out / "discounted.csv");
  CHECK(rows[0] == std::vector<std::string>{"lambda", "v1", "certified_error", "iterations"});
  REQUIRE(rows.size() == 4);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::abs(std::stod(rows[i][1])) <= 1e-10);
}

TEST_CASE("trajectory outputs") {
  const fs::path out = scratch("traj");
  ExperimentConfig c;
  c.out_dir = out;
  c.doc = preset("translation");
  c.task = Task::euler;
  run(c);
  auto rows = read_csv(out / "euler.csv");
  REQUIRE(rows.size() == 102);
  CHECK(rows[0] == std::vector<std::string>{"n", "sigma", "tau", "x1"});
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][3]) == doctest::Approx(std::stod(rows[i][1])));

  c.task = Task::ode;
  run(c);
  rows = read_csv(out / "ode.csv");
  REQUIRE(rows.size() == 102);
  CHECK(rows[0] == std::vector<std::string>{"t", "x1", "err_bound"});
  CHECK(std::stod(rows.back()[0]) == 100.0);
  CHECK(std::stod(rows.back()[1]) == doctest::Approx(100.0).epsilon(1e-10));

  c.task = Task::phi_ode;
  apply_override(c.doc, R"(param={"type":"constant","lambda":0.5})");
  run(c);
  rows = read_csv(out / "phi_ode.csv");
  CHECK(rows[0].back() == "lambda");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double t = std::stod(rows[i][0]);
    CHECK(std::stod(rows[i][1]) == doctest::Approx(1.0 - std::exp(-0.5 * t)).epsilon(1e-8));
  }
}

TEST_CASE("generate_game") {
  const fs::path a = scratch("gen_a"), b = scratch("gen_b");
  CHECK(invoke({"generate_game", "--preset", "random3", "--out", a.string()}) == 0);
  CHECK(invoke({"generate_game", "--preset", "random3", "--out", b.string()}) == 0);
  CHECK(slurp(a / "game.json") == slurp(b / "game.json"));
  const StochasticGame g = load_game(a / "game.json");
  CHECK(g.num_states() == 3);
  CHECK(game_to_json(g).dump(2) + "\n" == slurp(a / "game.json"));

  // one state, one action each, payoff fixed at 5: J(f) = 5 + f
  CHECK(invoke({"generate_game", "--config", (a / "config.json").string(), "--set", "game.states=1", "--set",
                "game.m=1", "--set", "game.n=1", "--set", "game.range=[5,5]", "--set", "game.file=one.json", "--out",
                b.string()}) == 0);
  const auto op = OperatorInstance::shapley(load_game(b / "one.json"));
  Vec f(1);
  f << -2.0;
  CHECK(apply_J(op, f)[0] == doctest::Approx(3.0));

  // the generated file is usable as an operator
  write(a / "cfg.json", R"({"operator": {"type": "game", "path": "game.json"}, "N": 20})");
  CHECK(invoke({"value_iter", "--config", (a / "cfg.json").string(), "--out", (a / "vi").string()}) == 0);
  CHECK(read_csv(a / "vi" / "value_iter.csv").size() == 21);
}

TEST_CASE("exit codes") {
  const fs::path d = scratch("exit");
  CHECK(invoke({"bogus", "--preset", "translation", "--out", d.string()}) == 2);
  CHECK(invoke({"value_iter", "--preset", "translation"}) == 2);
  CHECK(invoke({"value_iter", "--preset", "nope", "--out", d.string()}) == 2);
  CHECK(invoke({"value_iter", "--preset", "translation", "--set", "oops", "--out", d.string()}) == 2);
  write(d / "a.json", "{}");
  CHECK(invoke({"value_iter", "--preset", "translation", "--config", (d / "a.json").string(), "--out", d.string()}) == 2);
  write(d / "broken.json", "{ not json");
  CHECK(invoke({"value_iter", "--config", (d / "broken.json").string(), "--out", d.string()}) == 2);

  write(d / "bad_game.json",
        R"({"states":["s"],"actions":[[1,1]],"payoff":[[[0]]],"transition":[[[[0.9]]]]})");
  write(d / "schema.json", R"({"operator": {"type": "game", "path": "bad_game.json"}})");
  CHECK(invoke({"value_iter", "--config", (d / "schema.json").string(), "--out", d.string()}) == 3);

  CHECK(invoke({"phi_ode", "--preset", "translation", "--set", R"(param={"type":"constant","lambda":2})", "--out",
                d.string()}) == 4);

  write(d / "io.json", R"({"operator": {"type": "game", "path": "missing.json"}})");
  CHECK(invoke({"value_iter", "--config", (d / "io.json").string(), "--out", d.string()}) == 6);
  CHECK(invoke({"value_iter", "--config", (d / "absent.json").string(), "--out", d.string()}) == 6);

  CHECK(invoke({"discounted", "--preset", "translation", "--set", "lambdas=[1e-8]", "--out", d.string()}) == 8);

  CHECK(invoke({"verify", "--preset", "random3", "--set", R"(checks=["wn_tracks_vn"])", "--out", d.string()}) == 0);
  CHECK(invoke({"verify", "--preset", "random3", "--set", R"(checks=["wn_tracks_vn"])", "--set",
                "settings.decay_factor=1e-30", "--out", d.string()}) == 1);
  const json reps = json::parse(slurp(d / "reports.json"));
  bool any_fail = false;
  for (const auto& r : reps) any_fail = any_fail || r.at("verdict") == "fail";
  CHECK(any_fail);
}

TEST_CASE("suite output is deterministic") {
  const fs::path a = scratch("suite_a"), b = scratch("suite_b");
  const std::string checks = R"(checks=["norm_bounds","convvn","expo","convboth","vlambda_lipschitz"])";
  CHECK(invoke({"suite", "--preset", "paper-suite", "--set", checks, "--out", a.string()}) == 0);
  CHECK(invoke({"suite", "--preset", "paper-suite", "--set", checks, "--out", b.string()}) == 0);
  CHECK(slurp(a / "reports.json") == slurp(b / "reports.json"));
  CHECK(slurp(a / "reports.csv") == slurp(b / "reports.csv"));
  const json reps = json::parse(slurp(a / "reports.json"));
  std::set<std::string> scenarios;
  for (const auto& r : reps) scenarios.insert(r.at("context").at("scenario").get<std::string>());
  CHECK(scenarios == std::set<std::string>{"translation", "rotation30", "matching-pennies", "random3"});
}
