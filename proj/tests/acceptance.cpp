// Usage: acceptance <path-to-nexlab> <scratch-dir>
// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "nexlab/bounds/checks.hpp"
#include "nexlab/cli/config.hpp"
#include "nexlab/cli/presets.hpp"
#include "nexlab/core/error.hpp"
#include "nexlab/shapley/game.hpp"
#include "nexlab/shapley/matrix_game.hpp"
#include "oracles.hpp"

using namespace nexlab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path g_tool;
fs::path g_scratch;

// Collects failures of one criterion.
struct Outcome {
  std::vector<std::string> failures;
  std::string note;

  void require(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

std::string num(double x) {
  std::ostringstream s;
  s.precision(4);
  s << x;
  return s.str();
}

Scenario preset_scenario(const std::string& name) {
  const json p = cli::preset(name);
  return cli::build_scenario(json{{"name", name}, {"operator", p.at("operator")}}, fs::current_path());
}

std::vector<BoundReport> checked(Outcome& o, CheckId id, const Scenario& s, const VerifySettings& cfg = {}) {
  std::vector<BoundReport> reps = verify(id, s, cfg);
  o.require(!reps.empty(), std::string(to_string(id)) + " on " + s.name + ": no reports");
  for (const auto& r : reps) {
    o.require(r.verdict == Verdict::pass, std::string(to_string(id)) + " on " + s.name + ": " +
                                              to_string(r.verdict) + " lhs=" + num(r.lhs) + " rhs=" + num(r.rhs) +
                                              " " + r.context.dump());
  }
  return reps;
}

int run_tool(const std::string& args, const fs::path& log) {
  const std::string cmd = "\"" + g_tool.string() + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
#ifdef WEXITSTATUS
  return WEXITSTATUS(status);
#else
  return status;
#endif
}

std::vector<std::vector<double>> read_numeric_csv(const fs::path& p) {
  std::ifstream f(p);
  std::string line;
  std::getline(f, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(f, line)) {
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

// ---------------------------------------------------------------------------

void closed_forms(Outcome& o) {
  const fs::path out = g_scratch / "c1";
  fs::create_directories(out);
  o.require(run_tool("value_iter --preset translation --set N=1000 --out \"" + out.string() + "\"", out / "vi.log") == 0,
            "value_iter exit status");
  const auto vi = read_numeric_csv(out / "value_iter.csv");
  o.require(vi.size() == 1000, "value_iter: expected 1000 rows");
  for (const auto& r : vi) o.require(r.at(1) == 1.0, "v_n != c at n = " + num(r.at(0)));

  o.require(run_tool("discounted --preset translation --out \"" + out.string() + "\"", out / "d.log") == 0,
            "discounted exit status");
  const auto d = read_numeric_csv(out / "discounted.csv");
  std::vector<double> lambdas;
  for (const auto& r : d) {
    lambdas.push_back(r.at(0));
    o.require(std::abs(r.at(1) - 1.0) <= 1e-9, "v_lambda off by " + num(r.at(1) - 1.0) + " at lambda " + num(r.at(0)));
  }
  o.require(lambdas == std::vector<double>{1.0, 0.5, 0.1, 1e-3}, "discounted: unexpected lambda grid");

  o.require(run_tool("ode --preset translation --set T=100 --out \"" + out.string() + "\"", out / "o.log") == 0,
            "ode exit status");
  const auto u = read_numeric_csv(out / "ode.csv");
  o.require(!u.empty() && u.back().at(0) == 100.0, "ode: last sample is not t = 100");
  double worst = 0.0;
  for (const auto& r : u) worst = std::max(worst, std::abs(r.at(1) - r.at(0)));
  o.require(worst <= 1e-9, "U(t) - (U0 + ct) = " + num(worst));
  o.note = "max |U(t) - (U0 + ct)| = " + num(worst);
}

void exponential_formula(Outcome& o) {
  for (const char* name : {"rotation30", "random3"}) {
    const auto reps = checked(o, CheckId::expo, preset_scenario(name));
    o.require(reps.size() == 4, std::string("expo on ") + name + ": expected 4 values of m");
    for (std::size_t i = 1; i < reps.size(); ++i) {
      o.require(reps[i].lhs < reps[i - 1].lhs, std::string("expo on ") + name + ": error does not decrease at m = " +
                                                   reps[i].context.at("m").dump());
    }
    o.note += std::string(name) + " m=1600 gap " + num(reps.back().lhs) + "; ";
  }
}

void chernoff_convvn(Outcome& o) {
  const Scenario s = preset_scenario("random3");
  const auto c = checked(o, CheckId::chernoff, s);
  const auto v = checked(o, CheckId::convvn, s);
  o.require(v.size() == 3, "convvn: expected n in {10, 100, 1000}");
  o.note = "chernoff worst slack " + num(c.front().slack);
}

void kobayashi(Outcome& o) {
  for (const char* name : {"rotation30", "random3"}) {
    const auto r = checked(o, CheckId::kobayashi, preset_scenario(name));
    o.require(r.front().tol_budget == 1e-9, "kobayashi: budget is not 1e-9");
    o.require(r.front().context.at("pairs") == 100, "kobayashi: expected 100 pairs");
  }
}

void euler_and_interpolation(Outcome& o) {
  const Scenario s = preset_scenario("random3");
  checked(o, CheckId::euler_vs_ode, s);
  const auto reps = checked(o, CheckId::interpolation, s);
  int mono = 0;
  for (const auto& r : reps) {
    if (r.context.value("kind", "") == "refinement_monotonicity") {
      ++mono;
      o.require(r.context.at("caps").size() == 4, "interpolation: expected three refinements");
    }
  }
  o.require(mono == 2, "interpolation: expected monotonicity reports for harmonic and inverse_sqrt");
}

void constant_parametrization(Outcome& o) {
  for (const char* name : {"random3", "matching-pennies"}) {
    const auto reps = checked(o, CheckId::constant_decay, preset_scenario(name));
    double g0 = -1.0, g20 = -1.0, budget20 = 0.0;
    std::vector<double> ts;
    for (const auto& r : reps) {
      if (r.context.at("quantity") != "gap") continue;
      const double lam = r.context.at("lambda"), t = r.context.at("t");
      if (lam == 0.5) {
        ts.push_back(t);
        if (t == 0.0) g0 = r.lhs;
        if (t == 20.0) g20 = r.lhs, budget20 = r.tol_budget;
      }
    }
    o.require(ts == std::vector<double>{0.0, 1.0, 5.0, 10.0, 20.0}, "constant_decay: unexpected checkpoints");
    o.require(g0 > 0.0 && g20 >= 0.0, "constant_decay: missing gaps");
    o.require(g20 <= 0.01 * g0 + budget20, std::string(name) + ": gap(20) = " + num(g20) + " > 0.01 gap(0) = " +
                                               num(0.01 * g0));
    o.note += std::string(name) + " gap(20)/gap(0) = " + num(g20 / g0) + "; ";
  }
}

// slow_param at t = 10, 100, 1000 and the decay of its gap between the ends.
void slow_tracking(Outcome& o, const char* name) {
  Scenario s = preset_scenario(name);
  s.param = Parametrization::power_alpha(0.5);
  const auto reps = checked(o, CheckId::slow_param, s);
  o.require(reps.size() == 3 && reps.front().context.at("t") == 10.0 && reps.back().context.at("t") == 1000.0,
            "slow_param: expected t in {10, 100, 1000}");
  if (reps.size() != 3) return;
  const double first = reps.front().lhs, last = reps.back().lhs;
  o.require(last <= 0.2 * first + reps.back().tol_budget + 0.2 * reps.front().tol_budget,
            std::string(name) + ": gap(1000) = " + num(last) + " > 0.2 gap(10) = " + num(0.2 * first));
  o.note += std::string(name) + " gap(10) " + num(first) + " gap(1000) " + num(last) + "; ";
}

void slow_parametrization(Outcome& o) {
  slow_tracking(o, "matching-pennies");
  slow_tracking(o, "random3");
}

void discrete_slow(Outcome& o) {
  const Scenario s = preset_scenario("random3");
  const auto d = checked(o, CheckId::discrete_slow, s);
  const auto& cps = d.front().context.at("checkpoints");
  o.require(cps.front() == 100.0 && cps.back() == 10000.0, "discrete_slow: expected checkpoints 100 and 10^4");
  checked(o, CheckId::vlambda_lipschitz, s);
  o.require(VerifySettings{}.vlambda_grid.size() == 10, "vlambda_lipschitz: expected a 10-point grid");
  o.note = "gaps " + d.front().context.at("gaps").dump();
}

void alpha_dichotomy(Outcome& o) {
  const auto w = checked(o, CheckId::wn_tracks_vn, preset_scenario("random3"));
  const auto& cps = w.front().context.at("checkpoints");
  o.require(cps.front() == 10.0 && cps.back() == 1000.0, "wn_tracks_vn: expected checkpoints 10 and 10^3");
  slow_tracking(o, "random3");
}

void property_suites(Outcome& o) {
  const std::vector<std::string> names{"translation", "rotation30", "matching-pennies", "random3"};
  for (const auto& n : names) {
    const Scenario s = preset_scenario(n);
    const PropertyReport ne = check_nonexpansive(s.op, 1000, 10.0, 11);
    o.require(ne.violations == 0, n + ": nonexpansiveness violated");
    for (double l : {0.1, 0.5, 1.0, 2.0}) {
      o.require(check_accretive(s.op, l, 1000, 12).violations == 0, n + ": accretivity violated at lambda " + num(l));
    }
    checked(o, CheckId::hypothesis_H, s);
  }

  for (const auto& n : {"matching-pennies", "random3"}) {
    const Scenario s = preset_scenario(n);
    SplitMix64 rng(13);
    int bad = 0;
    for (int i = 0; i < 1000; ++i) {
      const Vec x = sample_ball(rng, s.op.dim(), 5.0, NormKind::sup);
      Vec bump(s.op.dim());
      for (Eigen::Index k = 0; k < bump.size(); ++k) bump[k] = rng.uniform();
      const double c = rng.uniform(-3.0, 3.0);
      const Vec jx = apply_J(s.op, x);
      if ((apply_J(s.op, x + bump).array() < jx.array() - 1e-12).any()) ++bad;
      if ((apply_J(s.op, x + Vec::Constant(s.op.dim(), c)) - (jx.array() + c).matrix()).lpNorm<Eigen::Infinity>() > 1e-12) ++bad;
    }
    o.require(bad == 0, std::string(n) + ": monotonicity or constant additivity violated " + std::to_string(bad) + " times");
  }

  SplitMix64 rng(2024);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    Mat m(2, 2);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-1.0, 1.0);
    const double v = matrix_game_value(m).value;
    const auto [lo, hi] = oracle::grid_bracket(m, 2000);
    worst = std::max({worst, std::abs(v - lo), std::abs(v - hi)});
    o.require(v >= lo - 1e-12 && v <= hi + 1e-12, "2x2 value outside the grid bracket");
  }
  for (int k = 0; k < 20; ++k) {
    Mat m(3, 3);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-1.0, 1.0);
    worst = std::max(worst, std::abs(matrix_game_value(m).value - oracle::value_vertex_enumeration(m)));
  }
  o.require(worst <= 1e-3, "LP disagrees with the oracles by " + num(worst));
  o.note = "LP vs oracle worst " + num(worst);
}

void determinism(Outcome& o) {
  const fs::path a = g_scratch / "suite_a", b = g_scratch / "suite_b";
  fs::create_directories(a);
  fs::create_directories(b);
  const int ea = run_tool("suite --preset paper-suite --out \"" + a.string() + "\"", g_scratch / "suite_a.log");
  const int eb = run_tool("suite --preset paper-suite --out \"" + b.string() + "\"", g_scratch / "suite_b.log");
  o.require(ea == 0 && eb == 0, "exit status " + std::to_string(ea) + ", " + std::to_string(eb));
  for (const char* f : {"reports.json", "reports.csv"}) {
    o.require(fs::exists(a / f) && slurp(a / f) == slurp(b / f), std::string(f) + " differs between runs");
  }
  if (fs::exists(a / "reports.json")) o.note = std::to_string(json::parse(slurp(a / "reports.json")).size()) + " reports";
}

struct Criterion {
  int id;
  const char* title;
  double limit_seconds;  // 0 means unlimited
  std::function<void(Outcome&)> body;
};

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: acceptance <nexlab> <scratch-dir>\n";
    return 2;
  }
  g_tool = fs::absolute(argv[1]);
  g_scratch = fs::absolute(argv[2]);
  fs::remove_all(g_scratch);
  fs::create_directories(g_scratch);

  const std::vector<Criterion> criteria{
      {1, "closed forms on the translation preset", 1.0, closed_forms},
      {2, "exponential formula", 10.0, exponential_formula},
      {3, "Chernoff estimate and U(n)/n vs v_n", 30.0, chernoff_convvn},
      {4, "Kobayashi inequality", 30.0, kobayashi},
      {5, "Euler vs continuous and interpolation", 0.0, euler_and_interpolation},
      {6, "constant parametrization", 0.0, constant_parametrization},
      {7, "slow parametrization", 120.0, slow_parametrization},
      {8, "discrete slow variation and v_lambda Lipschitz bound", 120.0, discrete_slow},
      {9, "alpha-family dichotomy", 0.0, alpha_dichotomy},
      {10, "property suites", 0.0, property_suites},
      {11, "determinism of paper-suite", 0.0, determinism},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_seconds > 0.0 && secs > c.limit_seconds) {
      o.failures.push_back("runtime " + num(secs) + " s exceeds " + num(c.limit_seconds) + " s");
    }
    const bool ok = o.failures.empty();
    failed += ok ? 0 : 1;
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " (" << num(secs) << " s)";
    if (ok && !o.note.empty()) std::cout << " " << o.note;
    std::cout << "\n";
    for (std::size_t i = 0; i < o.failures.size() && i < 10; ++i) std::cout << "    " << o.failures[i] << "\n";
    std::cout.flush();
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << "\n";
  return failed == 0 ? 0 : 1;
}
