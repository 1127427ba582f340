#include "nexlab/shapley/game.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "nexlab/core/error.hpp"
#include "nexlab/core/rng.hpp"
#include "nexlab/shapley/matrix_game.hpp"

namespace nexlab {
namespace {

using nlohmann::json;

constexpr double kIngestRowTol = 1e-9;
// Rows already stochastic to rounding are kept verbatim so that a written game reloads bit-identically.
constexpr double kRenormalizeTol = 1e-14;

std::string loc(const std::string& field, std::initializer_list<std::size_t> idx) {
  std::ostringstream os;
  os << field;
  for (auto i : idx) os << '[' << i << ']';
  return os.str();
}

const json& require_field(const json& doc, const char* name) {
  if (!doc.is_object()) throw SchemaError("game document: expected an object at top level");
  auto it = doc.find(name);
  if (it == doc.end()) throw SchemaError(std::string("game document: missing field '") + name + "'");
  return *it;
}

const json& require_array(const json& node, const std::string& where, std::size_t size) {
  if (!node.is_array()) throw SchemaError(where + ": expected an array");
  if (node.size() != size) {
    throw SchemaError(where + ": expected " + std::to_string(size) + " entries, found " +
                      std::to_string(node.size()));
  }
  return node;
}

double require_number(const json& node, const std::string& where) {
  if (!node.is_number()) throw SchemaError(where + ": expected a number");
  const double v = node.get<double>();
  if (!std::isfinite(v)) throw SchemaError(where + ": non-finite number");
  return v;
}

int require_count(const json& node, const std::string& where) {
  if (!node.is_number_integer() && !node.is_number_unsigned()) {
    throw SchemaError(where + ": expected a positive integer");
  }
  const auto v = node.get<long long>();
  if (v < 1 || v > 1'000'000) throw SchemaError(where + ": expected a positive integer");
  return static_cast<int>(v);
}

}  // namespace

void validate_game(const StochasticGame& game, double row_tol) {
  const std::size_t k = game.states.size();
  if (k == 0) throw SchemaError("states: at least one state required");
  if (game.actions.size() != k || game.payoff.size() != k || game.transition.size() != k) {
    throw SchemaError("game: per-state arrays must have one entry per state");
  }
  for (std::size_t w = 0; w < k; ++w) {
    const auto [m, n] = game.actions[w];
    if (m < 1 || n < 1) throw SchemaError(loc("actions", {w}) + ": action counts must be positive");
    const Mat& g = game.payoff[w];
    if (g.rows() != m || g.cols() != n) throw SchemaError(loc("payoff", {w}) + ": shape mismatch");
    if (!g.allFinite()) throw SchemaError(loc("payoff", {w}) + ": non-finite entry");
    const Mat& t = game.transition[w];
    if (t.rows() != static_cast<Eigen::Index>(m) * n || t.cols() != static_cast<Eigen::Index>(k)) {
      throw SchemaError(loc("transition", {w}) + ": shape mismatch");
    }
    for (Eigen::Index r = 0; r < t.rows(); ++r) {
      const auto i = static_cast<std::size_t>(r / n), j = static_cast<std::size_t>(r % n);
      for (Eigen::Index c = 0; c < t.cols(); ++c) {
        const double p = t(r, c);
        if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
          throw SchemaError(loc("transition", {w, i, j, static_cast<std::size_t>(c)}) +
                            ": probability outside [0,1]");
        }
      }
      const double s = t.row(r).sum();
      if (std::abs(s - 1.0) > row_tol) {
        throw SchemaError(loc("transition", {w, i, j}) + ": row sums to " + message_number(s));
      }
    }
  }
}

StochasticGame parse_game(const json& doc) {
  StochasticGame game;
  const json& states = require_field(doc, "states");
  if (!states.is_array() || states.empty()) throw SchemaError("states: expected a non-empty array");
  for (std::size_t w = 0; w < states.size(); ++w) {
    if (!states[w].is_string()) throw SchemaError(loc("states", {w}) + ": expected a string");
    game.states.push_back(states[w].get<std::string>());
  }
  const std::size_t k = game.states.size();

  const json& actions = require_array(require_field(doc, "actions"), "actions", k);
  const json& payoff = require_array(require_field(doc, "payoff"), "payoff", k);
  const json& transition = require_array(require_field(doc, "transition"), "transition", k);

  for (std::size_t w = 0; w < k; ++w) {
    const json& a = require_array(actions[w], loc("actions", {w}), 2);
    const int m = require_count(a[0], loc("actions", {w, 0}));
    const int n = require_count(a[1], loc("actions", {w, 1}));
    game.actions.emplace_back(m, n);

    Mat g(m, n);
    const json& gm = require_array(payoff[w], loc("payoff", {w}), static_cast<std::size_t>(m));
    for (std::size_t i = 0; i < static_cast<std::size_t>(m); ++i) {
      const json& row = require_array(gm[i], loc("payoff", {w, i}), static_cast<std::size_t>(n));
      for (std::size_t j = 0; j < static_cast<std::size_t>(n); ++j) {
        g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            require_number(row[j], loc("payoff", {w, i, j}));
      }
    }
    game.payoff.push_back(std::move(g));

    Mat t(static_cast<Eigen::Index>(m) * n, static_cast<Eigen::Index>(k));
    const json& tm = require_array(transition[w], loc("transition", {w}), static_cast<std::size_t>(m));
    for (std::size_t i = 0; i < static_cast<std::size_t>(m); ++i) {
      const json& trow = require_array(tm[i], loc("transition", {w, i}), static_cast<std::size_t>(n));
      for (std::size_t j = 0; j < static_cast<std::size_t>(n); ++j) {
        const json& probs = require_array(trow[j], loc("transition", {w, i, j}), k);
        const auto r = static_cast<Eigen::Index>(i * static_cast<std::size_t>(n) + j);
        double sum = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
          const double p = require_number(probs[c], loc("transition", {w, i, j, c}));
          if (p < 0.0) throw SchemaError(loc("transition", {w, i, j, c}) + ": negative probability");
          if (p > 1.0 + kIngestRowTol) {
            throw SchemaError(loc("transition", {w, i, j, c}) + ": probability exceeds 1");
          }
          t(r, static_cast<Eigen::Index>(c)) = p;
          sum += p;
        }
        if (std::abs(sum - 1.0) > kIngestRowTol) {
          throw SchemaError(loc("transition", {w, i, j}) + ": row is not stochastic (sums to " +
                            message_number(sum) + ")");
        }
        if (std::abs(sum - 1.0) > kRenormalizeTol || t.row(r).maxCoeff() > 1.0) t.row(r) /= sum;
      }
    }
    game.transition.push_back(std::move(t));
  }
  validate_game(game);
  return game;
}

StochasticGame parse_game_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("game document: ") + e.what());
  }
  return parse_game(doc);
}

StochasticGame load_game(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open game file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_game_text(buf.str());
}

nlohmann::json game_to_json(const StochasticGame& game) {
  json doc;
  doc["states"] = game.states;
  json actions = json::array(), payoff = json::array(), transition = json::array();
  for (std::size_t w = 0; w < game.states.size(); ++w) {
    const auto [m, n] = game.actions[w];
    actions.push_back({m, n});
    json gm = json::array(), tm = json::array();
    for (int i = 0; i < m; ++i) {
      json grow = json::array(), trow = json::array();
      for (int j = 0; j < n; ++j) {
        grow.push_back(game.payoff[w](i, j));
        json probs = json::array();
        const Eigen::Index r = static_cast<Eigen::Index>(i) * n + j;
        for (Eigen::Index c = 0; c < game.transition[w].cols(); ++c) {
          probs.push_back(game.transition[w](r, c));
        }
        trow.push_back(std::move(probs));
      }
      gm.push_back(std::move(grow));
      tm.push_back(std::move(trow));
    }
    payoff.push_back(std::move(gm));
    transition.push_back(std::move(tm));
  }
  doc["actions"] = std::move(actions);
  doc["payoff"] = std::move(payoff);
  doc["transition"] = std::move(transition);
  return doc;
}

StochasticGame random_game(int num_states, int m, int n, double lo, double hi, std::uint64_t seed) {
  if (num_states < 1 || m < 1 || n < 1) throw InputError("random_game: sizes must be positive");
  if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw InputError("random_game: invalid payoff range");
  }
  SplitMix64 rng(seed);
  StochasticGame game;
  for (int w = 0; w < num_states; ++w) {
    game.states.push_back("s" + std::to_string(w));
    game.actions.emplace_back(m, n);
    Mat g(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = rng.uniform(lo, hi);
    game.payoff.push_back(std::move(g));
    Mat t(static_cast<Eigen::Index>(m) * n, num_states);
    for (Eigen::Index r = 0; r < t.rows(); ++r) {
      for (int c = 0; c < num_states; ++c) t(r, c) = rng.uniform_open_closed();
      t.row(r) /= t.row(r).sum();
    }
    game.transition.push_back(std::move(t));
  }
  validate_game(game);
  return game;
}

Vec shapley_apply(const StochasticGame& game, const Vec& f) {
  if (f.size() != game.num_states()) {
    throw InputError("shapley_apply: vector has dimension " + std::to_string(f.size()) + ", game has " +
                     std::to_string(game.num_states()) + " states");
  }
  Vec out(f.size());
  for (int w = 0; w < game.num_states(); ++w) {
    const auto [m, n] = game.actions[static_cast<std::size_t>(w)];
    const Vec expected = game.transition[static_cast<std::size_t>(w)] * f;
    Mat b = game.payoff[static_cast<std::size_t>(w)];
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) b(i, j) += expected[static_cast<Eigen::Index>(i) * n + j];
    out[w] = matrix_game_value(b).value;
  }
  return out;
}

double hypothesis_H_constant(const StochasticGame& game) {
  double c = 0.0;
  for (const Mat& g : game.payoff) c = std::max(c, g.cwiseAbs().maxCoeff());
  return c;
}

}  // namespace nexlab
