#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nexlab/core/vec.hpp"

namespace nexlab {

/// Finite zero-sum stochastic game. For state w with action counts (m, n),
/// payoff[w] is m x n and transition[w] is (m*n) x |states| with row i*n + j
/// holding the distribution of the next state after actions (i, j).
struct StochasticGame {
  std::vector<std::string> states;
  std::vector<std::pair<int, int>> actions;
  std::vector<Mat> payoff;
  std::vector<Mat> transition;

  int num_states() const { return static_cast<int>(states.size()); }
};

/// Throws SchemaError naming the offending location. Rows are accepted within
/// `row_tol` of summing to one.
void validate_game(const StochasticGame& game, double row_tol = 1e-12);

/// Parses the JSON game document; transition rows within 1e-9 of summing to one
/// are renormalized.
StochasticGame parse_game(const nlohmann::json& doc);
StochasticGame parse_game_text(const std::string& text);
StochasticGame load_game(const std::filesystem::path& path);

nlohmann::json game_to_json(const StochasticGame& game);

/// Payoffs uniform in [lo, hi]; each transition row is a normalized vector of
/// uniform (0, 1] weights. Deterministic per seed.
StochasticGame random_game(int num_states, int m, int n, double lo, double hi, std::uint64_t seed);

/// J(f)(w) = value of the matrix game g(., ., w) + sum_w' f(w') rho(w' | ., ., w).
Vec shapley_apply(const StochasticGame& game, const Vec& f);

/// The constant C of the lambda-Lipschitz condition on Phi: max |g|.
double hypothesis_H_constant(const StochasticGame& game);

}  // namespace nexlab
