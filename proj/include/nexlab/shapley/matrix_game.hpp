#pragma once

#include "nexlab/core/vec.hpp"

namespace nexlab {

/// Value and optimal mixed strategies of the zero-sum matrix game in which the
/// row player maximizes p^T M q.
struct MatrixGameSolution {
  double value = 0.0;
  Vec row_strategy;
  Vec col_strategy;
  // max_i (M q)_i - min_j (p^T M)_j, evaluated on the returned strategies.
  double duality_gap = 0.0;
};

/// Solves the game by the simplex method on
///   max sum(y)  s.t.  (M + k) y <= 1, y >= 0,
/// with k shifting every entry to at least 1. A pure saddle point short-cuts
/// the LP. Throws InternalError if the certified gap exceeds 1e-9.
MatrixGameSolution matrix_game_value(const Mat& payoff);

inline constexpr double kMatrixGameGapTol = 1e-9;

}  // namespace nexlab
