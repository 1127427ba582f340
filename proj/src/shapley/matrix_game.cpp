#include "nexlab/shapley/matrix_game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "nexlab/core/error.hpp"

namespace nexlab {
namespace {

constexpr double kPivotEps = 1e-12;
constexpr double kClampTol = 1e-12;

// Clamps slightly negative LP slack to zero and renormalizes.
Vec to_probability(Vec x) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] < 0.0) {
      if (x[i] < -kClampTol) throw InternalError("matrix game: negative strategy weight");
      x[i] = 0.0;
    }
  }
  const double s = x.sum();
  if (!(s > 0.0)) throw InternalError("matrix game: empty strategy");
  return x / s;
}

bool pure_saddle(const Mat& m, MatrixGameSolution& out) {
  Eigen::Index best_row = 0;
  double maximin = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double row_min = m.row(i).minCoeff();
    if (row_min > maximin) {
      maximin = row_min;
      best_row = i;
    }
  }
  Eigen::Index best_col = 0;
  double minimax = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const double col_max = m.col(j).maxCoeff();
    if (col_max < minimax) {
      minimax = col_max;
      best_col = j;
    }
  }
  if (maximin != minimax) return false;
  out.value = maximin;
  out.row_strategy = Vec::Zero(m.rows());
  out.row_strategy[best_row] = 1.0;
  out.col_strategy = Vec::Zero(m.cols());
  out.col_strategy[best_col] = 1.0;
  out.duality_gap = 0.0;
  return true;
}

// Dense tableau simplex with Bland's rule. Rows 0..m-1 are constraints,
// row m is the objective (reduced costs of "minimize -sum y").
void solve_lp(const Mat& shifted, Vec& y, Vec& x) {
  const Eigen::Index rows = shifted.rows();
  const Eigen::Index cols = shifted.cols();
  const Eigen::Index width = cols + rows + 1;
  Mat tab = Mat::Zero(rows + 1, width);
  tab.topLeftCorner(rows, cols) = shifted;
  tab.block(0, cols, rows, rows).setIdentity();
  tab.col(width - 1).head(rows).setOnes();
  tab.row(rows).head(cols).setConstant(-1.0);

  std::vector<Eigen::Index> basis(static_cast<std::size_t>(rows));
  for (Eigen::Index i = 0; i < rows; ++i) basis[static_cast<std::size_t>(i)] = cols + i;

  const long max_pivots = 50 * (rows + cols) + 1000;
  for (long pivots = 0;; ++pivots) {
    if (pivots > max_pivots) throw InternalError("matrix game: simplex did not terminate");
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < width - 1; ++j) {
      if (tab(rows, j) < -kPivotEps) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;

    Eigen::Index leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double a = tab(i, enter);
      if (a <= kPivotEps) continue;
      const double ratio = tab(i, width - 1) / a;
      if (ratio < best_ratio ||
          (ratio == best_ratio && basis[static_cast<std::size_t>(i)] <
                                      basis[static_cast<std::size_t>(leave)])) {
        best_ratio = ratio;
        leave = i;
      }
    }
    // Bounded: the shifted matrix is entrywise >= 1.
    if (leave < 0) throw InternalError("matrix game: unbounded LP");

    tab.row(leave) /= tab(leave, enter);
    for (Eigen::Index i = 0; i <= rows; ++i) {
      if (i == leave) continue;
      const double f = tab(i, enter);
      if (f != 0.0) tab.row(i) -= f * tab.row(leave);
    }
    basis[static_cast<std::size_t>(leave)] = enter;
  }

  y = Vec::Zero(cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Eigen::Index b = basis[static_cast<std::size_t>(i)];
    if (b < cols) y[b] = tab(i, width - 1);
  }
  // Dual prices sit under the slack columns of the objective row.
  x = tab.row(rows).segment(cols, rows).transpose();
}

}  // namespace

MatrixGameSolution matrix_game_value(const Mat& payoff) {
  if (payoff.size() == 0) throw InputError("matrix game: empty payoff matrix");
  if (!payoff.allFinite()) throw InputError("matrix game: non-finite payoff entry");

  MatrixGameSolution sol;
  if (pure_saddle(payoff, sol)) return sol;

  const double shift = 1.0 - payoff.minCoeff();
  const Mat shifted = payoff.array() + shift;
  Vec y, x;
  solve_lp(shifted, y, x);
  const double ysum = y.sum();
  if (!(ysum > 0.0)) throw InternalError("matrix game: degenerate LP solution");

  sol.value = 1.0 / ysum - shift;
  sol.row_strategy = to_probability(x);
  sol.col_strategy = to_probability(y);
  const double lower = (sol.row_strategy.transpose() * payoff).minCoeff();
  const double upper = (payoff * sol.col_strategy).maxCoeff();
  sol.duality_gap = upper - lower;
  const double scale = std::max(1.0, payoff.cwiseAbs().maxCoeff());
  if (!(sol.duality_gap <= kMatrixGameGapTol * scale) || sol.value < lower - kMatrixGameGapTol * scale ||
      sol.value > upper + kMatrixGameGapTol * scale) {
    throw InternalError("matrix game: primal-dual gap " + message_number(sol.duality_gap) +
                        " exceeds tolerance");
  }
  return sol;
}

}  // namespace nexlab
