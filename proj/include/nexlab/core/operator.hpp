#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>

#include "nexlab/core/vec.hpp"
#include "nexlab/shapley/game.hpp"

namespace nexlab {

struct Translation {
  Vec c;
};
struct LinearIsometry {
  Mat matrix;
};
struct AffineNonexpansive {
  Mat matrix;
  Vec offset;
};
struct ShapleyOperator {
  std::shared_ptr<const StochasticGame> game;
};

/// A nonexpansive map J on (R^d, norm). Immutable; every constructor checks
/// that the map is nonexpansive in its declared norm.
class OperatorInstance {
 public:
  using Variant = std::variant<Translation, LinearIsometry, AffineNonexpansive, ShapleyOperator>;

  static OperatorInstance translation(Vec c, NormKind norm = NormKind::sup);
  static OperatorInstance linear_isometry(Mat matrix, NormKind norm = NormKind::euclidean);
  /// Planar rotation by `radians`, Euclidean norm.
  static OperatorInstance rotation(double radians);
  static OperatorInstance affine(Mat matrix, Vec offset, NormKind norm = NormKind::sup);
  static OperatorInstance identity(int dim, NormKind norm = NormKind::sup);
  static OperatorInstance shapley(StochasticGame game);

  int dim() const { return dim_; }
  NormKind norm_kind() const { return norm_; }
  const Variant& variant() const { return variant_; }
  double norm(const Vec& x) const { return nexlab::norm(x, norm_); }
  std::string describe() const;

 private:
  OperatorInstance(Variant v, NormKind norm, int dim) : variant_(std::move(v)), norm_(norm), dim_(dim) {}

  Variant variant_;
  NormKind norm_;
  int dim_;
};

Vec apply_J(const OperatorInstance& op, const Vec& x);
/// A = I - J.
Vec apply_A(const OperatorInstance& op, const Vec& x);
/// Phi(lambda, x) = lambda J((1 - lambda)/lambda x), lambda in (0, 1].
Vec apply_Phi(const OperatorInstance& op, double lambda, const Vec& x);

/// Induced operator norm of `matrix` in `norm`: max absolute row sum for sup,
/// largest singular value by power iteration for euclidean.
double operator_norm(const Mat& matrix, NormKind norm);

/// C with ||Phi(l,x) - Phi(m,x)|| <= |l - m| (C + ||x||):
/// max|g| for Shapley, ||c|| for translations, ||b|| for affine maps, 0 for
/// linear isometries.
double hypothesis_H_constant(const OperatorInstance& op);

struct PropertyReport {
  int samples = 0;
  int violations = 0;
  double worst_ratio = 0.0;
  std::uint64_t seed = 0;
};

inline constexpr double kRatioTol = 1e-12;
inline constexpr double kMinPairDistance = 1e-9;

/// worst_ratio = max ||J x - J y|| / ||x - y|| over pairs drawn in the ball.
PropertyReport check_nonexpansive(const OperatorInstance& op, int samples, double radius, std::uint64_t seed);

/// worst_ratio = min ||x - y + lambda (A x - A y)|| / ||x - y||.
PropertyReport check_accretive(const OperatorInstance& op, double lambda, int samples, std::uint64_t seed,
                               double radius = 10.0);

}  // namespace nexlab
