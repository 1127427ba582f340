#include "nexlab/core/operator.hpp"

#include <cmath>
#include <sstream>

#include "nexlab/core/error.hpp"
#include "nexlab/core/rng.hpp"

namespace nexlab {
namespace {

constexpr double kNormSlack = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_dim(const OperatorInstance& op, const Vec& x, const char* what) {
  if (x.size() != op.dim()) {
    throw InputError(std::string(what) + ": vector has dimension " + std::to_string(x.size()) +
                     ", operator has dimension " + std::to_string(op.dim()));
  }
}

void require_finite(const Vec& v, const char* what) {
  if (!v.allFinite()) throw InputError(std::string(what) + ": non-finite entry");
}

void require_finite(const Mat& m, const char* what) {
  if (!m.allFinite()) throw InputError(std::string(what) + ": non-finite entry");
}

}  // namespace

double operator_norm(const Mat& matrix, NormKind norm) {
  if (norm == NormKind::sup) return matrix.cwiseAbs().rowwise().sum().maxCoeff();
  // Power iteration on M^T M from a fixed pseudo-random start.
  const Mat gram = matrix.transpose() * matrix;
  SplitMix64 rng(0x5eed);
  Vec v(gram.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.uniform(0.5, 1.5);
  v.normalize();
  double estimate = 0.0;
  for (int it = 0; it < 200; ++it) {
    Vec w = gram * v;
    const double len = w.norm();
    if (len == 0.0) return 0.0;
    const double next = v.dot(w);
    v = w / len;
    if (std::abs(next - estimate) <= 1e-12 * std::max(1.0, next)) {
      estimate = next;
      break;
    }
    estimate = next;
  }
  return std::sqrt(std::max(0.0, estimate));
}

OperatorInstance OperatorInstance::translation(Vec c, NormKind norm) {
  if (c.size() < 1) throw InputError("translation: empty offset");
  require_finite(c, "translation offset");
  const int d = static_cast<int>(c.size());
  return OperatorInstance(Translation{std::move(c)}, norm, d);
}

OperatorInstance OperatorInstance::linear_isometry(Mat matrix, NormKind norm) {
  if (matrix.rows() < 1 || matrix.rows() != matrix.cols()) throw InputError("linear isometry: matrix must be square");
  require_finite(matrix, "linear isometry matrix");
  const Eigen::Index d = matrix.rows();
  const double orth = (matrix.transpose() * matrix - Mat::Identity(d, d)).cwiseAbs().maxCoeff();
  if (orth > 1e-12 * static_cast<double>(d)) throw InputError("linear isometry: matrix is not orthogonal");
  if (operator_norm(matrix, norm) > 1.0 + kNormSlack) {
    throw InputError("linear isometry: matrix is not nonexpansive in the " + std::string(to_string(norm)) + " norm");
  }
  return OperatorInstance(LinearIsometry{std::move(matrix)}, norm, static_cast<int>(d));
}

OperatorInstance OperatorInstance::rotation(double radians) {
  Mat r(2, 2);
  r << std::cos(radians), -std::sin(radians), std::sin(radians), std::cos(radians);
  return linear_isometry(std::move(r), NormKind::euclidean);
}

OperatorInstance OperatorInstance::affine(Mat matrix, Vec offset, NormKind norm) {
  if (matrix.rows() < 1 || matrix.rows() != matrix.cols()) throw InputError("affine: matrix must be square");
  if (offset.size() != matrix.rows()) throw InputError("affine: offset dimension does not match matrix");
  require_finite(matrix, "affine matrix");
  require_finite(offset, "affine offset");
  const double mnorm = operator_norm(matrix, norm);
  if (mnorm > 1.0 + kNormSlack) {
    std::ostringstream os;
    os << "affine: operator norm " << mnorm << " exceeds 1 in the " << to_string(norm) << " norm";
    throw InputError(os.str());
  }
  const int d = static_cast<int>(matrix.rows());
  return OperatorInstance(AffineNonexpansive{std::move(matrix), std::move(offset)}, norm, d);
}

OperatorInstance OperatorInstance::identity(int dim, NormKind norm) {
  if (dim < 1) throw InputError("identity: dimension must be positive");
  return affine(Mat::Identity(dim, dim), Vec::Zero(dim), norm);
}

OperatorInstance OperatorInstance::shapley(StochasticGame game) {
  validate_game(game);
  const int d = game.num_states();
  return OperatorInstance(ShapleyOperator{std::make_shared<const StochasticGame>(std::move(game))}, NormKind::sup, d);
}

std::string OperatorInstance::describe() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const Translation&) { os << "translation"; },
                 [&](const LinearIsometry&) { os << "linear_isometry"; },
                 [&](const AffineNonexpansive&) { os << "affine"; },
                 [&](const ShapleyOperator& s) { os << "shapley(" << s.game->num_states() << " states)"; },
             },
             variant_);
  os << " dim=" << dim_ << " norm=" << to_string(norm_);
  return os.str();
}

Vec apply_J(const OperatorInstance& op, const Vec& x) {
  require_dim(op, x, "apply_J");
  return std::visit(Overloaded{
                        [&](const Translation& t) -> Vec { return x + t.c; },
                        [&](const LinearIsometry& l) -> Vec { return l.matrix * x; },
                        [&](const AffineNonexpansive& a) -> Vec { return a.matrix * x + a.offset; },
                        [&](const ShapleyOperator& s) -> Vec { return shapley_apply(*s.game, x); },
                    },
                    op.variant());
}

Vec apply_A(const OperatorInstance& op, const Vec& x) { return x - apply_J(op, x); }

Vec apply_Phi(const OperatorInstance& op, double lambda, const Vec& x) {
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw InputError("apply_Phi: lambda = " + message_number(lambda) + " outside (0, 1]");
  }
  return lambda * apply_J(op, ((1.0 - lambda) / lambda) * x);
}

double hypothesis_H_constant(const OperatorInstance& op) {
  return std::visit(Overloaded{
                        [&](const Translation& t) { return op.norm(t.c); },
                        [&](const LinearIsometry&) { return 0.0; },
                        [&](const AffineNonexpansive& a) { return op.norm(a.offset); },
                        [&](const ShapleyOperator& s) { return hypothesis_H_constant(*s.game); },
                    },
                    op.variant());
}

PropertyReport check_nonexpansive(const OperatorInstance& op, int samples, double radius, std::uint64_t seed) {
  if (samples < 1) throw InputError("check_nonexpansive: samples must be >= 1");
  SplitMix64 rng(seed);
  PropertyReport rep{samples, 0, 0.0, seed};
  for (int s = 0; s < samples; ++s) {
    const Vec x = sample_ball(rng, op.dim(), radius, op.norm_kind());
    const Vec y = sample_ball(rng, op.dim(), radius, op.norm_kind());
    const double d = op.norm(x - y);
    if (d <= kMinPairDistance) continue;
    const double ratio = op.norm(apply_J(op, x) - apply_J(op, y)) / d;
    rep.worst_ratio = std::max(rep.worst_ratio, ratio);
    if (ratio > 1.0 + kRatioTol) ++rep.violations;
  }
  return rep;
}

PropertyReport check_accretive(const OperatorInstance& op, double lambda, int samples, std::uint64_t seed,
                               double radius) {
  if (!(lambda > 0.0)) throw InputError("check_accretive: lambda must be positive");
  if (samples < 1) throw InputError("check_accretive: samples must be >= 1");
  SplitMix64 rng(seed);
  PropertyReport rep{samples, 0, std::numeric_limits<double>::infinity(), seed};
  for (int s = 0; s < samples; ++s) {
    const Vec x = sample_ball(rng, op.dim(), radius, op.norm_kind());
    const Vec y = sample_ball(rng, op.dim(), radius, op.norm_kind());
    const double d = op.norm(x - y);
    if (d <= kMinPairDistance) continue;
    const double ratio = op.norm(x - y + lambda * (apply_A(op, x) - apply_A(op, y))) / d;
    rep.worst_ratio = std::min(rep.worst_ratio, ratio);
    if (ratio < 1.0 - kRatioTol) ++rep.violations;
  }
  return rep;
}

}  // namespace nexlab
