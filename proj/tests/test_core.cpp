#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "nexlab/cli/config.hpp"
#include "nexlab/core/error.hpp"
#include "nexlab/core/operator.hpp"

using namespace nexlab;

namespace {

Vec vec(std::initializer_list<double> v) {
  Vec x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) x[i++] = d;
  return x;
}

std::vector<OperatorInstance> builtins() {
  Mat contraction(2, 2);
  contraction << 0.5, -0.5, 0.25, 0.25;
  return {
      OperatorInstance::translation(vec({1.0, -2.0})),
      OperatorInstance::rotation(std::numbers::pi / 6),
      OperatorInstance::affine(contraction, vec({0.3, -0.7})),
      OperatorInstance::identity(3),
      OperatorInstance::shapley(cli::matching_pennies_game()),
      OperatorInstance::shapley(random_game(3, 2, 2, -1, 1, 7)),
  };
}

}  // namespace

TEST_CASE("norms") {
  CHECK(norm(vec({3, -4}), NormKind::sup) == 4.0);
  CHECK(norm(vec({3, -4}), NormKind::euclidean) == 5.0);
  CHECK(norm(vec({0, 0, 0}), NormKind::sup) == 0.0);
  CHECK_THROWS_AS(norm(vec({1, std::numeric_limits<double>::quiet_NaN()}), NormKind::sup), InputError);
}

TEST_CASE("apply_J on each variant") {
  CHECK(apply_J(OperatorInstance::translation(vec({1})), vec({0}))[0] == 1.0);
  const Vec r = apply_J(OperatorInstance::rotation(std::numbers::pi / 2), vec({1, 0}));
  CHECK(r[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(r[1] == doctest::Approx(1.0));
  CHECK(apply_J(OperatorInstance::shapley(cli::matching_pennies_game()), vec({0}))[0] == doctest::Approx(0.0));
  CHECK_THROWS_AS(apply_J(OperatorInstance::translation(vec({1})), vec({0, 0})), InputError);
}

TEST_CASE("apply_A") {
  CHECK(apply_A(OperatorInstance::translation(vec({1})), vec({5}))[0] == -1.0);
  CHECK(apply_A(OperatorInstance::identity(2), vec({3, 4})).isZero());
  const Vec a = apply_A(OperatorInstance::rotation(std::numbers::pi / 2), vec({1, 0}));
  CHECK(a[0] == doctest::Approx(1.0));
  CHECK(a[1] == doctest::Approx(-1.0));
}

TEST_CASE("apply_Phi closed forms") {
  const Vec c = vec({2, -1});
  const Vec x = vec({0.5, 3});
  for (double l : {1.0, 0.7, 0.2, 1e-3}) {
    const Vec expected = (1.0 - l) * x + l * c;
    CHECK((apply_Phi(OperatorInstance::translation(c), l, x) - expected).lpNorm<Eigen::Infinity>() < 1e-12);
    const auto rot = OperatorInstance::rotation(0.4);
    Mat R(2, 2);
    R << std::cos(0.4), -std::sin(0.4), std::sin(0.4), std::cos(0.4);
    CHECK((apply_Phi(rot, l, x) - (1.0 - l) * R * x).norm() < 1e-12);
  }
  for (const auto& op : builtins()) {
    const Vec z = Vec::Constant(op.dim(), 0.3);
    CHECK((apply_Phi(op, 1.0, z) - apply_J(op, Vec::Zero(op.dim()))).isZero());
  }
  CHECK_THROWS_AS(apply_Phi(OperatorInstance::identity(1), 0.0, vec({1})), InputError);
  CHECK_THROWS_AS(apply_Phi(OperatorInstance::identity(1), 1.5, vec({1})), InputError);
}

TEST_CASE("A + J reproduces x") {
  SplitMix64 rng(3);
  for (const auto& op : builtins()) {
    for (int i = 0; i < 50; ++i) {
      const Vec x = sample_ball(rng, op.dim(), 10.0, op.norm_kind());
      CHECK((apply_A(op, x) + apply_J(op, x) - x).lpNorm<Eigen::Infinity>() <= 1e-12 * (1 + x.lpNorm<Eigen::Infinity>()));
    }
  }
}

TEST_CASE("constructors enforce nonexpansiveness") {
  Mat big(2, 2);
  big << 1.0, 0.5, 0.0, 1.0;  // row sum 1.5
  CHECK_THROWS_AS(OperatorInstance::affine(big, vec({0, 0})), InputError);
  Mat skew(2, 2);
  skew << 1.0, 0.1, 0.0, 1.0;
  CHECK_THROWS_AS(OperatorInstance::linear_isometry(skew), InputError);
  // reflections are orthogonal too
  Mat refl(2, 2);
  refl << 1.0, 0.0, 0.0, -1.0;
  CHECK_NOTHROW(OperatorInstance::linear_isometry(refl));
}

TEST_CASE("operator_norm matches an SVD and row sums") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    Mat m(3, 3);
    for (Eigen::Index i = 0; i < 9; ++i) m(i / 3, i % 3) = rng.uniform(-1, 1);
    const double svd = Eigen::JacobiSVD<Mat>(m).singularValues()(0);
    CHECK(operator_norm(m, NormKind::euclidean) == doctest::Approx(svd).epsilon(1e-9));
    double rows = 0.0;
    for (int i = 0; i < 3; ++i) rows = std::max(rows, std::abs(m(i, 0)) + std::abs(m(i, 1)) + std::abs(m(i, 2)));
    CHECK(operator_norm(m, NormKind::sup) == doctest::Approx(rows));
  }
}

TEST_CASE("sampled nonexpansiveness of the built-ins") {
  for (const auto& op : builtins()) {
    const PropertyReport r = check_nonexpansive(op, 1000, 10.0, 42);
    CAPTURE(op.describe());
    CHECK(r.violations == 0);
    CHECK(r.worst_ratio <= 1.0 + 1e-12);
    CHECK(std::isfinite(r.worst_ratio));
  }
  const PropertyReport t = check_nonexpansive(OperatorInstance::translation(vec({4})), 200, 10.0, 1);
  CHECK(t.worst_ratio == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Phi(lambda, .) contracts by 1 - lambda") {
  SplitMix64 rng(5);
  for (const auto& op : builtins()) {
    for (double l : {0.9, 0.5, 0.1, 0.01}) {
      for (int i = 0; i < 200; ++i) {
        const Vec x = sample_ball(rng, op.dim(), 10.0, op.norm_kind());
        const Vec y = sample_ball(rng, op.dim(), 10.0, op.norm_kind());
        const double d = op.norm(x - y);
        if (d < 1e-9) continue;
        const double ratio = op.norm(apply_Phi(op, l, x) - apply_Phi(op, l, y)) / d;
        CHECK(ratio <= (1.0 - l) + 1e-12 + 1e-9 / d);
      }
    }
  }
}

TEST_CASE("accretivity of the built-ins") {
  for (const auto& op : builtins()) {
    for (double l : {0.1, 0.5, 1.0, 2.0}) {
      const PropertyReport r = check_accretive(op, l, 500, 9);
      CAPTURE(op.describe());
      CAPTURE(l);
      CHECK(r.violations == 0);
    }
  }
  const PropertyReport t = check_accretive(OperatorInstance::translation(vec({1})), 1.0, 100, 1);
  CHECK(t.worst_ratio == doctest::Approx(1.0));
  CHECK(check_accretive(OperatorInstance::rotation(std::numbers::pi / 6), 0.5, 1000, 2).violations == 0);
}

TEST_CASE("hypothesis H constants per variant") {
  CHECK(hypothesis_H_constant(OperatorInstance::translation(vec({1, -3}))) == 3.0);
  CHECK(hypothesis_H_constant(OperatorInstance::rotation(1.0)) == 0.0);
  CHECK(hypothesis_H_constant(OperatorInstance::shapley(cli::matching_pennies_game())) == 1.0);
}

TEST_CASE("sample_ball stays in the ball and is deterministic") {
  for (NormKind k : {NormKind::sup, NormKind::euclidean}) {
    SplitMix64 a(77), b(77);
    for (int i = 0; i < 200; ++i) {
      const Vec x = sample_ball(a, 4, 2.5, k);
      CHECK(norm(x, k) <= 2.5);
      CHECK(x == sample_ball(b, 4, 2.5, k));
    }
  }
}
