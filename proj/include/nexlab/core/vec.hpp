#pragma once

#include <Eigen/Dense>
#include <string>
#include <string_view>

#include "nexlab/core/rng.hpp"

namespace nexlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class NormKind { sup, euclidean };

std::string_view to_string(NormKind kind) noexcept;
NormKind parse_norm_kind(std::string_view name);

/// max|x_i| or the Euclidean length. Throws InputError on a non-finite entry.
double norm(const Vec& x, NormKind kind);

bool all_finite(const Vec& x) noexcept;

/// Uniform sample from the closed ball of the given radius in the given norm.
Vec sample_ball(SplitMix64& rng, Eigen::Index dim, double radius, NormKind kind);

}  // namespace nexlab
