#include "nexlab/core/vec.hpp"

#include <cmath>

#include "nexlab/core/error.hpp"

namespace nexlab {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::input: return "input-error";
    case ErrorKind::schema: return "schema-error";
    case ErrorKind::internal: return "internal-error";
    case ErrorKind::resource: return "resource-error";
    case ErrorKind::diagnostics: return "diagnostics-error";
    case ErrorKind::io: return "io-error";
    case ErrorKind::config: return "config-error";
  }
  return "error";
}

std::string_view to_string(NormKind kind) noexcept {
  return kind == NormKind::sup ? "sup" : "euclidean";
}

NormKind parse_norm_kind(std::string_view name) {
  if (name == "sup") return NormKind::sup;
  if (name == "euclidean") return NormKind::euclidean;
  throw InputError("unknown norm kind '" + std::string(name) + "'");
}

bool all_finite(const Vec& x) noexcept { return x.allFinite(); }

double norm(const Vec& x, NormKind kind) {
  if (!x.allFinite()) throw InputError("norm of a vector with a non-finite entry");
  if (x.size() == 0) return 0.0;
  return kind == NormKind::sup ? x.cwiseAbs().maxCoeff() : x.norm();
}

Vec sample_ball(SplitMix64& rng, Eigen::Index dim, double radius, NormKind kind) {
  Vec x(dim);
  if (kind == NormKind::sup) {
    for (Eigen::Index i = 0; i < dim; ++i) x[i] = rng.uniform(-radius, radius);
    return x;
  }
  for (Eigen::Index i = 0; i < dim; ++i) x[i] = rng.normal();
  double len = x.norm();
  while (len == 0.0) {
    for (Eigen::Index i = 0; i < dim; ++i) x[i] = rng.normal();
    len = x.norm();
  }
  const double r = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(dim));
  return x * (r / len);
}

}  // namespace nexlab
