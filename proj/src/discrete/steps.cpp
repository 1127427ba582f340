#include "nexlab/discrete/steps.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nexlab/core/error.hpp"

namespace nexlab {

StepSequence::StepSequence(std::vector<double> steps) : steps_(std::move(steps)) {
  sigma_.reserve(steps_.size() + 1);
  tau_.reserve(steps_.size() + 1);
  sigma_.push_back(0.0);
  tau_.push_back(0.0);
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    const double s = steps_[i];
    if (!(s > 0.0 && s <= 1.0)) {
      throw InputError("step sequence: lambda_" + std::to_string(i + 1) + " = " + message_number(s) +
                       " outside (0, 1]");
    }
    sigma_.push_back(sigma_.back() + s);
    tau_.push_back(tau_.back() + s * s);
  }
}

StepSequence StepSequence::constant(double lambda, int n) {
  return StepSequence(std::vector<double>(static_cast<std::size_t>(std::max(n, 0)), lambda));
}

StepSequence StepSequence::harmonic(int n, double cap) {
  std::vector<double> s;
  s.reserve(static_cast<std::size_t>(std::max(n, 0)));
  for (int i = 1; i <= n; ++i) s.push_back(std::min(cap, 1.0 / i));
  return StepSequence(std::move(s));
}

StepSequence StepSequence::inverse_sqrt(int n, double cap) {
  std::vector<double> s;
  s.reserve(static_cast<std::size_t>(std::max(n, 0)));
  for (int i = 1; i <= n; ++i) s.push_back(std::min(cap, 1.0 / std::sqrt(static_cast<double>(i))));
  return StepSequence(std::move(s));
}

double StepSequence::max_step() const {
  return steps_.empty() ? 0.0 : *std::max_element(steps_.begin(), steps_.end());
}

StepSequence covering_steps(double total, std::vector<double> candidate) {
  double acc = 0.0;
  std::size_t k = 0;
  for (; k < candidate.size(); ++k) {
    if (acc + candidate[k] >= total) break;
    acc += candidate[k];
  }
  if (k == candidate.size()) throw InputError("covering steps: candidate sequence too short to reach the horizon");
  candidate.resize(k + 1);
  candidate[k] = total - acc;
  if (!(candidate[k] > 0.0)) candidate.pop_back();
  return StepSequence(std::move(candidate));
}

}  // namespace nexlab
