#pragma once

#include <span>
#include <vector>

namespace nexlab {

/// Steps lambda_1..lambda_N in (0, 1] with the running sums
/// sigma_n = sum_{i<=n} lambda_i and tau_n = sum_{i<=n} lambda_i^2
/// (index 0 holds the empty sums).
class StepSequence {
 public:
  StepSequence() : sigma_{0.0}, tau_{0.0} {}
  explicit StepSequence(std::vector<double> steps);

  static StepSequence constant(double lambda, int n);
  /// lambda_i = min(cap, 1/i).
  static StepSequence harmonic(int n, double cap = 1.0);
  /// lambda_i = min(cap, i^{-1/2}).
  static StepSequence inverse_sqrt(int n, double cap = 1.0);
  /// Takes leading steps of `base(i)` until their sum reaches `total`, the last
  /// step shortened so that sigma_N == total exactly.
  template <class F>
  static StepSequence covering(double total, F base, int max_steps);

  int size() const { return static_cast<int>(steps_.size()); }
  std::span<const double> steps() const { return steps_; }
  /// 1-based step lambda_i.
  double step(int i) const { return steps_[static_cast<std::size_t>(i - 1)]; }
  double sigma(int n) const { return sigma_[static_cast<std::size_t>(n)]; }
  double tau(int n) const { return tau_[static_cast<std::size_t>(n)]; }
  std::span<const double> sigmas() const { return sigma_; }
  double max_step() const;

 private:
  std::vector<double> steps_;
  std::vector<double> sigma_;
  std::vector<double> tau_;
};

StepSequence covering_steps(double total, std::vector<double> candidate);

template <class F>
StepSequence StepSequence::covering(double total, F base, int max_steps) {
  std::vector<double> out;
  double acc = 0.0;
  for (int i = 1; i <= max_steps && acc < total; ++i) {
    const double s = base(i);
    out.push_back(s);
    acc += s;
  }
  return covering_steps(total, std::move(out));
}

}  // namespace nexlab
