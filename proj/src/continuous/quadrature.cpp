#include "nexlab/continuous/quadrature.hpp"

#include <cmath>
#include <sstream>

#include "nexlab/core/error.hpp"

namespace nexlab {
namespace {

struct Simpson {
  const std::function<double(double)>& f;
  double err = 0.0;

  double eval(double x) const {
    const double y = f(x);
    if (!std::isfinite(y)) {
      std::ostringstream msg;
      msg << "quadrature: non-finite integrand at " << x;
      throw InputError(msg.str());
    }
    return y;
  }

  double recurse(double a, double b, double fa, double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = eval(lm), frm = eval(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
      err += std::abs(delta) / 15.0;
      return left + right + delta / 15.0;
    }
    return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
  }
};

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                                  int max_depth) {
  if (a == b) return {};
  Simpson s{f};
  const double m = 0.5 * (a + b);
  const double fa = s.eval(a), fb = s.eval(b), fm = s.eval(m);
  // Split once up front so a coincidentally flat three-point estimate is never accepted.
  const double flm = s.eval(0.5 * (a + m)), frm = s.eval(0.5 * (m + b));
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double v = s.recurse(a, m, fa, flm, fm, left, 0.5 * tol, max_depth) +
                   s.recurse(m, b, fm, frm, fb, right, 0.5 * tol, max_depth);
  return {v, s.err};
}

}  // namespace nexlab
