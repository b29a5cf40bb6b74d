#include "sphere_poisson/special.hpp"

#include <cmath>
#include <numbers>

#include "sphere_poisson/error.hpp"

namespace sphere_poisson {

double log_gamma(double x) {
  if (!(x > 0.0)) throw_invalid("log_gamma: argument must be positive");
  return std::lgamma(x);
}

double log_gamma_ratio(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0))
    throw_invalid("log_gamma_ratio: arguments must be positive");
  // For large arguments with a small offset the difference of two huge
  // lgamma values loses digits; use the Stirling series of the difference.
  const double delta = a - b;
  if (b > 1.0e4 && std::abs(delta) <= 8.0) {
    // log Gamma(b + delta) - log Gamma(b) via Stirling with 1/x^5 terms.
    auto stirling_tail = [](double x) {
      const double inv = 1.0 / x;
      const double inv2 = inv * inv;
      return inv * (1.0 / 12.0 -
                    inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0)));
    };
    const double log_part = (a - 0.5) * std::log1p(delta / b) + delta * std::log(b) - delta;
    return log_part + stirling_tail(a) - stirling_tail(b);
  }
  return std::lgamma(a) - std::lgamma(b);
}

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace sphere_poisson
