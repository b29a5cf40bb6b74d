#pragma once

namespace sphere_poisson {

// log Gamma(x) for x > 0.
double log_gamma(double x);

// log(Gamma(a) / Gamma(b)) for a, b > 0, without forming either gamma.
double log_gamma_ratio(double a, double b);

// Standard normal CDF, accurate in both tails.
double normal_cdf(double x);

// Standard normal density (2 pi)^{-1/2} exp(-x^2/2).
double normal_pdf(double x);

}  // namespace sphere_poisson
