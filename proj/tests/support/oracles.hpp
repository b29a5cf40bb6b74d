#pragma once

// Independent reference computations for the test suites. Nothing here
// calls into the library's numeric paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

// Adaptive Gauss-Kronrod (7/15) quadrature on [a, b].
class AdaptiveQuadrature {
 public:
  explicit AdaptiveQuadrature(double abs_tol = 1e-10, int max_depth = 40)
      : abs_tol_(abs_tol), max_depth_(max_depth) {}

  double operator()(const std::function<double(double)>& f, double a, double b) const {
    return recurse(f, a, b, abs_tol_, 0);
  }

 private:
  static void gk15(const std::function<double(double)>& f, double a, double b, double& kronrod,
                   double& error) {
    static constexpr double xgk[8] = {0.991455371120812639206854697526329,
                                      0.949107912342758524526189684047851,
                                      0.864864423359769072789712788640926,
                                      0.741531185599394439863864773280788,
                                      0.586087235467691130294144845693013,
                                      0.405845151377397166906606412076961,
                                      0.207784955007898467600689403773245,
                                      0.000000000000000000000000000000000};
    static constexpr double wgk[8] = {0.022935322010529224963732008058970,
                                      0.063092092629978553290700663189204,
                                      0.104790010322250183839876322541518,
                                      0.140653259715525918745189590510238,
                                      0.169004726639267902826583426598550,
                                      0.190350578064785409913256402421014,
                                      0.204432940075298892414161999234649,
                                      0.209482141084727828012999174891714};
    static constexpr double wg[4] = {0.129484966168869693270611432679082,
                                     0.279705391489276667901467771423780,
                                     0.381830050505118944950369775488975,
                                     0.417959183673469387755102040816327};
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double k = wgk[7] * fc;
    double g = wg[3] * fc;
    for (int i = 0; i < 7; ++i) {
      const double f1 = f(c - h * xgk[i]);
      const double f2 = f(c + h * xgk[i]);
      k += wgk[i] * (f1 + f2);
      if (i % 2 == 1) g += wg[i / 2] * (f1 + f2);
    }
    kronrod = k * h;
    error = std::abs((k - g) * h);
  }

  double recurse(const std::function<double(double)>& f, double a, double b, double tol,
                 int depth) const {
    double k = 0.0;
    double err = 0.0;
    gk15(f, a, b, k, err);
    if (err <= tol || depth >= max_depth_) return k;
    const double m = 0.5 * (a + b);
    return recurse(f, a, m, 0.5 * tol, depth + 1) + recurse(f, m, b, 0.5 * tol, depth + 1);
  }

  double abs_tol_;
  int max_depth_;
};

// Closed form of the single-point projection density in long double.
inline double single_point_density(double h, int d) {
  const long double dd = d;
  const long double q = static_cast<long double>(h) * h / dd;
  if (q >= 1.0L) return 0.0;
  const long double log_c = std::lgamma(dd / 2) - std::lgamma((dd - 1) / 2) -
                            0.5L * std::log(std::numbers::pi_v<long double> * dd);
  return static_cast<double>(std::exp(log_c + (dd - 3) / 2 * std::log1p(-q)));
}

// CDF of the single-point density by quadrature from the left edge.
inline double single_point_cdf(double t, int d) {
  const double r = std::sqrt(static_cast<double>(d));
  if (t <= -r) return 0.0;
  if (t >= r) return 1.0;
  AdaptiveQuadrature quad(1e-12);
  auto f = [d](double h) { return single_point_density(h, d); };
  return t <= 0 ? quad(f, -r, t) : 1.0 - quad(f, t, r);
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Sup distance between the empirical CDF of `values` and `cdf`.
template <class Cdf>
double ks_distance(std::vector<double> values, Cdf&& cdf) {
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = cdf(values[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

// KS distance between `values` and the single-point projection law in
// dimension d; the CDF is accumulated by quadrature between sorted values.
inline double ks_to_single_point_law(std::vector<double> values, int d) {
  std::sort(values.begin(), values.end());
  const double r = std::sqrt(static_cast<double>(d));
  AdaptiveQuadrature quad(1e-13);
  auto f = [d](double h) { return single_point_density(h, d); };
  const double n = static_cast<double>(values.size());
  double cdf = 0.0;
  double prev = -r;
  double dist = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = std::clamp(values[i], -r, r);
    if (v > prev) cdf += quad(f, prev, v);
    prev = std::max(prev, v);
    dist = std::max({dist, (i + 1) / n - cdf, cdf - i / n});
  }
  return dist;
}

// Explicit coordinates of cube vertex j: coordinate i is -1/sqrt(d) iff
// bit i of j is set.
inline std::vector<double> cube_vertex(int d, std::uint64_t j) {
  std::vector<double> x(static_cast<std::size_t>(d));
  const double c = 1.0 / std::sqrt(static_cast<double>(d));
  for (int i = 0; i < d; ++i) x[static_cast<std::size_t>(i)] = ((j >> i) & 1U) ? -c : c;
  return x;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

// m independent Pois(lambda) counts, sampled by sequential inversion.
inline std::map<std::int64_t, std::int64_t> synthetic_poisson_histogram(double lambda,
                                                                        std::int64_t m,
                                                                        std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::map<std::int64_t, std::int64_t> h;
  for (std::int64_t t = 0; t < m; ++t) {
    const double u = unif(gen);
    std::int64_t c = 0;
    double p = std::exp(-lambda);
    double cdf = p;
    while (u > cdf && c < 1000) {
      ++c;
      p *= lambda / c;
      cdf += p;
    }
    ++h[c];
  }
  return h;
}

}  // namespace oracle
