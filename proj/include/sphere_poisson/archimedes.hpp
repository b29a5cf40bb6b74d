#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "sphere_poisson/point_config.hpp"

namespace sphere_poisson {

// Pivot below which a Cholesky factorization is declared singular.
inline constexpr double kCholeskyPivotTolerance = 1e-12;

// k x k matrix of inner products between the points being projected,
// together with its lower Cholesky factor when it is positive definite.
class GramMatrix {
 public:
  // Symmetric with unit diagonal (checked to 1e-12).
  explicit GramMatrix(int k, std::vector<double> entries);
  // k x k matrix with unit diagonal and every off-diagonal entry rho.
  static GramMatrix equicorrelated(int k, double rho);

  int order() const noexcept { return k_; }
  double operator()(int r, int c) const { return entries_[static_cast<std::size_t>(r * k_ + c)]; }
  bool singular() const noexcept { return singular_; }
  // Lower-triangular factor L, M = L L^T. Empty when singular.
  std::span<const double> cholesky() const noexcept { return chol_; }
  // log det M; throws kSingularGram when singular.
  double log_det() const;
  // h^T M^{-1} h = |z|^2 with L z = h.
  double quadratic_form(std::span<const double> h) const;

 private:
  void factor();

  int k_;
  std::vector<double> entries_;
  std::vector<double> chol_;
  bool singular_ = false;
};

struct DensityValue {
  double log_value = -std::numeric_limits<double>::infinity();
  double value = 0.0;

  static DensityValue from_log(double log_value);
};

// Gram matrix of the points cfg[indices[0..k)]. Requires 1 <= k <= d - 2.
GramMatrix gram_matrix(const PointConfig& cfg, std::span<const std::int64_t> indices);

// Joint density at h of (<y_s, sqrt(d) U>)_s for a uniform direction U:
//   Gamma(d/2)/Gamma((d-k)/2) (pi d)^{-k/2} det^{-1/2} M (1 - h^T M^{-1} h / d)_+^{(d-k-2)/2}
// evaluated in log domain. Zero outside the ellipsoid h^T M^{-1} h < d.
DensityValue joint_density(const GramMatrix& gram, std::span<const double> h, int d);

// phi(a) = (2 pi)^{-1/2} exp(-a^2/2).
double gaussian_intensity(double a);

// Density of <x, sqrt(d) U> for a single unit vector x (d >= 3).
double finite_d_intensity(double a, int d);

// P(<x, sqrt(d) U> <= t) for a single unit vector x, via the regularized
// incomplete beta function.
double finite_d_cdf(double t, int d);

// Expected number of points in the window a + [lo, hi)/n for a configuration
// of n unit vectors: n * P(H in [a + lo/n, a + hi/n)).
double expected_window_count(double a, double lo, double hi, double n, int d);

// c * min(n^{-2} (1 - |inner|)^{-1/2}, n^{-1}); the first branch is +inf at
// |inner| = 1.
double pair_window_bound(double inner, double n, double c_window);

}  // namespace sphere_poisson
