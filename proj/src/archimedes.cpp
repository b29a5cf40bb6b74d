#include "sphere_poisson/archimedes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/beta.hpp>

#include "sphere_poisson/error.hpp"
#include "sphere_poisson/special.hpp"

namespace sphere_poisson {

GramMatrix::GramMatrix(int k, std::vector<double> entries) : k_(k), entries_(std::move(entries)) {
  if (k < 1) throw_invalid("Gram matrix order must be positive");
  if (entries_.size() != static_cast<std::size_t>(k) * static_cast<std::size_t>(k))
    throw_invalid("Gram matrix needs k*k entries");
  for (int r = 0; r < k; ++r) {
    if (std::abs((*this)(r, r) - 1.0) > 1e-12)
      throw_invalid("Gram matrix diagonal entry " + std::to_string(r) + " is not 1");
    for (int c = 0; c < r; ++c)
      if (std::abs((*this)(r, c) - (*this)(c, r)) > 1e-12)
        throw_invalid("Gram matrix is not symmetric");
  }
  factor();
}

GramMatrix GramMatrix::equicorrelated(int k, double rho) {
  std::vector<double> e(static_cast<std::size_t>(k) * static_cast<std::size_t>(k), rho);
  for (int i = 0; i < k; ++i) e[static_cast<std::size_t>(i * k + i)] = 1.0;
  return GramMatrix(k, std::move(e));
}

void GramMatrix::factor() {
  chol_.assign(entries_.size(), 0.0);
  for (int j = 0; j < k_; ++j) {
    double pivot = (*this)(j, j);
    for (int t = 0; t < j; ++t) pivot -= chol_[j * k_ + t] * chol_[j * k_ + t];
    if (!(pivot > kCholeskyPivotTolerance)) {
      singular_ = true;
      chol_.clear();
      return;
    }
    const double ljj = std::sqrt(pivot);
    chol_[j * k_ + j] = ljj;
    for (int i = j + 1; i < k_; ++i) {
      double s = (*this)(i, j);
      for (int t = 0; t < j; ++t) s -= chol_[i * k_ + t] * chol_[j * k_ + t];
      chol_[i * k_ + j] = s / ljj;
    }
  }
}

double GramMatrix::log_det() const {
  if (singular_) throw Error(ErrorKind::kSingularGram, "Gram matrix is singular");
  double s = 0.0;
  for (int j = 0; j < k_; ++j) s += std::log(chol_[j * k_ + j]);
  return 2.0 * s;
}

double GramMatrix::quadratic_form(std::span<const double> h) const {
  if (singular_) throw Error(ErrorKind::kSingularGram, "Gram matrix is singular");
  if (h.size() != static_cast<std::size_t>(k_))
    throw_invalid("argument length " + std::to_string(h.size()) + " does not match Gram order " +
                  std::to_string(k_));
  double q = 0.0;
  std::vector<double> z(static_cast<std::size_t>(k_));
  for (int i = 0; i < k_; ++i) {
    double s = h[i];
    for (int t = 0; t < i; ++t) s -= chol_[i * k_ + t] * z[t];
    z[i] = s / chol_[i * k_ + i];
    q += z[i] * z[i];
  }
  return q;
}

DensityValue DensityValue::from_log(double log_value) {
  DensityValue v;
  v.log_value = log_value;
  v.value = std::isinf(log_value) && log_value < 0 ? 0.0 : std::exp(log_value);
  return v;
}

GramMatrix gram_matrix(const PointConfig& cfg, std::span<const std::int64_t> indices) {
  const int k = static_cast<int>(indices.size());
  if (k < 1 || k > cfg.dim() - 2)
    throw_invalid("Gram order k = " + std::to_string(k) + " must satisfy 1 <= k <= d - 2 = " +
                  std::to_string(cfg.dim() - 2));
  for (int s = 0; s < k; ++s)
    for (int t = 0; t < s; ++t)
      if (indices[s] == indices[t]) throw_invalid("Gram indices must be distinct positions");
  std::vector<double> e(static_cast<std::size_t>(k) * static_cast<std::size_t>(k));
  for (int s = 0; s < k; ++s) {
    for (int t = 0; t < k; ++t)
      e[static_cast<std::size_t>(s * k + t)] =
          s == t ? 1.0 : cfg.inner_product(indices[s], indices[t]);
  }
  return GramMatrix(k, std::move(e));
}

DensityValue joint_density(const GramMatrix& gram, std::span<const double> h, int d) {
  const int k = gram.order();
  if (k > d - 2)
    throw_invalid("density needs k <= d - 2 (k = " + std::to_string(k) + ", d = " +
                  std::to_string(d) + ")");
  if (gram.singular())
    throw Error(ErrorKind::kSingularGram, "density does not exist for a singular Gram matrix");
  const double q = gram.quadratic_form(h);
  const double dd = static_cast<double>(d);
  if (!(q < dd)) return DensityValue{};
  const double log_norm = log_gamma_ratio(0.5 * dd, 0.5 * (dd - k)) -
                          0.5 * k * std::log(std::numbers::pi * dd) - 0.5 * gram.log_det();
  const double exponent = 0.5 * (dd - k - 2.0);
  // exponent * log(0) at d = k + 2 is 0 * -inf; the factor is 1 there.
  const double log_shape = exponent == 0.0 ? 0.0 : exponent * std::log1p(-q / dd);
  return DensityValue::from_log(log_norm + log_shape);
}

double gaussian_intensity(double a) { return normal_pdf(a); }

double finite_d_intensity(double a, int d) {
  if (d < 3) throw_invalid("finite-d intensity needs d >= 3");
  static const GramMatrix unit = GramMatrix::equicorrelated(1, 0.0);
  const double h[1] = {a};
  return joint_density(unit, h, d).value;
}

double finite_d_cdf(double t, int d) {
  if (d < 3) throw_invalid("finite-d CDF needs d >= 3");
  const double dd = static_cast<double>(d);
  if (t <= -std::sqrt(dd)) return 0.0;
  if (t >= std::sqrt(dd)) return 1.0;
  // H^2/d ~ Beta(1/2, (d-1)/2), H symmetric.
  const double x = std::min(1.0, t * t / dd);
  const double half_mass = 0.5 * boost::math::ibeta(0.5, 0.5 * (dd - 1.0), x);
  return t >= 0 ? 0.5 + half_mass : 0.5 - half_mass;
}

double expected_window_count(double a, double lo, double hi, double n, int d) {
  if (!(lo < hi)) throw_invalid("window needs lo < hi");
  const double x0 = a + lo / n;
  const double x1 = a + hi / n;
  // The windows of interest are O(1/n) wide; differencing the CDF would lose
  // all digits, so integrate the density with 20-point Gauss-Legendre on
  // [x0, x1] intersected with the support.
  static constexpr double kNodes[10] = {
      0.076526521133497338, 0.2277858511416451, 0.37370608871541955, 0.51086700195082713,
      0.63605368072651502, 0.7463319064601508, 0.83911697182221878, 0.91223442825132584,
      0.96397192727791381, 0.99312859918509488};
  static constexpr double kWeights[10] = {
      0.15275338713072578, 0.14917298647260366, 0.14209610931838187, 0.13168863844917653,
      0.11819453196151825, 0.10193011981724026, 0.083276741576704671, 0.062672048334109443,
      0.040601429800386217, 0.017614007139153273};
  const double r = std::sqrt(static_cast<double>(d));
  const double lo_x = std::max(x0, -r);
  const double hi_x = std::min(x1, r);
  if (!(lo_x < hi_x)) return 0.0;
  const double mid = 0.5 * (lo_x + hi_x);
  const double half = 0.5 * (hi_x - lo_x);
  double s = 0.0;
  for (int i = 0; i < 10; ++i) {
    s += kWeights[i] * (finite_d_intensity(mid - half * kNodes[i], d) +
                        finite_d_intensity(mid + half * kNodes[i], d));
  }
  return n * half * s;
}

double pair_window_bound(double inner, double n, double c_window) {
  const double gap = 1.0 - std::min(1.0, std::abs(inner));
  const double cap = 1.0 / n;
  if (gap <= 0.0) return c_window * cap;
  return c_window * std::min(1.0 / (n * n * std::sqrt(gap)), cap);
}

}  // namespace sphere_poisson
