#include "sphere_poisson/directions.hpp"

#include <cmath>
#include <string>

#include "sphere_poisson/error.hpp"
#include "sphere_poisson/rng.hpp"

namespace sphere_poisson {

DirectionModel DirectionModel::perturbed_bernoulli(std::vector<double> eps) {
  for (std::size_t i = 0; i < eps.size(); ++i)
    if (!(eps[i] >= 0.0) || !std::isfinite(eps[i]))
      throw_invalid("perturbation eps[" + std::to_string(i) + "] must be finite and nonnegative");
  DirectionModel model(DirectionKind::kPerturbedBernoulli);
  model.eps_ = std::make_shared<const std::vector<double>>(std::move(eps));
  return model;
}

std::vector<double> make_perturbation(int d, double eps_max, std::uint64_t seed) {
  if (d < 2) throw_invalid("dimension must be at least 2");
  if (!(eps_max >= 0.0)) throw_invalid("eps_max must be nonnegative");
  CounterRng rng(seed, StreamDomain::kPerturbation, 0);
  std::vector<double> eps(static_cast<std::size_t>(d));
  for (double& e : eps) e = eps_max * rng.uniform();
  return eps;
}

Direction sample_direction(const DirectionModel& model, int d, std::uint64_t master_seed,
                           std::uint64_t sample_index) {
  if (d < 2) throw_invalid("dimension must be at least 2, got " + std::to_string(d));
  CounterRng rng(master_seed, StreamDomain::kDirection, sample_index);
  Direction dir;
  dir.kind = model.kind();
  dir.w.resize(static_cast<std::size_t>(d));
  switch (model.kind()) {
    case DirectionKind::kUniformSphere: {
      double norm2 = 0.0;
      do {
        norm2 = 0.0;
        for (double& x : dir.w) {
          x = rng.gaussian();
          norm2 += x * x;
        }
      } while (norm2 == 0.0);
      const double scale = std::sqrt(static_cast<double>(d) / norm2);
      for (double& x : dir.w) x *= scale;
      break;
    }
    case DirectionKind::kBernoulli:
    case DirectionKind::kPerturbedBernoulli: {
      const auto eps = model.eps();
      if (model.kind() == DirectionKind::kPerturbedBernoulli &&
          eps.size() != static_cast<std::size_t>(d))
        throw_invalid("perturbation has length " + std::to_string(eps.size()) +
                      ", expected d = " + std::to_string(d));
      std::uint64_t bits = 0;
      for (int i = 0; i < d; ++i) {
        if (i % 64 == 0) bits = rng();
        const double mag = eps.empty() ? 1.0 : 1.0 + eps[static_cast<std::size_t>(i)];
        dir.w[static_cast<std::size_t>(i)] = (bits & 1U) ? -mag : mag;
        bits >>= 1;
      }
      break;
    }
  }
  return dir;
}

int cube_low_half(int d) noexcept { return (d + 1) / 2; }

double cube_half_sum(std::span<const double> w, std::uint64_t signs, int begin, int end) noexcept {
  double s = 0.0;
  for (int i = begin; i < end; ++i) {
    const double wi = w[static_cast<std::size_t>(i)];
    s = ((signs >> (i - begin)) & 1U) ? s - wi : s + wi;
  }
  return s;
}

double cube_combine(double low_sum, double high_sum, double inv_sqrt_d) noexcept {
  return (low_sum + high_sum) * inv_sqrt_d;
}

namespace {

double dot_plain(std::span<const double> x, std::span<const double> w) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * w[i];
  return s;
}

// Neumaier summation of the products.
double dot_compensated(std::span<const double> x, std::span<const double> w) {
  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double term = x[i] * w[i];
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term))
      comp += (sum - t) + term;
    else
      comp += (term - t) + sum;
    sum = t;
  }
  return sum + comp;
}

}  // namespace

double project(const PointConfig& cfg, std::int64_t j, const Direction& dir) {
  const int d = cfg.dim();
  if (dir.dim() != d)
    throw_invalid("direction has dimension " + std::to_string(dir.dim()) +
                  ", configuration has " + std::to_string(d));
  cfg.check_index(j);
  switch (cfg.kind()) {
    case ConfigKind::kCube: {
      const auto signs = static_cast<std::uint64_t>(j);
      const int h = cube_low_half(d);
      const double low = cube_half_sum(dir.w, signs, 0, h);
      const double high = cube_half_sum(dir.w, signs >> h, h, d);
      return cube_combine(low, high, 1.0 / std::sqrt(static_cast<double>(d)));
    }
    case ConfigKind::kDuplicatedBasis:
      return dir.w[static_cast<std::size_t>(j % d)];
    default: {
      const auto x = cfg.row(j);
      return d > kCompensatedProjectionDimension ? dot_compensated(x, dir.w)
                                                 : dot_plain(x, dir.w);
    }
  }
}

double project_cube_signs(std::span<const std::uint64_t> sign_words, const Direction& dir) {
  const int d = dir.dim();
  if (sign_words.size() * 64 < static_cast<std::size_t>(d))
    throw_invalid("sign vector shorter than the direction");
  const int h = cube_low_half(d);
  auto half = [&](int begin, int end) {
    double s = 0.0;
    for (int i = begin; i < end; ++i) {
      const bool neg = (sign_words[static_cast<std::size_t>(i / 64)] >> (i % 64)) & 1U;
      const double wi = dir.w[static_cast<std::size_t>(i)];
      s = neg ? s - wi : s + wi;
    }
    return s;
  };
  return cube_combine(half(0, h), half(h, d), 1.0 / std::sqrt(static_cast<double>(d)));
}

}  // namespace sphere_poisson
