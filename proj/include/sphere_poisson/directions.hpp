#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "sphere_poisson/point_config.hpp"

namespace sphere_poisson {

enum class DirectionKind { kUniformSphere, kBernoulli, kPerturbedBernoulli };

// How directions are drawn. A perturbed-Bernoulli model owns a frozen eps
// vector that is shared, read-only, by every sample of an experiment.
class DirectionModel {
 public:
  static DirectionModel uniform_sphere() { return DirectionModel(DirectionKind::kUniformSphere); }
  static DirectionModel bernoulli() { return DirectionModel(DirectionKind::kBernoulli); }
  // Requires every eps_i >= 0.
  static DirectionModel perturbed_bernoulli(std::vector<double> eps);

  DirectionKind kind() const noexcept { return kind_; }
  std::span<const double> eps() const noexcept {
    return eps_ ? std::span<const double>(*eps_) : std::span<const double>();
  }

 private:
  explicit DirectionModel(DirectionKind kind) : kind_(kind) {}

  DirectionKind kind_;
  std::shared_ptr<const std::vector<double>> eps_;
};

// eps_i i.i.d. uniform on [0, eps_max], generated once per experiment.
std::vector<double> make_perturbation(int d, double eps_max, std::uint64_t seed);

// Scaled direction: sqrt(d) U for the uniform model, B or B_eps otherwise.
struct Direction {
  std::vector<double> w;
  DirectionKind kind = DirectionKind::kUniformSphere;

  int dim() const noexcept { return static_cast<int>(w.size()); }
};

// Fully determined by (master_seed, sample_index).
Direction sample_direction(const DirectionModel& model, int d, std::uint64_t master_seed,
                           std::uint64_t sample_index);

// Dimension above which explicit projections use compensated summation.
inline constexpr int kCompensatedProjectionDimension = 10000;

// <x_j, w>.
double project(const PointConfig& cfg, std::int64_t j, const Direction& dir);

// Cube projections are defined through the split used by the meet-in-the-
// middle counter: coordinates [0, h) with h = ceil(d/2) form the low half.
// The value is (low_sum + high_sum) * (1/sqrt(d)), each half summed left to
// right starting from 0. Every cube consumer goes through these helpers so
// that counts agree bit for bit.
int cube_low_half(int d) noexcept;
double cube_half_sum(std::span<const double> w, std::uint64_t signs, int begin, int end) noexcept;
double cube_combine(double low_sum, double high_sum, double inv_sqrt_d) noexcept;

// Projection of an arbitrary cube vertex given as a sign bit vector
// (bit i set => coordinate i negative); usable for any d.
double project_cube_signs(std::span<const std::uint64_t> sign_words, const Direction& dir);

}  // namespace sphere_poisson
