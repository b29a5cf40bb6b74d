#pragma once

#include <cstdint>
#include <optional>

#include "sphere_poisson/point_config.hpp"

namespace sphere_poisson {

// Value of the thresholded pair sum
//   sum over pairs i < j with |<x_i, x_j>| >= eps of min((1 - |<x_i, x_j>|)^{-1/2}, n).
// Pairs with |<x_i, x_j>| = 1 contribute the cap n and are also tallied in
// antipodal_part, so the sum without them is total - antipodal_part.
struct ConditionReport {
  double total = 0.0;
  double antipodal_part = 0.0;
  double ratio = 0.0;  // total / n^2
  double epsilon = 0.0;
  double n = 0.0;
  bool exact = true;
  std::optional<double> standard_error;  // sampled estimates only
};

// Pairs with 1 - |<x_i, x_j>| below this count as antipodal (or coincident).
inline constexpr double kAntipodalGap = 1e-12;
inline constexpr std::int64_t kPairEnumerationLimit = 10000;

// One pair's contribution (0 when below threshold).
double condition_term(double inner, double epsilon, double n);

// All-pairs enumeration; n <= 10^4, otherwise kGuardExceeded naming
// condition_sum_sampled. The OpenMP version splits rows over `workers`
// threads and sums fixed row blocks in order, so it matches the serial
// reference for any worker count.
ConditionReport condition_sum_exact(const PointConfig& cfg, double epsilon, int workers = 0);
ConditionReport condition_sum_exact_serial(const PointConfig& cfg, double epsilon);

// Closed form for the cube from Hamming-distance pair counts
// 2^{d-1} C(d, k). 2 <= d <= 62.
ConditionReport condition_sum_cube(int d, double epsilon, bool exclude_antipodal);

// Unbiased estimate from pair_samples unordered pairs drawn uniformly with
// replacement: C(n, 2) times the mean sampled term.
ConditionReport condition_sum_sampled(const PointConfig& cfg, double epsilon,
                                      std::int64_t pair_samples, std::uint64_t master_seed,
                                      int workers = 0);

struct DfViolations {
  std::int64_t norm_violations = 0;  // points with ||x_j|^2 - 1| > eps
  std::int64_t pair_violations = 0;  // ordered pairs j != k with |<x_j, x_k>| > eps
};

// Exhaustive count; pair part is guarded like condition_sum_exact.
DfViolations df_conditions(const PointConfig& cfg, double epsilon, int workers = 0);

}  // namespace sphere_poisson
