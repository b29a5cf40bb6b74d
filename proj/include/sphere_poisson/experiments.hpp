#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "sphere_poisson/directions.hpp"
#include "sphere_poisson/point_config.hpp"
#include "sphere_poisson/window_counting.hpp"

namespace sphere_poisson {

// count value -> number of samples with that count.
using Histogram = std::map<std::int64_t, std::int64_t>;

struct MomentEstimate {
  double estimate = 0.0;        // mean of C(N, k)
  double standard_error = 0.0;  // sqrt(sample variance of C(N, k) / m)
};

struct PoissonDiagnostics {
  double tv_distance = 0.0;
  double dispersion = 0.0;  // NaN when the mean count is 0
  double even_fraction = 0.0;
};

struct ExperimentResult {
  std::int64_t m = 0;
  Histogram histogram;
  double lambda_limit = 0.0;     // phi(a) * mes I
  double lambda_finite_d = 0.0;  // finite_d_intensity(a, d) * mes I
  std::vector<MomentEstimate> factorial_moments;  // k = 1..K
  PoissonDiagnostics diagnostics;
  std::uint64_t master_seed = 0;
};

inline constexpr int kDefaultMomentOrder = 4;

struct ExperimentSpec {
  WindowSpec window;
  std::int64_t samples = 0;
  int max_moment = kDefaultMomentOrder;
  std::uint64_t master_seed = 0;
};

// N_I for direction sample `sample_index`.
std::int64_t sample_window_count(const PointConfig& cfg, const DirectionModel& model,
                                 const WindowSpec& win, std::uint64_t master_seed,
                                 std::uint64_t sample_index);

// Monte Carlo law of N_I over `spec.samples` directions. The OpenMP version
// spreads samples over `workers` threads (0 = runtime default); its result is
// bit-identical to the serial reference for every worker count. A failing
// sample aborts the run with an error naming the smallest failing index.
ExperimentResult run_point_process_experiment(const PointConfig& cfg,
                                              const DirectionModel& model,
                                              const ExperimentSpec& spec, int workers = 0);
ExperimentResult run_point_process_experiment_serial(const PointConfig& cfg,
                                                     const DirectionModel& model,
                                                     const ExperimentSpec& spec);

// Derived statistics from an integer histogram.
ExperimentResult summarize(Histogram histogram, std::int64_t m, int max_moment, double a,
                           double window_measure, int d, std::uint64_t master_seed);

// C(c, k) as a double; exact for c <= 60.
double binomial_coefficient(std::int64_t c, int k);

std::vector<MomentEstimate> factorial_moments(const Histogram& histogram, std::int64_t m,
                                              int max_moment);

// e^{-lambda} lambda^c / c! for c = 0..max_count.
std::vector<double> poisson_pmf(double lambda, std::int64_t max_count);

PoissonDiagnostics poisson_diagnostics(const Histogram& histogram, std::int64_t m,
                                       double lambda);

// Kolmogorov-Smirnov distance between the empirical CDF of `values` and the
// standard normal CDF. Sorts a copy.
double ks_to_normal(std::vector<double> values);

// KS statistic of the projections onto one direction (sample index 0).
// Uses every point when n <= sample_size, else sample_size vertices drawn
// by sample_vertices.
double df_ks(const PointConfig& cfg, const DirectionModel& model, std::int64_t sample_size,
             std::uint64_t master_seed, int workers = 0);

// Same statistic for the cube of any dimension, drawing sample_size uniform
// sign vectors directly (needed once 2^d no longer fits an index).
double df_ks_cube(int d, const DirectionModel& model, std::int64_t sample_size,
                  std::uint64_t master_seed, int workers = 0);

// counts.csv: "count,occurrences" rows in ascending count order.
void write_counts_csv(std::ostream& out, const ExperimentResult& result);
// summary.csv header: m,lambda_limit,lambda_finite_d,e1..eK,se1..seK,tv,
// dispersion,even_fraction,seed. `comment`, when non-empty, is written first
// as a "# ..." line.
void write_summary_csv(std::ostream& out, const ExperimentResult& result,
                       const std::string& comment = {});
// Same keys and values as summary.csv.
std::string summary_json(const ExperimentResult& result);

}  // namespace sphere_poisson
