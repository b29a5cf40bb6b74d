#include "sphere_poisson/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sphere_poisson/error.hpp"
#include "sphere_poisson/rng.hpp"

namespace sphere_poisson {

namespace {

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw_invalid("epsilon must lie in (0, 1)");
}

void check_enumerable(const PointConfig& cfg) {
  if (cfg.size() > kPairEnumerationLimit)
    throw Error(ErrorKind::kGuardExceeded,
                "all-pairs enumeration over n = " + std::to_string(cfg.size()) +
                    " points exceeds the 10^4 guard; use condition_sum_sampled");
}

int resolve_workers(int workers) {
#ifdef _OPENMP
  return workers > 0 ? workers : omp_get_max_threads();
#else
  (void)workers;
  return 1;
#endif
}

bool is_antipodal(double inner) { return 1.0 - std::abs(inner) < kAntipodalGap; }

struct RowSum {
  double total = 0.0;
  double antipodal = 0.0;
};

RowSum row_sum(const PointConfig& cfg, std::int64_t i, double epsilon, double n) {
  RowSum s;
  for (std::int64_t j = i + 1; j < cfg.size(); ++j) {
    const double ip = cfg.inner_product(i, j);
    const double t = condition_term(ip, epsilon, n);
    s.total += t;
    if (t > 0.0 && is_antipodal(ip)) s.antipodal += t;
  }
  return s;
}

ConditionReport finish(RowSum sum, double epsilon, double n, bool exact) {
  ConditionReport r;
  r.total = sum.total;
  r.antipodal_part = sum.antipodal;
  r.n = n;
  r.ratio = sum.total / (n * n);
  r.epsilon = epsilon;
  r.exact = exact;
  return r;
}

}  // namespace

double condition_term(double inner, double epsilon, double n) {
  const double a = std::min(1.0, std::abs(inner));
  if (a < epsilon) return 0.0;
  const double gap = 1.0 - a;
  if (gap < kAntipodalGap) return n;
  return std::min(1.0 / std::sqrt(gap), n);
}

ConditionReport condition_sum_exact_serial(const PointConfig& cfg, double epsilon) {
  check_epsilon(epsilon);
  check_enumerable(cfg);
  const double n = static_cast<double>(cfg.size());
  RowSum sum;
  for (std::int64_t i = 0; i < cfg.size(); ++i) {
    const RowSum r = row_sum(cfg, i, epsilon, n);
    sum.total += r.total;
    sum.antipodal += r.antipodal;
  }
  return finish(sum, epsilon, n, true);
}

ConditionReport condition_sum_exact(const PointConfig& cfg, double epsilon, int workers) {
  check_epsilon(epsilon);
  check_enumerable(cfg);
  const double n = static_cast<double>(cfg.size());
  std::vector<RowSum> rows(static_cast<std::size_t>(cfg.size()));
  const int threads = resolve_workers(workers);
  (void)threads;
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
  for (std::int64_t i = 0; i < cfg.size(); ++i)
    rows[static_cast<std::size_t>(i)] = row_sum(cfg, i, epsilon, n);
  RowSum sum;
  for (const RowSum& r : rows) {
    sum.total += r.total;
    sum.antipodal += r.antipodal;
  }
  return finish(sum, epsilon, n, true);
}

ConditionReport condition_sum_cube(int d, double epsilon, bool exclude_antipodal) {
  check_epsilon(epsilon);
  if (d < 2 || d > kMaxCubeIndexedDimension)
    throw_invalid("cube dimension must be in [2, 62], got " + std::to_string(d));
  const double n = std::ldexp(1.0, d);
  RowSum sum;
  unsigned __int128 binom = 1;  // C(d, k)
  for (int k = 1; k <= d; ++k) {
    binom = binom * static_cast<unsigned>(d - k + 1) / static_cast<unsigned>(k);
    // Same expression as PointConfig::inner_product for Hamming distance k.
    const double ip = static_cast<double>(d - 2 * k) / d;
    const double term = condition_term(ip, epsilon, n);
    if (term == 0.0) continue;
    const bool antipodal = is_antipodal(ip);
    if (antipodal && exclude_antipodal) continue;
    const double pairs = static_cast<double>(binom << (d - 1));
    sum.total += pairs * term;
    if (antipodal) sum.antipodal += pairs * term;
  }
  return finish(sum, epsilon, n, true);
}

ConditionReport condition_sum_sampled(const PointConfig& cfg, double epsilon,
                                      std::int64_t pair_samples, std::uint64_t master_seed,
                                      int workers) {
  check_epsilon(epsilon);
  if (pair_samples < 1) throw_invalid("pair sample count must be positive");
  if (cfg.size() < 2) throw_invalid("need at least two points to sample pairs");
  const double n = static_cast<double>(cfg.size());
  const auto nn = static_cast<std::uint64_t>(cfg.size());

  // Fixed-size blocks summed in index order keep the floating-point result
  // independent of scheduling.
  constexpr std::int64_t kBlock = 4096;
  const std::int64_t blocks = (pair_samples + kBlock - 1) / kBlock;
  struct Partial {
    double sum = 0.0;
    double sum_sq = 0.0;
    double antipodal = 0.0;
  };
  std::vector<Partial> partial(static_cast<std::size_t>(blocks));
  const int threads = resolve_workers(workers);
  (void)threads;
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::int64_t b = 0; b < blocks; ++b) {
    Partial p;
    const std::int64_t end = std::min(pair_samples, (b + 1) * kBlock);
    for (std::int64_t t = b * kBlock; t < end; ++t) {
      CounterRng rng(master_seed, StreamDomain::kPair, static_cast<std::uint64_t>(t));
      std::uint64_t i = 0;
      std::uint64_t j = 0;
      do {
        i = rng.below(nn);
        j = rng.below(nn);
      } while (i == j);
      const double ip =
          cfg.inner_product(static_cast<std::int64_t>(i), static_cast<std::int64_t>(j));
      const double term = condition_term(ip, epsilon, n);
      p.sum += term;
      p.sum_sq += term * term;
      if (term > 0.0 && is_antipodal(ip)) p.antipodal += term;
    }
    partial[static_cast<std::size_t>(b)] = p;
  }
  Partial total;
  for (const Partial& p : partial) {
    total.sum += p.sum;
    total.sum_sq += p.sum_sq;
    total.antipodal += p.antipodal;
  }
  const double m = static_cast<double>(pair_samples);
  const double pairs = 0.5 * n * (n - 1.0);
  const double mean = total.sum / m;
  double var = 0.0;
  if (pair_samples > 1) var = std::max(0.0, (total.sum_sq - m * mean * mean) / (m - 1.0));
  ConditionReport r = finish({pairs * mean, pairs * total.antipodal / m}, epsilon, n, false);
  r.standard_error = pairs * std::sqrt(var / m);
  return r;
}

DfViolations df_conditions(const PointConfig& cfg, double epsilon, int workers) {
  if (!(epsilon > 0.0)) throw_invalid("epsilon must be positive");
  check_enumerable(cfg);
  DfViolations v;
  for (std::int64_t j = 0; j < cfg.size(); ++j)
    if (std::abs(cfg.squared_norm(j) - 1.0) > epsilon) ++v.norm_violations;
  std::int64_t unordered = 0;
  const int threads = resolve_workers(workers);
  (void)threads;
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : unordered) num_threads(threads)
  for (std::int64_t i = 0; i < cfg.size(); ++i)
    for (std::int64_t j = i + 1; j < cfg.size(); ++j)
      if (std::abs(cfg.inner_product(i, j)) > epsilon) ++unordered;
  v.pair_violations = 2 * unordered;
  return v;
}

}  // namespace sphere_poisson
