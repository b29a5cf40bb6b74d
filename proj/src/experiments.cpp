#include "sphere_poisson/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sphere_poisson/archimedes.hpp"
#include "sphere_poisson/error.hpp"
#include "sphere_poisson/format.hpp"
#include "sphere_poisson/rng.hpp"
#include "sphere_poisson/special.hpp"

namespace sphere_poisson {

namespace {

void validate(const PointConfig& cfg, const ExperimentSpec& spec) {
  spec.window.validate();
  if (spec.samples < 1) throw_invalid("sample count must be positive");
  if (spec.max_moment < 1) throw_invalid("maximum moment order must be positive");
  if (cfg.dim() < 3) throw_invalid("experiments need d >= 3");
}

int resolve_workers(int workers) {
#ifdef _OPENMP
  return workers > 0 ? workers : omp_get_max_threads();
#else
  (void)workers;
  return 1;
#endif
}

Histogram histogram_of(const std::vector<std::int64_t>& counts) {
  Histogram h;
  for (const std::int64_t c : counts) ++h[c];
  return h;
}

// Rethrows a per-sample failure with the sample index in the message.
[[noreturn]] void rethrow_for_sample(std::exception_ptr failure, std::int64_t index) {
  try {
    std::rethrow_exception(failure);
  } catch (const Error& e) {
    throw Error(e.kind(), "sample " + std::to_string(index) + ": " + e.what());
  }
}

}  // namespace

std::int64_t sample_window_count(const PointConfig& cfg, const DirectionModel& model,
                                 const WindowSpec& win, std::uint64_t master_seed,
                                 std::uint64_t sample_index) {
  const Direction dir = sample_direction(model, cfg.dim(), master_seed, sample_index);
  return count_window(cfg, dir, win, CountMode::kCountOnly).count;
}

ExperimentResult run_point_process_experiment_serial(const PointConfig& cfg,
                                                     const DirectionModel& model,
                                                     const ExperimentSpec& spec) {
  validate(cfg, spec);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(spec.samples));
  for (std::int64_t i = 0; i < spec.samples; ++i) {
    try {
      counts[static_cast<std::size_t>(i)] = sample_window_count(
          cfg, model, spec.window, spec.master_seed, static_cast<std::uint64_t>(i));
    } catch (const Error&) {
      rethrow_for_sample(std::current_exception(), i);
    }
  }
  return summarize(histogram_of(counts), spec.samples, spec.max_moment, spec.window.a,
                   spec.window.measure(), cfg.dim(), spec.master_seed);
}

ExperimentResult run_point_process_experiment(const PointConfig& cfg,
                                              const DirectionModel& model,
                                              const ExperimentSpec& spec, int workers) {
  validate(cfg, spec);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(spec.samples));
  std::int64_t first_failure = std::numeric_limits<std::int64_t>::max();
  std::exception_ptr failure;
  const int threads = resolve_workers(workers);
  (void)threads;

#pragma omp parallel for schedule(dynamic, 64) num_threads(threads)
  for (std::int64_t i = 0; i < spec.samples; ++i) {
    try {
      counts[static_cast<std::size_t>(i)] = sample_window_count(
          cfg, model, spec.window, spec.master_seed, static_cast<std::uint64_t>(i));
    } catch (const Error&) {
#pragma omp critical(sphere_poisson_experiment_failure)
      if (i < first_failure) {
        first_failure = i;
        failure = std::current_exception();
      }
    }
  }
  if (failure) rethrow_for_sample(failure, first_failure);
  return summarize(histogram_of(counts), spec.samples, spec.max_moment, spec.window.a,
                   spec.window.measure(), cfg.dim(), spec.master_seed);
}

ExperimentResult summarize(Histogram histogram, std::int64_t m, int max_moment, double a,
                           double window_measure, int d, std::uint64_t master_seed) {
  ExperimentResult r;
  r.m = m;
  r.master_seed = master_seed;
  r.lambda_limit = gaussian_intensity(a) * window_measure;
  r.lambda_finite_d = finite_d_intensity(a, d) * window_measure;
  r.factorial_moments = factorial_moments(histogram, m, max_moment);
  if (r.lambda_finite_d > 0.0)
    r.diagnostics = poisson_diagnostics(histogram, m, r.lambda_finite_d);
  else
    r.diagnostics = poisson_diagnostics(histogram, m, std::numeric_limits<double>::min());
  r.histogram = std::move(histogram);
  return r;
}

double binomial_coefficient(std::int64_t c, int k) {
  if (k < 0 || c < k) return 0.0;
  if (c <= 60) {
    // C(c, i) = C(c, i-1) (c - i + 1) / i stays integral; the product fits
    // in 128 bits for c <= 60.
    unsigned __int128 b = 1;
    for (int i = 1; i <= k; ++i) b = b * static_cast<unsigned>(c - i + 1) / static_cast<unsigned>(i);
    return static_cast<double>(b);
  }
  const double cc = static_cast<double>(c);
  return std::round(std::exp(std::lgamma(cc + 1) - std::lgamma(k + 1.0) - std::lgamma(cc - k + 1)));
}

std::vector<MomentEstimate> factorial_moments(const Histogram& histogram, std::int64_t m,
                                              int max_moment) {
  if (m < 1) throw_invalid("sample count must be positive");
  if (max_moment < 1) throw_invalid("maximum moment order must be positive");
  std::int64_t total = 0;
  for (const auto& [c, occ] : histogram) {
    if (c < 0 || occ < 0) throw_invalid("histogram entries must be nonnegative");
    total += occ;
  }
  if (total != m)
    throw_invalid("histogram holds " + std::to_string(total) + " samples, expected " +
                  std::to_string(m));
  std::vector<MomentEstimate> out;
  const long double mm = static_cast<long double>(m);
  for (int k = 1; k <= max_moment; ++k) {
    long double sum = 0.0L;
    long double sum_sq = 0.0L;
    for (const auto& [c, occ] : histogram) {
      const long double b = binomial_coefficient(c, k);
      sum += static_cast<long double>(occ) * b;
      sum_sq += static_cast<long double>(occ) * b * b;
    }
    const long double mean = sum / mm;
    long double var = 0.0L;
    if (m > 1) var = std::max(0.0L, (sum_sq - mm * mean * mean) / (mm - 1.0L));
    out.push_back({static_cast<double>(mean), static_cast<double>(std::sqrt(var / mm))});
  }
  return out;
}

std::vector<double> poisson_pmf(double lambda, std::int64_t max_count) {
  if (!(lambda > 0.0)) throw_invalid("Poisson mean must be positive");
  std::vector<double> p(static_cast<std::size_t>(max_count + 1));
  // Log-domain start keeps e^{-lambda} from underflowing the recursion for
  // large lambda; the ratio recursion is exact otherwise.
  double log_p = -lambda;
  const double log_lambda = std::log(lambda);
  for (std::int64_t c = 0; c <= max_count; ++c) {
    if (c > 0) log_p += log_lambda - std::log(static_cast<double>(c));
    p[static_cast<std::size_t>(c)] = std::exp(log_p);
  }
  return p;
}

PoissonDiagnostics poisson_diagnostics(const Histogram& histogram, std::int64_t m,
                                       double lambda) {
  if (!(lambda > 0.0)) throw_invalid("Poisson mean must be positive");
  if (m < 1) throw_invalid("sample count must be positive");
  const std::int64_t max_c = histogram.empty() ? 0 : histogram.rbegin()->first;
  const std::vector<double> pmf = poisson_pmf(lambda, max_c);
  const double mm = static_cast<double>(m);

  PoissonDiagnostics out;
  double l1 = 0.0;
  for (std::int64_t c = 0; c <= max_c; ++c) {
    const auto it = histogram.find(c);
    const double freq = it == histogram.end() ? 0.0 : static_cast<double>(it->second) / mm;
    l1 += std::abs(freq - pmf[static_cast<std::size_t>(c)]);
  }
  // Poisson mass beyond the largest observed count, summed upward so small
  // tails are not lost to 1 - sum cancellation.
  double tail = 0.0;
  double term = pmf.back();
  for (std::int64_t c = max_c + 1;; ++c) {
    term *= lambda / static_cast<double>(c);
    tail += term;
    if (static_cast<double>(c) > lambda && term <= 1e-17 * tail) break;
    if (term == 0.0) break;
  }
  out.tv_distance = 0.5 * l1 + 0.5 * tail;

  long double even = 0.0L;
  for (const auto& [c, occ] : histogram)
    if (c % 2 == 0) even += occ;
  out.even_fraction = static_cast<double>(even / m);

  const auto moments = factorial_moments(histogram, m, 2);
  const double e1 = moments[0].estimate;
  const double e2 = moments[1].estimate;
  out.dispersion = e1 > 0.0 ? (2.0 * e2 + e1 - e1 * e1) / e1
                            : std::numeric_limits<double>::quiet_NaN();
  return out;
}

double ks_to_normal(std::vector<double> values) {
  if (values.empty()) throw_invalid("KS statistic needs at least one value");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = normal_cdf(values[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double df_ks(const PointConfig& cfg, const DirectionModel& model, std::int64_t sample_size,
             std::uint64_t master_seed, int workers) {
  if (sample_size < 1) throw_invalid("sample size must be positive");
  const Direction dir = sample_direction(model, cfg.dim(), master_seed, 0);
  std::vector<std::int64_t> indices;
  if (cfg.size() <= sample_size) {
    indices.resize(static_cast<std::size_t>(cfg.size()));
    for (std::size_t j = 0; j < indices.size(); ++j) indices[j] = static_cast<std::int64_t>(j);
  } else {
    indices = sample_vertices(cfg, sample_size, master_seed);
  }
  std::vector<double> values(indices.size());
  const int threads = resolve_workers(workers);
  (void)threads;
  const auto count = static_cast<std::int64_t>(indices.size());
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::int64_t t = 0; t < count; ++t)
    values[static_cast<std::size_t>(t)] = project(cfg, indices[static_cast<std::size_t>(t)], dir);
  return ks_to_normal(std::move(values));
}

double df_ks_cube(int d, const DirectionModel& model, std::int64_t sample_size,
                  std::uint64_t master_seed, int workers) {
  if (sample_size < 1) throw_invalid("sample size must be positive");
  if (d < 2) throw_invalid("dimension must be at least 2");
  const Direction dir = sample_direction(model, d, master_seed, 0);
  const std::size_t words = (static_cast<std::size_t>(d) + 63) / 64;
  std::vector<double> values(static_cast<std::size_t>(sample_size));
  const int threads = resolve_workers(workers);
  (void)threads;
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::int64_t t = 0; t < sample_size; ++t) {
    CounterRng rng(master_seed, StreamDomain::kVertex, static_cast<std::uint64_t>(t));
    std::vector<std::uint64_t> signs(words);
    for (auto& w : signs) w = rng();
    values[static_cast<std::size_t>(t)] = project_cube_signs(signs, dir);
  }
  return ks_to_normal(std::move(values));
}

void write_counts_csv(std::ostream& out, const ExperimentResult& result) {
  out << "count,occurrences\n";
  for (const auto& [c, occ] : result.histogram) out << c << ',' << occ << '\n';
}

namespace {

std::vector<std::pair<std::string, std::string>> summary_fields(const ExperimentResult& r) {
  std::vector<std::pair<std::string, std::string>> f;
  f.emplace_back("m", std::to_string(r.m));
  f.emplace_back("lambda_limit", format_real(r.lambda_limit));
  f.emplace_back("lambda_finite_d", format_real(r.lambda_finite_d));
  for (std::size_t k = 0; k < r.factorial_moments.size(); ++k)
    f.emplace_back("e" + std::to_string(k + 1), format_real(r.factorial_moments[k].estimate));
  for (std::size_t k = 0; k < r.factorial_moments.size(); ++k)
    f.emplace_back("se" + std::to_string(k + 1),
                   format_real(r.factorial_moments[k].standard_error));
  f.emplace_back("tv", format_real(r.diagnostics.tv_distance));
  f.emplace_back("dispersion", format_real(r.diagnostics.dispersion));
  f.emplace_back("even_fraction", format_real(r.diagnostics.even_fraction));
  f.emplace_back("seed", std::to_string(r.master_seed));
  return f;
}

}  // namespace

void write_summary_csv(std::ostream& out, const ExperimentResult& result,
                       const std::string& comment) {
  if (!comment.empty()) out << "# " << comment << '\n';
  const auto fields = summary_fields(result);
  for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << fields[i].first;
  out << '\n';
  for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << fields[i].second;
  out << '\n';
}

std::string summary_json(const ExperimentResult& result) {
  nlohmann::ordered_json j;
  for (const auto& [key, text] : summary_fields(result)) {
    // Values are parsed back from the CSV text so both files carry the
    // same numbers.
    if (key == "m")
      j[key] = result.m;
    else if (key == "seed")
      j[key] = result.master_seed;
    else {
      const double v = std::stod(text);
      if (std::isfinite(v))
        j[key] = v;
      else
        j[key] = nullptr;
    }
  }
  return j.dump(2) + "\n";
}

}  // namespace sphere_poisson
