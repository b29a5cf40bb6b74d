// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sphere_poisson/archimedes.hpp"
#include "sphere_poisson/cli.hpp"
#include "sphere_poisson/conditions.hpp"
#include "sphere_poisson/directions.hpp"
#include "sphere_poisson/experiments.hpp"
#include "sphere_poisson/window_counting.hpp"
#include "support/oracles.hpp"

using namespace sphere_poisson;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
  }
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

int failures = 0;

void criterion(int id, const char* title, double budget_seconds, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_seconds > 0) o.require(secs < budget_seconds, "runtime " + fmt("%.2f", secs) + " s < " + fmt("%.0f", budget_seconds) + " s");
  if (!o.pass) ++failures;
  std::printf("[%s] %2d. %s (%.2f s) -- %s\n", o.pass ? "PASS" : "FAIL", id, title, secs, o.detail.c_str());
  std::fflush(stdout);
}

double density_at(const GramMatrix& g, std::span<const double> h, int d) { return joint_density(g, h, d).value; }

double integrate_k2(double rho, int d) {
  const GramMatrix g = GramMatrix::equicorrelated(2, rho);
  const double r = std::sqrt(static_cast<double>(d));
  oracle::AdaptiveQuadrature outer(1e-10);
  return outer(
      [&](double h1) {
        const double span = (1 - rho * rho) * (d - h1 * h1);
        if (span <= 0) return 0.0;
        const double half = std::sqrt(span);
        oracle::AdaptiveQuadrature inner(1e-11);
        return inner(
            [&](double h2) {
              const double h[2] = {h1, h2};
              return density_at(g, h, d);
            },
            rho * h1 - half, rho * h1 + half);
      },
      -r, r);
}

// Importance sampling with proposal N(0, s^2 M); returns (estimate, SE).
std::pair<double, double> integrate_k3_monte_carlo(double rho, int d, int samples) {
  const GramMatrix g = GramMatrix::equicorrelated(3, rho);
  const auto L = g.cholesky();
  const double s2 = 1.5;
  const double s = std::sqrt(s2);
  const double log_q_norm = -1.5 * std::log(2 * std::numbers::pi * s2) - 0.5 * g.log_det();
  std::mt19937_64 gen(20260101);
  std::normal_distribution<double> normal;
  double sum = 0;
  double sum_sq = 0;
  for (int t = 0; t < samples; ++t) {
    const double z[3] = {normal(gen), normal(gen), normal(gen)};
    double h[3];
    for (int i = 0; i < 3; ++i) {
      h[i] = 0;
      for (int j = 0; j <= i; ++j) h[i] += s * L[i * 3 + j] * z[j];
    }
    const double log_q = log_q_norm - 0.5 * (z[0] * z[0] + z[1] * z[1] + z[2] * z[2]);
    const DensityValue p = joint_density(g, h, d);
    const double w = p.value == 0.0 ? 0.0 : std::exp(p.log_value - log_q);
    sum += w;
    sum_sq += w * w;
  }
  const double mean = sum / samples;
  const double var = (sum_sq / samples - mean * mean) * samples / (samples - 1.0);
  return {mean, std::sqrt(var / samples)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

int cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"sphere_poisson"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

ExperimentSpec positive_case_spec() {
  ExperimentSpec spec;
  spec.window = {0.5, 0.0, 1.0};
  spec.samples = 20000;
  spec.max_moment = 4;
  spec.master_seed = 42;
  return spec;
}

}  // namespace

int main() {
  criterion(1, "density normalization", 30, [] {
    Outcome o;
    oracle::AdaptiveQuadrature quad(1e-11);
    const GramMatrix one = GramMatrix::equicorrelated(1, 0.0);
    for (int d : {5, 50, 500}) {
      const double r = std::sqrt(static_cast<double>(d));
      const double mass = quad(
          [&](double h) {
            const double hv[1] = {h};
            return density_at(one, hv, d);
          },
          -r, r);
      o.require(std::abs(mass - 1) <= 1e-6, "k=1 d=" + std::to_string(d) + " |mass-1|=" + fmt("%.1e", std::abs(mass - 1)));
    }
    for (int d : {10, 100})
      for (double rho : {0.0, 0.3, 0.9}) {
        const double mass = integrate_k2(rho, d);
        o.require(std::abs(mass - 1) <= 1e-6,
                  "k=2 d=" + std::to_string(d) + " rho=" + fmt("%.1f", rho) + " |mass-1|=" + fmt("%.1e", std::abs(mass - 1)));
      }
    const auto [mc, se] = integrate_k3_monte_carlo(0.2, 20, 1000000);
    o.require(std::abs(mc - 1) <= 3e-3, "k=3 d=20 rho=0.2 MC mass=" + fmt("%.5f", mc) + " (se " + fmt("%.1e", se) + ")");
    return o;
  });

  criterion(2, "Archimedes: d=3, k=1 uniform on [-sqrt3, sqrt3]", 1, [] {
    Outcome o;
    const double expected = 1.0 / (2.0 * std::sqrt(3.0));
    const double r = std::sqrt(3.0);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
      const double h = -r + 2 * r * (i + 0.5) / 100;
      worst = std::max(worst, std::abs(finite_d_intensity(h, 3) - expected));
    }
    o.require(worst <= 1e-12, "max deviation " + fmt("%.1e", worst));
    o.require(finite_d_intensity(2.0, 3) == 0.0, "zero outside support");
    return o;
  });

  criterion(3, "Gaussian limit of the single-point density", 5, [] {
    Outcome o;
    std::vector<double> sup;
    for (int d : {10, 100, 1000}) {
      double s = 0;
      for (int i = 0; i <= 8000; ++i) {
        const double h = -4 + 8.0 * i / 8000;
        s = std::max(s, std::abs(finite_d_intensity(h, d) - gaussian_intensity(h)));
      }
      sup.push_back(s);
    }
    o.require(sup[0] > sup[1] && sup[1] > sup[2],
              "sup errors " + fmt("%.2e", sup[0]) + " > " + fmt("%.2e", sup[1]) + " > " + fmt("%.2e", sup[2]));
    o.require(sup[2] <= 2e-3, "d=1000 sup " + fmt("%.2e", sup[2]) + " <= 2e-3");
    return o;
  });

  criterion(4, "meet-in-the-middle equals direct scan", 30, [] {
    Outcome o;
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> level(-2.5, 2.5);
    std::uniform_real_distribution<double> edge(-8.0, 8.0);
    for (int d : {8, 12, 16}) {
      const PointConfig cube = PointConfig::cube(d);
      int agree = 0;
      for (int t = 0; t < 200; ++t) {
        const Direction dir = sample_direction(DirectionModel::uniform_sphere(), d, 404, static_cast<std::uint64_t>(t));
        double lo = edge(gen);
        double hi = edge(gen);
        if (lo > hi) std::swap(lo, hi);
        if (lo == hi) hi += 1;
        const double scale = std::ldexp(1.0, d) / 16;
        const WindowSpec win{level(gen), lo * scale, hi * scale};
        const HitList a = count_cube_mitm(d, dir, win);
        const HitList b = count_direct(cube, dir, win);
        agree += (a.count == b.count && a.positions == b.positions);
      }
      o.require(agree == 200, "d=" + std::to_string(d) + ": " + std::to_string(agree) + "/200 identical");
    }
    return o;
  });

  criterion(5, "cube d=20, a=0.5: Poisson factorial moments and TV", 0, [] {
    Outcome o;
    const ExperimentResult r =
        run_point_process_experiment(PointConfig::cube(20), DirectionModel::uniform_sphere(), positive_case_spec());
    const double lambda = finite_d_intensity(0.5, 20) * 1.0;
    const double lambda_quad = expected_window_count(0.5, 0.0, 1.0, std::ldexp(1.0, 20), 20);
    const auto& e = r.factorial_moments;
    o.require(std::abs(e[0].estimate - lambda) <= 3 * e[0].standard_error,
              "e1=" + fmt("%.5f", e[0].estimate) + " vs lambda_d=" + fmt("%.5f", lambda) + " (quadrature " +
                  fmt("%.5f", lambda_quad) + ", se " + fmt("%.4f", e[0].standard_error) + ")");
    o.require(r.diagnostics.tv_distance <= 0.02, "TV=" + fmt("%.4f", r.diagnostics.tv_distance));
    double fact = 1;
    for (int k = 1; k <= 3; ++k) {
      fact *= k;
      const double target = std::pow(lambda, k) / fact;
      const double z = std::abs(e[k - 1].estimate - target) / e[k - 1].standard_error;
      o.require(z <= 4, "k=" + std::to_string(k) + " |z|=" + fmt("%.2f", z));
    }
    return o;
  });

  criterion(6, "cube d=20, a=0: antipodal parity defeats the Poisson law", 0, [] {
    Outcome o;
    ExperimentSpec spec;
    spec.window = {0.0, -1.0, 1.0};
    spec.samples = 5000;
    spec.master_seed = 6;
    const ExperimentResult r = run_point_process_experiment(PointConfig::cube(20), DirectionModel::uniform_sphere(), spec);
    o.require(r.diagnostics.even_fraction == 1.0, "even_fraction=" + fmt("%.4f", r.diagnostics.even_fraction));
    const double lambda = 2 * finite_d_intensity(0.0, 20);
    const double tv = poisson_diagnostics(r.histogram, r.m, lambda).tv_distance;
    o.require(tv >= 0.3, "TV to Pois(" + fmt("%.4f", lambda) + ")=" + fmt("%.4f", tv));
    return o;
  });

  criterion(7, "duplicated basis is overdispersed; pure basis is not", 0, [] {
    Outcome o;
    ExperimentSpec spec;
    spec.window = {0.0, 0.0, 1.0};
    spec.samples = 50000;
    spec.master_seed = 7;
    const double dup = run_point_process_experiment(PointConfig::duplicated_basis(200, 0.5),
                                                    DirectionModel::uniform_sphere(), spec)
                           .diagnostics.dispersion;
    o.require(dup >= 1.45 && dup <= 1.90, "duplicated dispersion=" + fmt("%.4f", dup) + " in [1.45, 1.90]");
    const double pure =
        run_point_process_experiment(PointConfig::standard_basis(200), DirectionModel::uniform_sphere(), spec)
            .diagnostics.dispersion;
    o.require(pure >= 0.90 && pure <= 1.10, "pure-basis dispersion=" + fmt("%.4f", pure) + " in [0.90, 1.10]");
    return o;
  });

  criterion(8, "condition checker: closed form vs enumeration", 60, [] {
    Outcome o;
    double worst = 0;
    for (int d : {6, 8, 10, 12})
      for (double eps : {0.1, 0.3, 0.5, 0.9}) {
        const double exact = condition_sum_exact(PointConfig::cube(d), eps).total;
        const double closed = condition_sum_cube(d, eps, false).total;
        worst = std::max(worst, std::abs(closed - exact) / exact);
      }
    o.require(worst <= 1e-9, "max relative gap " + fmt("%.1e", worst));
    const double ratio = condition_sum_exact(PointConfig::duplicated_basis(1000, 0.5), 0.5).ratio;
    o.require(std::abs(ratio - 1.0 / 3.0) <= 1e-3, "dup-basis d=1000 ratio=" + fmt("%.6f", ratio));
    const double total = condition_sum_exact(PointConfig::duplicated_basis(10, 0.5), 0.5).total;
    o.require(total == 75.0, "dup-basis(10,0.5) total=" + fmt("%.17g", total));
    return o;
  });

  criterion(9, "DF conditions hold while the pair-sum condition fails", 10, [] {
    Outcome o;
    const PointConfig dup = PointConfig::duplicated_basis(400, 0.5);
    const DfViolations v = df_conditions(dup, 0.5);
    const double n = static_cast<double>(dup.size());
    o.require(v.norm_violations == 0, "norm violations " + std::to_string(v.norm_violations));
    o.require(v.pair_violations == 400,
              "pair violations " + std::to_string(v.pair_violations) + " (" + fmt("%.2e", v.pair_violations / (n * n)) + " n^2)");
    const double ratio = condition_sum_exact(dup, 0.5).ratio;
    o.require(std::abs(ratio - 1.0 / 3.0) <= 1e-3, "literal ratio " + fmt("%.6f", ratio));
    return o;
  });

  criterion(10, "Bernoulli lattice on Cube(16)", 5, [] {
    Outcome o;
    const int d = 16;
    const PointConfig cube = PointConfig::cube(d);
    int bad = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
      const Direction b = sample_direction(DirectionModel::bernoulli(), d, 10, s);
      for (const std::int64_t j : sample_vertices(cube, 1000, 1000 + s)) {
        const double scaled = std::sqrt(static_cast<double>(d)) * project(cube, j, b);
        const double r = std::round(scaled);
        bad += !(std::abs(scaled - r) <= 1e-9 && ((static_cast<long long>(r) % 2) + 2) % 2 == d % 2);
      }
    }
    o.require(bad == 0, std::to_string(bad) + " of 100000 off-lattice or wrong parity");
    return o;
  });

  criterion(11, "Gaussian empirical law of cube projections (KS)", 30, [] {
    Outcome o;
    const double ks100 = df_ks_cube(100, DirectionModel::uniform_sphere(), 200000, 11);
    o.require(ks100 <= 0.05, "Cube(100) KS=" + fmt("%.4f", ks100));
    const double ks400 = df_ks_cube(400, DirectionModel::uniform_sphere(), 200000, 11);
    o.require(ks400 <= 0.02, "Cube(400) KS=" + fmt("%.4f", ks400));
    return o;
  });

  criterion(12, "synthetic Poisson counts pass the diagnostics", 10, [] {
    Outcome o;
    for (double lambda : {0.1, 0.35, 1.0}) {
      const std::int64_t m = 100000;
      const auto hist = oracle::synthetic_poisson_histogram(lambda, m, 12 + static_cast<std::uint64_t>(lambda * 1000));
      const double tv = poisson_diagnostics(hist, m, lambda).tv_distance;
      o.require(tv <= 0.01, "lambda=" + fmt("%.2f", lambda) + " TV=" + fmt("%.4f", tv));
      const auto e = factorial_moments(hist, m, 4);
      double fact = 1;
      double worst = 0;
      double worst_empirical = 0;
      for (int k = 1; k <= 4; ++k) {
        fact *= k;
        const double target = std::pow(lambda, k) / fact;
        // SE of the mean of C(N, k) under the Poisson reference. The empirical
        // SE degenerates to 0 when no sample reaches N >= k (lambda = 0.1,
        // k = 4: 0.38 such samples expected).
        double second = 0;
        double p = std::exp(-lambda);
        for (int c = 0; c < 200; ++c) {
          if (c > 0) p *= lambda / c;
          const double b = oracle::binomial(c, k) * (c >= k);
          second += p * b * b;
        }
        const double null_se = std::sqrt((second - target * target) / m);
        worst = std::max(worst, std::abs(e[k - 1].estimate - target) / null_se);
        worst_empirical = std::max(worst_empirical, std::abs(e[k - 1].estimate - target) / e[k - 1].standard_error);
      }
      o.require(worst <= 4, "lambda=" + fmt("%.2f", lambda) + " max |z|=" + fmt("%.2f", worst) +
                                " (empirical-SE |z|=" + fmt("%.2f", worst_empirical) + ")");
    }
    return o;
  });

  criterion(13, "simulate output independent of --workers", 0, [] {
    Outcome o;
    const auto base = std::filesystem::temp_directory_path() / "sphere_poisson_acceptance";
    std::filesystem::remove_all(base);
    const std::vector<std::string> common{"simulate", "--cube", "20", "--a", "0.5", "--window", "0,1",
                                          "--samples", "20000", "--seed", "42"};
    for (const char* w : {"1", "8"}) {
      auto args = common;
      args.insert(args.end(), {"--workers", w, "--out", (base / w).string()});
      o.require(cli(args) == 0, std::string("workers=") + w + " exit 0");
    }
    for (const char* file : {"counts.csv", "summary.csv", "summary.json"}) {
      const std::string a = slurp(base / "1" / file);
      o.require(!a.empty() && a == slurp(base / "8" / file), std::string(file) + " byte-identical");
    }
    std::filesystem::remove_all(base);
    return o;
  });

  std::printf("%d criteria failed\n", failures);
  return failures;
}
