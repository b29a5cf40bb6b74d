#include "sphere_poisson/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sphere_poisson/archimedes.hpp"
#include "sphere_poisson/conditions.hpp"
#include "sphere_poisson/directions.hpp"
#include "sphere_poisson/error.hpp"
#include "sphere_poisson/experiments.hpp"
#include "sphere_poisson/format.hpp"
#include "sphere_poisson/point_config.hpp"

namespace sphere_poisson {

namespace {

struct ConfigOptions {
  int cube = 0;
  std::vector<double> dup_basis;  // d, delta
  std::vector<double> random;     // n, d, seed
  std::string points;
  double norm_tol = kStrictNormTolerance;

  CLI::Option* cube_opt = nullptr;
  CLI::Option* dup_opt = nullptr;
  CLI::Option* random_opt = nullptr;
  CLI::Option* points_opt = nullptr;

  void add(CLI::App* app) {
    cube_opt = app->add_option("--cube", cube, "cube vertices {+-1/sqrt(d)}^d");
    dup_opt = app->add_option("--dup-basis", dup_basis, "duplicated basis: d,delta")
                  ->delimiter(',')
                  ->expected(2);
    random_opt = app->add_option("--random", random, "random uniform points: n,d,seed")
                     ->delimiter(',')
                     ->expected(3);
    points_opt = app->add_option("--points", points, "point file");
    app->add_option("--norm-tol", norm_tol, "row-norm tolerance for point files");
    cube_opt->excludes(dup_opt)->excludes(random_opt)->excludes(points_opt);
    dup_opt->excludes(random_opt)->excludes(points_opt);
    random_opt->excludes(points_opt);
  }

  bool given() const {
    return cube_opt->count() + dup_opt->count() + random_opt->count() + points_opt->count() > 0;
  }

  PointConfig build() const {
    if (cube_opt->count()) return PointConfig::cube(cube);
    if (dup_opt->count()) {
      if (dup_basis[0] != std::floor(dup_basis[0])) throw_invalid("--dup-basis d must be an integer");
      return PointConfig::duplicated_basis(static_cast<int>(dup_basis[0]), dup_basis[1]);
    }
    if (random_opt->count()) {
      for (double v : random)
        if (v != std::floor(v) || v < 0) throw_invalid("--random expects nonnegative integers n,d,seed");
      return PointConfig::random_uniform(static_cast<std::int64_t>(random[0]),
                                         static_cast<int>(random[1]),
                                         static_cast<std::uint64_t>(random[2]));
    }
    if (points_opt->count()) return read_points(std::filesystem::path(points), norm_tol);
    throw_invalid("one of --cube, --dup-basis, --random, --points is required");
  }

  std::string describe() const {
    if (cube_opt->count()) return "cube:" + std::to_string(cube);
    if (dup_opt->count())
      return "dup-basis:" + format_real(dup_basis[0]) + "," + format_real(dup_basis[1]);
    if (random_opt->count())
      return "random:" + format_real(random[0]) + "," + format_real(random[1]) + "," +
             format_real(random[2]);
    return "points:" + points;
  }
};

struct ModelOptions {
  std::string model = "uniform";
  double eps_max = 0.1;
  std::uint64_t eps_seed = 0;
  std::string eps_file;

  void add(CLI::App* app) {
    app->add_option("--model", model, "direction model")
        ->check(CLI::IsMember({"uniform", "bernoulli", "perturbed"}));
    app->add_option("--eps-max", eps_max, "perturbed model: eps_i ~ U[0, eps-max]");
    app->add_option("--eps-seed", eps_seed, "perturbed model: seed for eps");
    app->add_option("--eps-file", eps_file, "perturbed model: eps vector file");
  }

  DirectionModel build(int d) const {
    if (model == "bernoulli") return DirectionModel::bernoulli();
    if (model == "perturbed") {
      if (!eps_file.empty()) return DirectionModel::perturbed_bernoulli(read_vector(eps_file));
      return DirectionModel::perturbed_bernoulli(make_perturbation(d, eps_max, eps_seed));
    }
    return DirectionModel::uniform_sphere();
  }

  std::string describe() const {
    if (model != "perturbed") return model;
    if (!eps_file.empty()) return "perturbed:file=" + eps_file;
    return "perturbed:eps-max=" + format_real(eps_max) + ",eps-seed=" + std::to_string(eps_seed);
  }
};

std::string bool_text(bool b) { return b ? "true" : "false"; }

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw_invalid("cannot write " + path.string());
  f << text;
  if (!f) throw_invalid("failed writing " + path.string());
}

void write_condition_row(std::ostream& out, const ConditionReport& r) {
  out << "n,epsilon,total,antipodal_part,ratio,exact,se\n";
  out << format_real(r.n) << ',' << format_real(r.epsilon) << ',' << format_real(r.total) << ','
      << format_real(r.antipodal_part) << ',' << format_real(r.ratio) << ','
      << bool_text(r.exact) << ',' << format_real(r.standard_error.value_or(0.0)) << '\n';
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random projections of sphere configurations and their Poisson limit"};
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "window-count experiment; writes CSV/JSON");
  ConfigOptions sim_cfg;
  ModelOptions sim_model;
  double sim_a = 0.0;
  std::vector<double> sim_window{0.0, 1.0};
  std::int64_t sim_samples = 0;
  int sim_k = kDefaultMomentOrder;
  std::uint64_t sim_seed = 0;
  std::string sim_out = ".";
  int sim_workers = 0;
  sim_cfg.add(simulate);
  sim_model.add(simulate);
  simulate->add_option("--a", sim_a, "level a");
  simulate->add_option("--window", sim_window, "interval lo,hi")->delimiter(',')->expected(2);
  simulate->add_option("--samples", sim_samples, "number of directions")->required();
  simulate->add_option("--K", sim_k, "highest factorial moment");
  simulate->add_option("--seed", sim_seed, "master seed");
  simulate->add_option("--out", sim_out, "output directory");
  simulate->add_option("--workers", sim_workers, "threads (0 = default)");

  // parity
  auto* parity = app.add_subcommand("parity", "a = 0, symmetric window; even-count fraction");
  ConfigOptions par_cfg;
  ModelOptions par_model;
  double par_half_width = 1.0;
  std::int64_t par_samples = 0;
  std::uint64_t par_seed = 0;
  int par_workers = 0;
  par_cfg.add(parity);
  par_model.add(parity);
  parity->add_option("--half-width", par_half_width, "window [-w, w)");
  parity->add_option("--samples", par_samples, "number of directions")->required();
  parity->add_option("--seed", par_seed, "master seed");
  parity->add_option("--workers", par_workers, "threads (0 = default)");

  // density
  auto* density = app.add_subcommand("density", "tabulate the projection density");
  density->set_help_flag("--help", "Print this help message and exit");
  int den_d = 0;
  int den_k = 1;
  std::vector<double> den_h;
  double den_rho = 0.0;
  density->add_option("--d", den_d, "dimension")->required();
  density->add_option("--k", den_k, "number of points (Gram order)");
  density->add_option("--h", den_h, "grid values (comma separated)")->delimiter(',')->required();
  density->add_option("--rho", den_rho, "common off-diagonal Gram entry for k >= 2");

  // condition
  auto* condition = app.add_subcommand("condition", "thresholded pair-sum condition");
  ConfigOptions con_cfg;
  double con_eps = 0.5;
  bool con_exclude = false;
  std::int64_t con_pairs = 0;
  std::uint64_t con_seed = 0;
  int con_workers = 0;
  con_cfg.add(condition);
  condition->add_option("--eps", con_eps, "threshold epsilon in (0, 1)");
  condition->add_flag("--exclude-antipodal", con_exclude, "drop pairs with |<x_i, x_j>| = 1");
  condition->add_option("--pair-samples", con_pairs, "estimate from sampled pairs");
  condition->add_option("--seed", con_seed, "master seed for pair sampling");
  condition->add_option("--workers", con_workers, "threads (0 = default)");

  // df
  auto* df = app.add_subcommand("df", "KS distance of the projected empirical CDF to N(0,1)");
  ConfigOptions df_cfg;
  ModelOptions df_model;
  std::int64_t df_sample_size = 200000;
  std::uint64_t df_seed = 0;
  int df_workers = 0;
  double df_eps = 0.0;
  df_cfg.add(df);
  df_model.add(df);
  df->add_option("--sample-size", df_sample_size, "vertices subsampled from large configs");
  df->add_option("--seed", df_seed, "master seed");
  df->add_option("--workers", df_workers, "threads (0 = default)");
  auto* df_eps_opt = df->add_option("--eps", df_eps, "also count norm/pair violations at eps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitInvalidInput;
  }

  try {
    if (simulate->parsed()) {
      const PointConfig cfg = sim_cfg.build();
      const DirectionModel model = sim_model.build(cfg.dim());
      ExperimentSpec spec;
      spec.window = {sim_a, sim_window[0], sim_window[1]};
      spec.samples = sim_samples;
      spec.max_moment = sim_k;
      spec.master_seed = sim_seed;
      const ExperimentResult result = run_point_process_experiment(cfg, model, spec, sim_workers);

      const std::filesystem::path dir(sim_out);
      std::filesystem::create_directories(dir);
      std::ostringstream counts;
      write_counts_csv(counts, result);
      std::ostringstream summary;
      const std::string echo = "simulate config=" + sim_cfg.describe() +
                               " model=" + sim_model.describe() + " a=" + format_real(sim_a) +
                               " window=" + format_real(sim_window[0]) + "," +
                               format_real(sim_window[1]) + " samples=" +
                               std::to_string(sim_samples) + " K=" + std::to_string(sim_k) +
                               " seed=" + std::to_string(sim_seed);
      write_summary_csv(summary, result, echo);
      write_file(dir / "counts.csv", counts.str());
      write_file(dir / "summary.csv", summary.str());
      write_file(dir / "summary.json", summary_json(result));
      out << summary.str();
      return kExitOk;
    }

    if (parity->parsed()) {
      if (!(par_half_width > 0.0)) throw_invalid("--half-width must be positive");
      const PointConfig cfg = par_cfg.build();
      const DirectionModel model = par_model.build(cfg.dim());
      ExperimentSpec spec;
      spec.window = {0.0, -par_half_width, par_half_width};
      spec.samples = par_samples;
      spec.max_moment = 2;
      spec.master_seed = par_seed;
      const ExperimentResult r = run_point_process_experiment(cfg, model, spec, par_workers);
      out << "m,lo,hi,lambda_finite_d,even_fraction,tv,dispersion,seed\n";
      out << r.m << ',' << format_real(-par_half_width) << ',' << format_real(par_half_width)
          << ',' << format_real(r.lambda_finite_d) << ','
          << format_real(r.diagnostics.even_fraction) << ','
          << format_real(r.diagnostics.tv_distance) << ','
          << format_real(r.diagnostics.dispersion) << ',' << r.master_seed << '\n';
      return kExitOk;
    }

    if (density->parsed()) {
      if (den_k < 1 || den_k > den_d - 2)
        throw_invalid("--k must satisfy 1 <= k <= d - 2");
      const GramMatrix gram = GramMatrix::equicorrelated(den_k, den_rho);
      std::size_t rows = 1;
      for (int s = 0; s < den_k; ++s) {
        rows *= den_h.size();
        if (rows > 1000000) throw_invalid("density grid larger than 10^6 rows");
      }
      for (int s = 0; s < den_k; ++s) out << 'h' << s + 1 << ',';
      out << "density,log_density\n";
      std::vector<double> h(static_cast<std::size_t>(den_k));
      for (std::size_t r = 0; r < rows; ++r) {
        // Row r enumerates the grid with the last coordinate varying fastest.
        std::size_t rem = r;
        for (int s = den_k - 1; s >= 0; --s) {
          h[static_cast<std::size_t>(s)] = den_h[rem % den_h.size()];
          rem /= den_h.size();
        }
        const DensityValue v = joint_density(gram, h, den_d);
        for (double x : h) out << format_real(x) << ',';
        out << format_real(v.value) << ',' << format_real(v.log_value) << '\n';
      }
      return kExitOk;
    }

    if (condition->parsed()) {
      ConditionReport report;
      if (con_cfg.cube_opt->count() && con_pairs == 0) {
        report = condition_sum_cube(con_cfg.cube, con_eps, con_exclude);
      } else {
        const PointConfig cfg = con_cfg.build();
        if (con_pairs > 0 || cfg.size() > kPairEnumerationLimit) {
          report = condition_sum_sampled(cfg, con_eps, con_pairs > 0 ? con_pairs : 1000000,
                                         con_seed, con_workers);
        } else {
          report = condition_sum_exact(cfg, con_eps, con_workers);
        }
        if (con_exclude) {
          report.total -= report.antipodal_part;
          report.antipodal_part = 0.0;
          report.ratio = report.total / (report.n * report.n);
        }
      }
      write_condition_row(out, report);
      return kExitOk;
    }

    if (df->parsed()) {
      double ks = 0.0;
      double n = 0.0;
      int d = 0;
      std::optional<DfViolations> violations;
      if (df_cfg.cube_opt->count() && df_cfg.cube > kMaxCubeIndexedDimension) {
        d = df_cfg.cube;
        n = std::ldexp(1.0, d);
        ks = df_ks_cube(d, df_model.build(d), df_sample_size, df_seed, df_workers);
        if (df_eps_opt->count()) throw Error(ErrorKind::kGuardExceeded, "--eps needs n <= 10^4");
      } else {
        const PointConfig cfg = df_cfg.build();
        d = cfg.dim();
        n = static_cast<double>(cfg.size());
        ks = df_ks(cfg, df_model.build(d), df_sample_size, df_seed, df_workers);
        if (df_eps_opt->count()) violations = df_conditions(cfg, df_eps, df_workers);
      }
      out << "n,d,sample_size,seed,ks";
      if (violations) out << ",epsilon,norm_violations,pair_violations";
      out << '\n'
          << format_real(n) << ',' << d << ',' << df_sample_size << ',' << df_seed << ','
          << format_real(ks);
      if (violations)
        out << ',' << format_real(df_eps) << ',' << violations->norm_violations << ','
            << violations->pair_violations;
      out << '\n';
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::kInvalidInput ? kExitInvalidInput : kExitNumericFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  }
  return kExitInvalidInput;
}

}  // namespace sphere_poisson
