// Serial reference vs OpenMP kernels on the workloads of the acceptance
// suite. Usage: bench_parallel [threads]

#include <chrono>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sphere_poisson/conditions.hpp"
#include "sphere_poisson/experiments.hpp"

using namespace sphere_poisson;
using bench_clock = std::chrono::steady_clock;

template <class F>
double seconds(F&& f) {
  const auto t0 = bench_clock::now();
  f();
  return std::chrono::duration<double>(bench_clock::now() - t0).count();
}

int main(int argc, char** argv) {
  int threads = argc > 1 ? std::atoi(argv[1]) : 0;
#ifdef _OPENMP
  if (threads <= 0) threads = omp_get_max_threads();
#else
  threads = 1;
#endif
  std::printf("threads %d\n", threads);

  {
    ExperimentSpec spec;
    spec.window = {0.5, 0.0, 1.0};
    spec.samples = 20000;
    spec.master_seed = 42;
    const PointConfig cube = PointConfig::cube(20);
    ExperimentResult serial;
    ExperimentResult parallel;
    const double ts = seconds([&] { serial = run_point_process_experiment_serial(cube, DirectionModel::uniform_sphere(), spec); });
    const double tp = seconds([&] { parallel = run_point_process_experiment(cube, DirectionModel::uniform_sphere(), spec, threads); });
    std::printf("experiment cube(20) m=20000   serial %8.3f s  omp %8.3f s  speedup %5.2f  identical %s\n", ts, tp,
                ts / tp, serial.histogram == parallel.histogram ? "yes" : "NO");
  }
  {
    const PointConfig cube = PointConfig::cube(13);
    ConditionReport serial;
    ConditionReport parallel;
    const double ts = seconds([&] { serial = condition_sum_exact_serial(cube, 0.3); });
    const double tp = seconds([&] { parallel = condition_sum_exact(cube, 0.3, threads); });
    std::printf("condition cube(13) all pairs  serial %8.3f s  omp %8.3f s  speedup %5.2f  rel.gap %.1e\n", ts, tp,
                ts / tp, std::abs(serial.total - parallel.total) / serial.total);
  }
  {
    double ks1 = 0;
    double ksn = 0;
    const double ts = seconds([&] { ks1 = df_ks_cube(400, DirectionModel::uniform_sphere(), 200000, 1, 1); });
    const double tp = seconds([&] { ksn = df_ks_cube(400, DirectionModel::uniform_sphere(), 200000, 1, threads); });
    std::printf("df_ks cube(400) 2e5 vertices  1 thr  %8.3f s  omp %8.3f s  speedup %5.2f  identical %s\n", ts, tp,
                ts / tp, ks1 == ksn ? "yes" : "NO");
  }
}
