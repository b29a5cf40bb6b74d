#include "sphere_poisson/window_counting.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sphere_poisson/error.hpp"

namespace sphere_poisson {

void WindowSpec::validate() const {
  if (!std::isfinite(a) || !std::isfinite(lo) || !std::isfinite(hi))
    throw_invalid("window level and endpoints must be finite");
  if (!(lo < hi)) throw_invalid("window needs lo < hi");
}

WindowBounds window_bounds(const WindowSpec& win, double n) {
  return {win.a + win.lo / n, win.a + win.hi / n};
}

HitList count_direct(const PointConfig& cfg, const Direction& dir, const WindowSpec& win,
                     CountMode mode) {
  win.validate();
  if (cfg.size() > kDirectScanLimit)
    throw Error(ErrorKind::kGuardExceeded,
                "direct scan over " + std::to_string(cfg.size()) +
                    " points exceeds the 2^24 guard; use count_cube_mitm");
  if (dir.dim() != cfg.dim())
    throw_invalid("direction dimension does not match configuration");
  const double n = static_cast<double>(cfg.size());
  const auto [lower, upper] = window_bounds(win, n);
  HitList hits;
  for (std::int64_t j = 0; j < cfg.size(); ++j) {
    const double proj = project(cfg, j, dir);
    if (lower <= proj && proj < upper) {
      ++hits.count;
      if (mode == CountMode::kWithPositions) hits.positions.push_back(n * (proj - win.a));
    }
  }
  std::sort(hits.positions.begin(), hits.positions.end());
  return hits;
}

namespace {

// Signed partial sums of w[begin, end) for every sign pattern, built by
// doubling so entry t equals cube_half_sum(w, t, begin, end) bit for bit.
std::vector<double> half_table(const std::vector<double>& w, int begin, int end) {
  std::vector<double> table(std::size_t{1} << (end - begin));
  table[0] = 0.0;
  std::size_t filled = 1;
  for (int i = begin; i < end; ++i) {
    const double wi = w[static_cast<std::size_t>(i)];
    for (std::size_t t = 0; t < filled; ++t) {
      table[t + filled] = table[t] - wi;
      table[t] = table[t] + wi;
    }
    filled *= 2;
  }
  return table;
}

}  // namespace

HitList count_cube_mitm(int d, const Direction& dir, const WindowSpec& win, CountMode mode) {
  win.validate();
  if (d < 4 || d > kMaxCubeIndexedDimension)
    throw_invalid("meet-in-the-middle needs 4 <= d <= 62, got " + std::to_string(d));
  if (dir.dim() != d) throw_invalid("direction dimension does not match cube dimension");
  const int h = cube_low_half(d);
  const std::vector<double> low = half_table(dir.w, 0, h);
  std::vector<double> high = half_table(dir.w, h, d);
  std::sort(high.begin(), high.end());

  const double n = std::ldexp(1.0, d);
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
  const auto [lower, upper] = window_bounds(win, n);
  HitList hits;
  for (const double l : low) {
    // (l + x) * inv_sqrt_d is monotone in x, so both edges are partition points.
    const auto first = std::partition_point(high.begin(), high.end(), [&](double x) {
      return cube_combine(l, x, inv_sqrt_d) < lower;
    });
    const auto last = std::partition_point(first, high.end(), [&](double x) {
      return cube_combine(l, x, inv_sqrt_d) < upper;
    });
    hits.count += last - first;
    if (mode == CountMode::kWithPositions) {
      for (auto it = first; it != last; ++it)
        hits.positions.push_back(n * (cube_combine(l, *it, inv_sqrt_d) - win.a));
    }
  }
  std::sort(hits.positions.begin(), hits.positions.end());
  return hits;
}

HitList count_window(const PointConfig& cfg, const Direction& dir, const WindowSpec& win,
                     CountMode mode) {
  if (cfg.kind() == ConfigKind::kCube && cfg.dim() >= 4)
    return count_cube_mitm(cfg.dim(), dir, win, mode);
  return count_direct(cfg, dir, win, mode);
}

}  // namespace sphere_poisson
