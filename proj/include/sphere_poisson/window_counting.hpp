#pragma once

#include <cstdint>
#include <vector>

#include "sphere_poisson/directions.hpp"
#include "sphere_poisson/point_config.hpp"

namespace sphere_poisson {

// Level a and the interval I = [lo, hi); the window in projection space is
// [a + lo/n, a + hi/n).
struct WindowSpec {
  double a = 0.0;
  double lo = 0.0;
  double hi = 1.0;

  double measure() const noexcept { return hi - lo; }
  void validate() const;
};

// Window edges in projection units. Membership is always tested as
// lower <= proj && proj < upper on these values.
struct WindowBounds {
  double lower;
  double upper;
};
WindowBounds window_bounds(const WindowSpec& win, double n);

struct HitList {
  std::int64_t count = 0;
  // n (proj - a) for each hit, ascending. Empty in count-only mode.
  std::vector<double> positions;
};

enum class CountMode { kCountOnly, kWithPositions };

inline constexpr std::int64_t kDirectScanLimit = std::int64_t{1} << 24;

// Scans every point. Guarded by kDirectScanLimit (kGuardExceeded points to
// count_cube_mitm).
HitList count_direct(const PointConfig& cfg, const Direction& dir, const WindowSpec& win,
                     CountMode mode = CountMode::kWithPositions);

// Exact window count on the 2^d cube vertices by meet-in-the-middle over
// the two coordinate halves. 4 <= d <= 62. Agrees with count_direct exactly.
HitList count_cube_mitm(int d, const Direction& dir, const WindowSpec& win,
                        CountMode mode = CountMode::kWithPositions);

// Picks the meet-in-the-middle path for cubes with d >= 4, else the scan.
HitList count_window(const PointConfig& cfg, const Direction& dir, const WindowSpec& win,
                     CountMode mode = CountMode::kCountOnly);

}  // namespace sphere_poisson
