#include "sphere_poisson/point_config.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "sphere_poisson/error.hpp"
#include "sphere_poisson/format.hpp"
#include "sphere_poisson/rng.hpp"

namespace sphere_poisson {

PointConfig PointConfig::explicit_points(int d, std::vector<double> rows,
                                         double norm_tolerance) {
  if (d < 2) throw_invalid("dimension must be at least 2, got " + std::to_string(d));
  if (!(norm_tolerance >= 0.0) || !std::isfinite(norm_tolerance))
    throw_invalid("norm tolerance must be a finite nonnegative number");
  if (rows.empty() || rows.size() % static_cast<std::size_t>(d) != 0)
    throw_invalid("point matrix size " + std::to_string(rows.size()) +
                  " is not a positive multiple of d = " + std::to_string(d));
  PointConfig cfg;
  cfg.kind_ = ConfigKind::kExplicit;
  cfg.d_ = d;
  cfg.n_ = static_cast<std::int64_t>(rows.size() / static_cast<std::size_t>(d));
  cfg.norm_tolerance_ = std::max(norm_tolerance, kStrictNormTolerance);
  cfg.rows_ = std::move(rows);
  for (std::int64_t j = 0; j < cfg.n_; ++j) {
    const double norm = std::sqrt(cfg.squared_norm(j));
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > cfg.norm_tolerance_)
      throw_invalid("point " + std::to_string(j) + " has norm " + format_real(norm) +
                    ", outside tolerance " + format_real(cfg.norm_tolerance_));
  }
  return cfg;
}

PointConfig PointConfig::cube(int d) {
  if (d < 2 || d > kMaxCubeIndexedDimension)
    throw_invalid("cube dimension must be in [2, 62], got " + std::to_string(d));
  PointConfig cfg;
  cfg.kind_ = ConfigKind::kCube;
  cfg.d_ = d;
  cfg.n_ = std::int64_t{1} << d;
  return cfg;
}

PointConfig PointConfig::duplicated_basis(int d, double delta) {
  if (d < 2) throw_invalid("dimension must be at least 2, got " + std::to_string(d));
  if (!(delta > 0.0 && delta < 1.0))
    throw_invalid("duplicated-basis delta must lie in (0, 1), got " + format_real(delta));
  PointConfig cfg;
  cfg.kind_ = ConfigKind::kDuplicatedBasis;
  cfg.d_ = d;
  cfg.delta_ = delta;
  cfg.n_ = d + static_cast<std::int64_t>(std::floor(delta * d));
  return cfg;
}

PointConfig PointConfig::random_uniform(std::int64_t n, int d, std::uint64_t seed) {
  if (d < 2) throw_invalid("dimension must be at least 2, got " + std::to_string(d));
  if (n < 1) throw_invalid("point count must be positive");
  std::vector<double> rows(static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
  for (std::int64_t j = 0; j < n; ++j) {
    CounterRng rng(seed, StreamDomain::kPoints, static_cast<std::uint64_t>(j));
    const std::span<double> row(rows.data() + j * d, static_cast<std::size_t>(d));
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (double& x : row) {
        x = rng.gaussian();
        norm2 += x * x;
      }
    } while (norm2 == 0.0);
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& x : row) x *= inv;
  }
  PointConfig cfg = explicit_points(d, std::move(rows));
  cfg.kind_ = ConfigKind::kRandomUniform;
  return cfg;
}

PointConfig PointConfig::standard_basis(int d) {
  if (d < 2) throw_invalid("dimension must be at least 2, got " + std::to_string(d));
  std::vector<double> rows(static_cast<std::size_t>(d) * static_cast<std::size_t>(d), 0.0);
  for (int i = 0; i < d; ++i) rows[static_cast<std::size_t>(i) * d + i] = 1.0;
  return explicit_points(d, std::move(rows));
}

void PointConfig::check_index(std::int64_t j) const {
  if (j < 0 || j >= n_)
    throw_invalid("point index " + std::to_string(j) + " out of range [0, " +
                  std::to_string(n_) + ")");
}

std::span<const double> PointConfig::row(std::int64_t j) const {
  if (is_implicit()) throw_invalid("implicit configurations store no coordinates");
  check_index(j);
  return {rows_.data() + j * d_, static_cast<std::size_t>(d_)};
}

double PointConfig::coordinate(std::int64_t j, int i) const {
  check_index(j);
  if (i < 0 || i >= d_) throw_invalid("coordinate index out of range");
  switch (kind_) {
    case ConfigKind::kCube: {
      const double c = 1.0 / std::sqrt(static_cast<double>(d_));
      return (static_cast<std::uint64_t>(j) >> i) & 1U ? -c : c;
    }
    case ConfigKind::kDuplicatedBasis:
      return (j % d_) == i ? 1.0 : 0.0;
    default:
      return rows_[static_cast<std::size_t>(j * d_ + i)];
  }
}

double PointConfig::squared_norm(std::int64_t j) const {
  check_index(j);
  if (is_implicit()) return 1.0;
  double s = 0.0;
  for (double x : row(j)) s += x * x;
  return s;
}

double PointConfig::inner_product(std::int64_t i, std::int64_t j) const {
  check_index(i);
  check_index(j);
  double ip = 0.0;
  switch (kind_) {
    case ConfigKind::kCube: {
      const int hamming = std::popcount(static_cast<std::uint64_t>(i ^ j));
      return static_cast<double>(d_ - 2 * hamming) / d_;
    }
    case ConfigKind::kDuplicatedBasis:
      return (i % d_) == (j % d_) ? 1.0 : 0.0;
    default: {
      const auto a = row(i);
      const auto b = row(j);
      for (int t = 0; t < d_; ++t) ip += a[t] * b[t];
    }
  }
  if (strict()) ip = std::clamp(ip, -1.0, 1.0);
  return ip;
}

std::vector<std::int64_t> sample_vertices(const PointConfig& cfg, std::int64_t m,
                                          std::uint64_t seed) {
  if (m < 1) throw_invalid("sample count must be positive");
  std::vector<std::int64_t> out(static_cast<std::size_t>(m));
  const auto n = static_cast<std::uint64_t>(cfg.size());
  for (std::int64_t t = 0; t < m; ++t) {
    CounterRng rng(seed, StreamDomain::kVertex, static_cast<std::uint64_t>(t));
    out[static_cast<std::size_t>(t)] = static_cast<std::int64_t>(rng.below(n));
  }
  return out;
}

void write_points(std::ostream& out, int d, std::span<const double> rows) {
  const std::size_t n = rows.size() / static_cast<std::size_t>(d);
  out << d << ' ' << n << '\n';
  for (std::size_t j = 0; j < n; ++j) {
    for (int i = 0; i < d; ++i) {
      if (i) out << ' ';
      out << format_real(rows[j * d + i]);
    }
    out << '\n';
  }
}

void write_points(const std::filesystem::path& path, const PointConfig& cfg) {
  if (cfg.size() > (std::int64_t{1} << 24))
    throw Error(ErrorKind::kGuardExceeded, "configuration too large to write as a point file");
  std::vector<double> rows;
  rows.reserve(static_cast<std::size_t>(cfg.size() * cfg.dim()));
  for (std::int64_t j = 0; j < cfg.size(); ++j)
    for (int i = 0; i < cfg.dim(); ++i) rows.push_back(cfg.coordinate(j, i));
  std::ofstream out(path);
  if (!out) throw_invalid("cannot open " + path.string() + " for writing");
  write_points(out, cfg.dim(), rows);
}

PointConfig read_points(std::istream& in, double norm_tolerance) {
  long long d = 0;
  long long n = 0;
  if (!(in >> d >> n) || d < 2 || n < 1)
    throw_invalid("point file header must be \"d n\" with d >= 2 and n >= 1");
  std::vector<double> rows;
  rows.reserve(static_cast<std::size_t>(d * n));
  std::string token;
  for (long long t = 0; t < d * n; ++t) {
    if (!(in >> token))
      throw_invalid("point file truncated at value " + std::to_string(t) + " (point " +
                    std::to_string(t / d) + ")");
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size())
      throw_invalid("point file: malformed number '" + token + "' in point " +
                    std::to_string(t / d));
    rows.push_back(v);
  }
  if (in >> token) throw_invalid("point file has trailing data after " + std::to_string(n) + " rows");
  return PointConfig::explicit_points(static_cast<int>(d), std::move(rows), norm_tolerance);
}

PointConfig read_points(const std::filesystem::path& path, double norm_tolerance) {
  std::ifstream in(path);
  if (!in) throw_invalid("cannot open point file " + path.string());
  return read_points(in, norm_tolerance);
}

void write_vector(const std::filesystem::path& path, std::span<const double> v) {
  std::ofstream out(path);
  if (!out) throw_invalid("cannot open " + path.string() + " for writing");
  write_points(out, static_cast<int>(v.size()), v);
}

std::vector<double> read_vector(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw_invalid("cannot open vector file " + path.string());
  long long d = 0;
  long long n = 0;
  if (!(in >> d >> n) || d < 1 || n != 1)
    throw_invalid("vector file header must be \"d 1\"");
  std::vector<double> v(static_cast<std::size_t>(d));
  for (double& x : v)
    if (!(in >> x)) throw_invalid("vector file truncated");
  return v;
}

}  // namespace sphere_poisson
