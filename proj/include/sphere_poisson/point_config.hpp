#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace sphere_poisson {

inline constexpr double kStrictNormTolerance = 1e-9;
inline constexpr int kMaxCubeIndexedDimension = 62;

enum class ConfigKind { kExplicit, kCube, kDuplicatedBasis, kRandomUniform };

// Configuration x_0..x_{n-1} on (or near) S^{d-1}. Points are addressed by
// 0-based index everywhere. The implicit kinds (cube, duplicated basis)
// never store coordinates; use the index accessors.
//
// RandomUniform points are i.i.d. uniform on the sphere. They stand in for
// "sufficiently regular" nets; no covering-radius guarantee is made.
class PointConfig {
 public:
  // Row-major n x d matrix. Every row norm must lie within norm_tolerance
  // of 1, otherwise kInvalidInput names the first offending row.
  static PointConfig explicit_points(int d, std::vector<double> rows,
                                     double norm_tolerance = kStrictNormTolerance);
  // Vertices of {+-1/sqrt(d)}^d. Vertex j has coordinate i equal to
  // -1/sqrt(d) iff bit i of j is set. 2 <= d <= 62.
  static PointConfig cube(int d);
  // e_0..e_{d-1} followed by e_0..e_{floor(delta*d)-1}; 0 < delta < 1.
  static PointConfig duplicated_basis(int d, double delta);
  // n Gaussian-normalized rows, reproducible from seed.
  static PointConfig random_uniform(std::int64_t n, int d, std::uint64_t seed);
  // The d standard basis vectors as an explicit configuration.
  static PointConfig standard_basis(int d);

  ConfigKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return d_; }
  std::int64_t size() const noexcept { return n_; }
  double norm_tolerance() const noexcept { return norm_tolerance_; }
  bool strict() const noexcept { return norm_tolerance_ <= kStrictNormTolerance; }
  bool is_implicit() const noexcept {
    return kind_ == ConfigKind::kCube || kind_ == ConfigKind::kDuplicatedBasis;
  }

  // Duplicated-basis parameter; 0 for other kinds.
  double delta() const noexcept { return delta_; }
  // Row j of a materialized configuration (Explicit / RandomUniform).
  std::span<const double> row(std::int64_t j) const;

  // <x_i, x_j>. Cube uses (d - 2 hamming(i, j)) / d. Clamped to [-1, 1] for
  // strict configurations.
  double inner_product(std::int64_t i, std::int64_t j) const;
  double squared_norm(std::int64_t j) const;

  // Coordinate i of point j, for any kind.
  double coordinate(std::int64_t j, int i) const;

  void check_index(std::int64_t j) const;

 private:
  PointConfig() = default;

  ConfigKind kind_ = ConfigKind::kExplicit;
  int d_ = 0;
  std::int64_t n_ = 0;
  double delta_ = 0.0;
  double norm_tolerance_ = kStrictNormTolerance;
  std::vector<double> rows_;
};

// m indices drawn uniformly with replacement from [0, n).
std::vector<std::int64_t> sample_vertices(const PointConfig& cfg, std::int64_t m,
                                          std::uint64_t seed);

// Plain-text point file: "d n" header, then n rows of d reals written with
// 17 significant digits.
void write_points(std::ostream& out, int d, std::span<const double> rows);
void write_points(const std::filesystem::path& path, const PointConfig& cfg);
PointConfig read_points(std::istream& in, double norm_tolerance = kStrictNormTolerance);
PointConfig read_points(const std::filesystem::path& path,
                        double norm_tolerance = kStrictNormTolerance);

// Single-row vector files share the point-file layout with n = 1.
void write_vector(const std::filesystem::path& path, std::span<const double> v);
std::vector<double> read_vector(const std::filesystem::path& path);

}  // namespace sphere_poisson
