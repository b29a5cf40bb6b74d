#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace sphere_poisson {

// Independent random streams. Every stream is keyed by
// (master_seed, domain, index), so sample i never depends on how many other
// samples were drawn or on which thread drew them.
enum class StreamDomain : std::uint64_t {
  kDirection = 0x6469'7265'6374ULL,
  kVertex = 0x7665'7274'6578ULL,
  kPair = 0x7061'6972'7300ULL,
  kPerturbation = 0x7065'7274'7572ULL,
  kPoints = 0x706f'696e'7473ULL,
  kUser = 0x7573'6572'0000ULL,
};

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_key(std::uint64_t master_seed,
                                   StreamDomain domain,
                                   std::uint64_t index) noexcept {
  std::uint64_t k = mix64(master_seed + 0x9e3779b97f4a7c15ULL);
  k = mix64(k ^ static_cast<std::uint64_t>(domain));
  return mix64(k ^ mix64(index + 0x632be59bd9b4e019ULL));
}

// Counter-based generator: output t is mix64(key + (t+1)*gamma). Cheap to
// construct, so each sample owns one.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit constexpr CounterRng(std::uint64_t key) noexcept : key_(key) {}
  CounterRng(std::uint64_t master_seed, StreamDomain domain,
             std::uint64_t index) noexcept
      : key_(derive_key(master_seed, domain, index)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1].
  double uniform_open_zero() noexcept {
    return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound), bound >= 1. Lemire's multiply-shift with
  // rejection, so the result is exactly uniform.
  std::uint64_t below(std::uint64_t bound) noexcept {
    unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>((*this)()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Standard normal via Box-Muller; the second variate is cached.
  double gaussian() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_open_zero()));
    const double theta = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace sphere_poisson
