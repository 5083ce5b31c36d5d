#pragma once

#include <cstdint>
#include <span>

namespace psh::rng {

/// Substream tags. Samplers of different kinds never share draws even when
/// they are handed the same user seed.
enum class Stream : std::uint64_t {
  Ellipsoid = 1,
  Sphere = 2,
  Ball = 3,
  Haar = 4,
  Grid = 5,
  Circle = 6,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Mixes a seed with up to two labels into an independent seed.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  return splitmix64(splitmix64(seed ^ splitmix64(a + 0x632be59bd9b4e019ULL)) ^
                    splitmix64(b + 0x8cb92ba72f3d8dd7ULL));
}

/// Counter-based generator: the state is a pure function of
/// (seed, stream, index), so sample `index` draws the same numbers no matter
/// which worker thread evaluates it.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, Stream stream, std::uint64_t index)
      : state_(derive_seed(seed, static_cast<std::uint64_t>(stream), index)) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform on the open interval (0, 1).
  double uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  /// Standard normal (Box-Muller, second variate cached).
  double normal();

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

void fill_normal(CounterRng& rng, std::span<double> out);

/// Uniform point on the unit sphere S^{m-1}, m = out.size().
void uniform_sphere(CounterRng& rng, std::span<double> out);

/// Uniform point in the closed unit ball of R^m.
void uniform_ball(CounterRng& rng, std::span<double> out);

}  // namespace psh::rng
