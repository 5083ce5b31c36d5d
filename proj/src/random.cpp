#include "pshcheck/random.hpp"

#include <cmath>
#include <numbers>

namespace psh::rng {

double CounterRng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double radius = std::sqrt(-2.0 * std::log(uniform()));
  const double angle = 2.0 * std::numbers::pi * uniform();
  cached_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

void fill_normal(CounterRng& rng, std::span<double> out) {
  for (double& x : out) x = rng.normal();
}

void uniform_sphere(CounterRng& rng, std::span<double> out) {
  double norm2 = 0.0;
  do {
    fill_normal(rng, out);
    norm2 = 0.0;
    for (double x : out) norm2 += x * x;
  } while (norm2 == 0.0);
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& x : out) x *= inv;
}

void uniform_ball(CounterRng& rng, std::span<double> out) {
  uniform_sphere(rng, out);
  const double radius = std::pow(rng.uniform(), 1.0 / static_cast<double>(out.size()));
  for (double& x : out) x *= radius;
}

}  // namespace psh::rng
