#include <doctest.h>

#include <cmath>
#include <vector>

#include "pshcheck/random.hpp"

using namespace psh::rng;

TEST_CASE("counter rng is a pure function of seed, stream and index") {
  CounterRng a(42, Stream::Ellipsoid, 7), b(42, Stream::Ellipsoid, 7);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  CounterRng c(42, Stream::Sphere, 7), d(42, Stream::Ellipsoid, 8);
  CounterRng e(42, Stream::Ellipsoid, 7);
  const auto first = e.next_u64();
  CHECK(c.next_u64() != first);
  CHECK(d.next_u64() != first);
}

TEST_CASE("uniform stays in the open unit interval with mean 1/2") {
  double sum = 0.0;
  const int count = 200000;
  for (int i = 0; i < count; ++i) {
    CounterRng g(1, Stream::Grid, static_cast<std::uint64_t>(i));
    const double u = g.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  // sd of the mean is sqrt(1/12 / count)
  CHECK(std::abs(sum / count - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / count));
}

TEST_CASE("normal variates have unit variance") {
  CounterRng g(3, Stream::Sphere, 0);
  double s1 = 0.0, s2 = 0.0;
  const int count = 200000;
  for (int i = 0; i < count; ++i) {
    const double x = g.normal();
    s1 += x;
    s2 += x * x;
  }
  CHECK(std::abs(s1 / count) < 0.01);
  CHECK(std::abs(s2 / count - 1.0) < 0.015);
}

TEST_CASE("sphere points have unit norm and ball radii follow r^m") {
  for (std::size_t m : {1u, 2u, 3u, 5u}) {
    std::vector<double> x(m);
    double r2 = 0.0;
    const int count = 100000;
    for (int i = 0; i < count; ++i) {
      CounterRng g(9, Stream::Ball, static_cast<std::uint64_t>(i));
      uniform_sphere(g, x);
      double n2 = 0.0;
      for (double v : x) n2 += v * v;
      REQUIRE(std::abs(n2 - 1.0) < 1e-12);
      uniform_ball(g, x);
      n2 = 0.0;
      for (double v : x) n2 += v * v;
      REQUIRE(n2 <= 1.0);
      r2 += n2;
    }
    // E|x|^2 over the unit ball of R^m is m / (m + 2).
    const double expected = static_cast<double>(m) / (m + 2.0);
    CHECK(std::abs(r2 / count - expected) < 0.01);
  }
}
