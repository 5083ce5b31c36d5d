#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pshcheck/common.hpp"
#include "pshcheck/geometry.hpp"

using namespace psh;

TEST_CASE("ellipsoid volume closed form") {
  const double pi = std::numbers::pi;
  CHECK(ellipsoid_volume(std::vector<double>{1.0}) == doctest::Approx(pi).epsilon(1e-15));
  CHECK(ellipsoid_volume(std::vector<double>{1.0, 1.0}) == doctest::Approx(pi * pi / 2.0).epsilon(1e-15));
  CHECK(ellipsoid_volume(std::vector<double>{1.0, 2.0, 3.0}) ==
        doctest::Approx(pi * pi * pi * 36.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("volume agrees with hit-or-miss sampling of the membership predicate") {
  // Independent generator and rejection box, not the library samplers.
  std::mt19937_64 gen(12345);
  const std::vector<double> radii{1.0, 0.5};
  const Ellipsoid e(radii);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const int count = 400000;
  int hits = 0;
  std::vector<Complex> w(2);
  for (int i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < 2; ++j) w[j] = Complex(radii[j] * unit(gen), radii[j] * unit(gen));
    hits += e.contains(w);
  }
  const double box = 16.0 * 1.0 * 0.25;
  const double p = static_cast<double>(hits) / count;
  const double se = box * std::sqrt(p * (1.0 - p) / count);
  CHECK(std::abs(box * p - ellipsoid_volume(radii)) < 3.0 * se);
}

TEST_CASE("invalid radii and points are rejected") {
  CHECK_THROWS_AS(Ellipsoid({1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(Ellipsoid({1.0, -2.0}), DomainError);
  CHECK_THROWS_AS(Ellipsoid(std::vector<double>{}), DomainError);
  CHECK_THROWS_AS(CPoint({Complex(std::nan(""), 0.0)}), DomainError);
}

TEST_CASE("unitary frames") {
  CHECK(UnitaryFrame::identity(3).unitarity_defect() == 0.0);
  const auto s = UnitaryFrame::swap(3, 0, 2);
  CHECK(s(0, 2) == Complex(1.0));
  CHECK(s(1, 1) == Complex(1.0));
  CHECK(std::abs(std::abs(s.determinant()) - 1.0) < 1e-15);
  CHECK_THROWS_AS(UnitaryFrame(2, {1.0, 0.1, 0.0, 1.0}), DomainError);
}

TEST_CASE("haar frames are unitary, reproducible, and |T_11|^2 averages 1/n") {
  for (std::size_t n : {1u, 2u, 3u, 4u}) {
    double sum = 0.0;
    const int count = 4000;
    for (int k = 0; k < count; ++k) {
      const auto t = sample_haar_unitary(n, static_cast<std::uint64_t>(k));
      REQUIRE(t.unitarity_defect() < 1e-12);
      sum += std::norm(t(0, 0));
    }
    // Var |T_11|^2 = (n-1) / (n^2 (n+1)); the n = 1 case is deterministic.
    const double sd = std::sqrt((n - 1.0) / (n * n * (n + 1.0)) / count);
    CHECK(std::abs(sum / count - 1.0 / n) <= 4.0 * sd + 1e-12);
  }
  CHECK(sample_haar_unitary(3, 77) == sample_haar_unitary(3, 77));
}

TEST_CASE("ball/ellipsoid maps are inverse and respect membership") {
  const auto t = sample_haar_unitary(2, 5);
  const Ellipsoid e{0.3, 0.1};
  const CPoint c{Complex(0.2, -0.1), Complex(0.5, 0.5)};
  const CPoint w{Complex(0.3, 0.4), Complex(-0.2, 0.1)};
  const CPoint z = ball_to_ellipsoid(w, e, t, c);
  const CPoint back = ellipsoid_to_ball(z, e, t, c);
  for (std::size_t j = 0; j < 2; ++j) CHECK(std::abs(back[j] - w[j]) < 1e-14);
  CHECK(contains(e, t, c, z));
  const CPoint outside{c[0] + 0.31, c[1]};
  CHECK_FALSE(contains(e, t, c, outside));
  CHECK_THROWS_AS(ball_to_ellipsoid(CPoint{Complex(0.9, 0.0), Complex(0.0, 0.5)}, e, t, c), DomainError);
}
