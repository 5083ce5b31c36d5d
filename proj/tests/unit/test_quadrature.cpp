#include <doctest.h>

#include <cmath>

#include "pshcheck/quadrature.hpp"

using psh::gauss_legendre;

namespace {
double simpson(double (*f)(double), double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}
}  // namespace

TEST_CASE("rule is exact for monomials up to degree 2n-1") {
  for (std::size_t n : {1u, 2u, 5u, 16u, 64u}) {
    const auto q = gauss_legendre(n);
    REQUIRE(q.nodes.size() == n);
    for (std::size_t d = 0; d < 2 * n && d < 40; ++d) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += q.weights[i] * std::pow(q.nodes[i], static_cast<double>(d));
      CHECK(s == doctest::Approx(1.0 / (d + 1.0)).epsilon(1e-13));
    }
  }
}

TEST_CASE("nodes lie inside the interval and weights are positive") {
  const auto q = gauss_legendre(20, -1.0, 3.0);
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    CHECK(q.nodes[i] > -1.0);
    CHECK(q.nodes[i] < 3.0);
    CHECK(q.weights[i] > 0.0);
  }
}

TEST_CASE("smooth integrand agrees with composite Simpson") {
  auto f = [](double t) { return std::exp(-t) * std::cos(3.0 * t); };
  const auto q = gauss_legendre(24, 0.0, 2.0);
  double s = 0.0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) s += q.weights[i] * f(q.nodes[i]);
  CHECK(s == doctest::Approx(simpson(f, 0.0, 2.0, 20000)).epsilon(1e-12));
}

TEST_CASE("zero nodes is rejected") { CHECK_THROWS(gauss_legendre(0)); }
