#pragma once

#include <cstddef>
#include <vector>

namespace psh {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [a, b]; exact for polynomials of degree 2n-1.
QuadratureRule gauss_legendre(std::size_t n, double a = 0.0, double b = 1.0);

}  // namespace psh
