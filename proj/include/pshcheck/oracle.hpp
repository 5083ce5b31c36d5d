#pragma once

#include <optional>
#include <span>
#include <vector>

#include "pshcheck/integrate.hpp"
#include "pshcheck/verdict.hpp"

namespace psh {

/// Hermitian matrix of d^2 u / dz_j dzbar_k at a point, row-major.
struct LeviForm {
  std::size_t n = 0;
  std::vector<Complex> matrix;
  double step = 0.0;
  /// max |L - L^*| / 2 before symmetrization.
  double hermitian_deviation = 0.0;

  const Complex& operator()(std::size_t j, std::size_t k) const { return matrix[j * n + k]; }
  /// max |entry|
  double max_abs() const;
};

/// Default finite-difference step 1e-4 (1 + |z|).
double default_step(double point_norm);

/// Levi form by central differences. Diagonal entries are a quarter of the
/// real Laplacian in the (x_j, y_j) plane; off-diagonal entries come from the
/// polarization L_jk = 1/4 sum_p i^p Q(e_j + i^p e_k) of the quadratic form
/// Q(v) = 1/4 (D_v^2 u + D_{iv}^2 u). Throws OracleUnavailable if the stencil
/// meets u = -inf.
LeviForm levi_form(const EvalFn& u, const CPoint& z, std::optional<double> step = std::nullopt);

/// Eigenvalues of a Hermitian matrix, ascending. n <= 2 in closed form;
/// otherwise cyclic Jacobi on the real symmetric embedding [[A, -B], [B, A]].
std::vector<double> hermitian_eigenvalues(std::size_t n, std::span<const Complex> matrix);

double min_levi_eigenvalue(const LeviForm& form);

/// sum_j (u(x + h e_j) - 2 u(x) + u(x - h e_j)) / h^2
double fd_laplacian(const RealEvalFn& u, std::span<const double> x, std::optional<double> step = std::nullopt);

/// Restricts u to the complex line z0 + lambda * direction and compares u(z0)
/// with the circle means of radius rho for each rho in disc_radii. A centre
/// with u(z0) = -inf passes trivially (recorded in counts.skipped_minus_infinity).
Verdict line_subharmonic_check(const EvalFn& u, const CPoint& z0, const CPoint& direction,
                               std::span<const double> disc_radii, std::size_t budget, std::uint64_t seed);

}  // namespace psh
