#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "pshcheck/common.hpp"

namespace psh {

/// A point of C^n.
class CPoint {
 public:
  explicit CPoint(std::vector<Complex> coords);
  CPoint(std::initializer_list<Complex> coords) : CPoint(std::vector<Complex>(coords)) {}

  static CPoint zero(std::size_t n);

  std::size_t dim() const { return coords_.size(); }
  const Complex& operator[](std::size_t j) const { return coords_[j]; }
  std::span<const Complex> coords() const { return coords_; }

  /// Euclidean norm in C^n = R^{2n}.
  double norm() const;

  friend bool operator==(const CPoint&, const CPoint&) = default;

 private:
  std::vector<Complex> coords_;
};

/// The complex ellipsoid E(r_1, ..., r_n) = { sum |z_j|^2 / r_j^2 <= 1 }.
/// Orientation is not part of the ellipsoid; see UnitaryFrame.
class Ellipsoid {
 public:
  explicit Ellipsoid(std::vector<double> radii);
  Ellipsoid(std::initializer_list<double> radii) : Ellipsoid(std::vector<double>(radii)) {}

  /// E(R, r) = E(R, r, ..., r) in C^n.
  static Ellipsoid axial(std::size_t n, double long_radius, double short_radius);

  std::size_t dim() const { return radii_.size(); }
  std::span<const double> radii() const { return radii_; }
  double radius(std::size_t j) const { return radii_[j]; }
  double max_radius() const;

  /// Membership of an axis-aligned point centred at the origin.
  bool contains(std::span<const Complex> w) const;

  friend bool operator==(const Ellipsoid&, const Ellipsoid&) = default;

 private:
  std::vector<double> radii_;
};

/// n x n unitary matrix, row-major. Construction verifies unitarity.
class UnitaryFrame {
 public:
  static constexpr double kUnitaryTolerance = 1e-12;
  static constexpr double kDeterminantTolerance = 1e-10;

  UnitaryFrame(std::size_t n, std::vector<Complex> entries);

  static UnitaryFrame identity(std::size_t n);
  /// Permutation matrix exchanging coordinates i and j (0-based).
  static UnitaryFrame swap(std::size_t n, std::size_t i, std::size_t j);

  std::size_t dim() const { return n_; }
  const Complex& operator()(std::size_t row, std::size_t col) const { return entries_[row * n_ + col]; }
  std::span<const Complex> entries() const { return entries_; }

  /// out = T * v
  void apply(std::span<const Complex> v, std::span<Complex> out) const;
  /// out = T^* v
  void apply_adjoint(std::span<const Complex> v, std::span<Complex> out) const;

  /// max_{ij} |(T T^*)_{ij} - delta_ij|
  double unitarity_defect() const;
  Complex determinant() const;

  friend bool operator==(const UnitaryFrame&, const UnitaryFrame&) = default;

 private:
  std::size_t n_;
  std::vector<Complex> entries_;
};

/// pi^n prod r_j^2 / n!
double ellipsoid_volume(std::span<const double> radii);

/// True iff T^*(z - center) lies in e.
bool contains(const Ellipsoid& e, const UnitaryFrame& frame, const CPoint& center, const CPoint& z);

/// Haar-distributed unitary: complex Gaussian matrix, Gram-Schmidt on the
/// columns, phases of the triangular factor's diagonal divided out.
UnitaryFrame sample_haar_unitary(std::size_t n, std::uint64_t seed);

/// center + T (r_1 w_1, ..., r_n w_n) for w in the closed unit ball.
CPoint ball_to_ellipsoid(const CPoint& w, const Ellipsoid& e, const UnitaryFrame& frame, const CPoint& center);

/// Inverse of ball_to_ellipsoid; z need not lie inside the ellipsoid.
CPoint ellipsoid_to_ball(const CPoint& z, const Ellipsoid& e, const UnitaryFrame& frame, const CPoint& center);

}  // namespace psh
