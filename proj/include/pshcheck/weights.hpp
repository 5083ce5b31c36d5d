#pragma once

#include <functional>
#include <string>

namespace psh {

enum class WeightFamily { Ball, EllipsoidSlice, Custom };

/// A radial weight p on [0, 1] with unit integral. The integral is checked at
/// construction with a 64-node Gauss-Legendre rule (exact for the polynomial
/// families) and must equal 1 within kNormalizationTolerance.
class WeightFunction {
 public:
  static constexpr double kNormalizationTolerance = 1e-10;

  /// Wraps an arbitrary weight; throws DomainError unless it integrates to 1.
  static WeightFunction custom(std::function<double(double)> fn, std::string description = "custom");

  double operator()(double t) const { return fn_(t); }

  WeightFamily family() const { return family_; }
  /// Numerically computed integral over [0, 1].
  double normalization() const { return normalization_; }
  /// p(t) >= 0 on a dense sample of [0, 1].
  bool nonneg() const { return nonneg_; }
  const std::string& description() const { return description_; }

  /// Family parameters: m for Ball, (k, l) for EllipsoidSlice.
  double ball_dimension() const { return param_m_; }
  int slice_k() const { return param_k_; }
  int slice_l() const { return param_l_; }

 private:
  WeightFunction(std::function<double(double)> fn, WeightFamily family, std::string description);

  friend WeightFunction ball_weight(double m);
  friend WeightFunction ellipsoid_slice_weight(int k, int l);

  std::function<double(double)> fn_;
  WeightFamily family_;
  std::string description_;
  double normalization_ = 0.0;
  bool nonneg_ = true;
  double param_m_ = 0.0;
  int param_k_ = 0;
  int param_l_ = 0;
};

/// p(t) = m t^{m-1}: turns the weighted radial mean into the ball mean in R^m.
WeightFunction ball_weight(double m);

/// p(t) = 2 (k+l)! / (l! (k-1)!) (1 - t^2)^l t^{2k-1}, the radial profile of
/// the weighted ball mean with weight (1 - |z|^2/r^2)^l on C^k.
WeightFunction ellipsoid_slice_weight(int k, int l);

/// Integral of t^power p(t) over [0, 1].
double weight_moment(const WeightFunction& p, int power);

/// Laplacian scaling constant A = 2m / int t^2 p(t) dt.
/// Throws DomainError when the second moment vanishes.
double laplace_constant(const WeightFunction& p, double m);

}  // namespace psh
