#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

#include "pshcheck/geometry.hpp"
#include "pshcheck/weights.hpp"

namespace psh {

/// u : C^n -> [-inf, inf). Must be re-entrant; samplers call it concurrently.
using EvalFn = std::function<double(std::span<const Complex>)>;
/// u : R^m -> [-inf, inf), used by the sphere / ball / weighted radial means.
using RealEvalFn = std::function<double(std::span<const double>)>;

inline constexpr std::size_t kDefaultBudget = 100000;

/// Monte Carlo estimate of a mean value.
///
/// Draws are symmetrized orbits (see the individual samplers); `samples` counts
/// draws and `std_error` is the sample standard deviation of the orbit
/// averages divided by sqrt(draws used).
///
/// -inf handling: draws whose orbit hit u = -inf are set aside. Up to
/// kIgnoredMinusInfinity of them are dropped from the estimate (the singular
/// set has measure zero for log-type functions); beyond that the estimate is
/// -inf. Either way hit_minus_infinity records the event.
struct MeanEstimate {
  static constexpr std::size_t kIgnoredMinusInfinity = 2;

  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  bool hit_minus_infinity = false;
  std::size_t minus_infinity_samples = 0;
};

/// Volume mean of u over center + T E. Each draw w is uniform in the unit ball
/// of C^n and contributes the average of u over the circle orbit
/// {w, iw, -w, -iw} mapped into the ellipsoid (the ellipsoid is invariant under
/// w -> e^{i theta} w, so the estimator stays unbiased).
MeanEstimate mean_over_ellipsoid(const EvalFn& u, const CPoint& center, const UnitaryFrame& frame,
                                 const Ellipsoid& e, std::size_t budget, std::uint64_t seed);

/// Mean of u over the sphere S(center, r) in R^m; antipodal pairs per draw.
MeanEstimate sphere_mean(const RealEvalFn& u, std::span<const double> center, double r, std::size_t budget,
                         std::uint64_t seed);

/// Volume mean of u over the ball B(center, r) in R^m; antipodal pairs per draw.
MeanEstimate ball_mean(const RealEvalFn& u, std::span<const double> center, double r, std::size_t budget,
                       std::uint64_t seed);

inline constexpr std::size_t kDefaultRadialNodes = 16;

/// int_0^1 p(t) m_u(center, r t) dt by Gauss-Legendre in t with t_nodes points;
/// each node is a sphere_mean with `budget` draws and the same seed. The
/// reported error is sum_i |w_i p(t_i)| std_error_i.
MeanEstimate weighted_radial_mean(const RealEvalFn& u, std::span<const double> center, double r,
                                  const WeightFunction& p, std::size_t t_nodes, std::size_t budget,
                                  std::uint64_t seed);

/// Embeds C^n into R^{2n} as (re z1, im z1, re z2, ...), and back.
RealEvalFn as_real_function(EvalFn u);
std::vector<double> to_real(const CPoint& z);
CPoint to_complex(std::span<const double> x);

}  // namespace psh
