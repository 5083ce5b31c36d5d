#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pshcheck/integrate.hpp"
#include "pshcheck/weights.hpp"

namespace psh {

/// Discretization of r -> 0: strictly decreasing radii whose last
/// `tail_window` entries stand in for the limsup.
class LimsupSchedule {
 public:
  LimsupSchedule(std::vector<double> radii, std::size_t tail_window);

  /// start * ratio^k, k = 0..count-1.
  static LimsupSchedule geometric(double start = 1.0, double ratio = 0.7, std::size_t count = 12,
                                  std::size_t tail_window = 4);

  std::span<const double> radii() const { return radii_; }
  std::size_t tail_window() const { return tail_window_; }
  std::span<const double> tail() const {
    return std::span<const double>(radii_).subspan(radii_.size() - tail_window_);
  }

 private:
  std::vector<double> radii_;
  std::size_t tail_window_;
};

struct RadiusQuotient {
  double radius = 0.0;
  double quotient = 0.0;
  double std_error = 0.0;
  /// std_error > |quotient|: excluded from the tail max.
  bool noise_dominated = false;
  /// The underlying mean was -inf; excluded from the tail max.
  bool minus_infinity = false;
};

struct FrameValue {
  std::string label;
  UnitaryFrame frame;
  double value = 0.0;
  double std_error = 0.0;
  bool inconclusive = false;
  std::vector<RadiusQuotient> per_radius;
};

/// Limsup surrogate: value is the max quotient over the non-excluded tail
/// radii. When every tail radius is excluded the estimate is inconclusive and
/// value falls back to the max over the finite quotients (or -inf).
struct OperatorEstimate {
  double value = 0.0;
  double std_error = 0.0;
  double center_value = 0.0;
  bool inconclusive = false;
  std::vector<RadiusQuotient> per_radius;
  std::size_t frames_tried = 1;
  /// d_upper only: one entry per frame, and the index of the minimizer.
  std::vector<FrameValue> frames;
  std::size_t best_frame = 0;
};

/// Classical upper Blaschke-Privalov operator on R^m:
/// 2m limsup (m_u(x0, r) - u(x0)) / r^2.
OperatorEstimate bp_laplacian(const RealEvalFn& u, std::span<const double> x0, const LimsupSchedule& sched,
                              std::size_t budget, std::uint64_t seed);

/// Weighted operator A limsup (n_u^p(x0, r) - u(x0)) / r^2 with
/// A = laplace_constant(p, m), m = x0.size().
OperatorEstimate p_laplacian(const RealEvalFn& u, std::span<const double> x0, const WeightFunction& p,
                             const LimsupSchedule& sched, std::size_t budget, std::uint64_t seed,
                             std::size_t t_nodes = kDefaultRadialNodes);

/// limsup_R limsup_r (M_u(z0, T, E(R, r)) - u(z0)) / R^2. The short radii are
/// relative: at long radius R the inner limsup runs over r = R * s for s in
/// short_sched's tail. For n = 1 the ellipsoid is the disc of radius R.
OperatorEstimate d_upper_T(const EvalFn& u, const CPoint& z0, const UnitaryFrame& frame,
                           const LimsupSchedule& long_sched, const LimsupSchedule& short_sched,
                           std::size_t budget, std::uint64_t seed);

/// Labels and frames d_upper minimizes over: identity, every coordinate swap,
/// then n_haar Haar samples seeded from `seed`.
std::vector<std::pair<std::string, UnitaryFrame>> standard_frames(std::size_t n, bool include_swaps,
                                                                  std::size_t n_haar, std::uint64_t seed);

/// inf over standard_frames(n, true, n_haar, seed) of d_upper_T.
OperatorEstimate d_upper(const EvalFn& u, const CPoint& z0, std::size_t n_haar, const LimsupSchedule& long_sched,
                         const LimsupSchedule& short_sched, std::size_t budget, std::uint64_t seed);

/// Same infimum over an explicit frame list.
OperatorEstimate d_upper_over(const EvalFn& u, const CPoint& z0,
                              const std::vector<std::pair<std::string, UnitaryFrame>>& frames,
                              const LimsupSchedule& long_sched, const LimsupSchedule& short_sched,
                              std::size_t budget, std::uint64_t seed);

}  // namespace psh
