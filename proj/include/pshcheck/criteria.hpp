#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pshcheck/integrate.hpp"
#include "pshcheck/operators.hpp"
#include "pshcheck/verdict.hpp"
#include "pshcheck/weights.hpp"

namespace psh {

/// Closed ball the function is declared on. Ellipsoids must fit inside it.
struct DomainBall {
  std::vector<Complex> center;
  double radius = 0.0;
};

struct CheckOptions {
  std::size_t budget = kDefaultBudget;
  std::uint64_t seed = 0;
  /// Re-run borderline violations (|margin| < 6 std_error) once at 10x budget.
  bool escalate = true;
  std::optional<DomainBall> domain;
};

using FrameList = std::vector<std::pair<std::string, UnitaryFrame>>;

/// Per-point summary kept alongside the verdict for reports.
struct PointSummary {
  std::size_t index = 0;
  std::string status;  // consistent | violation | skipped | noise-dominated | inconclusive
  double center_value = 0.0;
  /// Most negative margin (one-sided checks) or largest |margin| (two-sided).
  double margin = 0.0;
  double std_error = 0.0;
  std::string frame_label;
};

struct CheckResult {
  Verdict verdict;
  std::vector<PointSummary> points;
};

/// u(z0) <= M_u(z0, T, E) for every grid point, frame and ellipsoid.
CheckResult check_mean_value_b(const EvalFn& u, std::span<const CPoint> grid, const FrameList& frames,
                               std::span<const Ellipsoid> ellipsoids, const CheckOptions& options);

/// Lattice of (R, r) pairs r0 * ratio^i, r0 * ratio^j used by check_mean_value_d.
std::vector<Ellipsoid> radius_lattice(std::size_t n, double r0, double ratio = 0.5, std::size_t count = 3);

/// u(z0) <= M_u(z0, T, E(R, r)) for all (R, r) on radius_lattice(n, r0).
CheckResult check_mean_value_d(const EvalFn& u, std::span<const CPoint> grid, const FrameList& frames, double r0,
                               const CheckOptions& options);

/// The ellipsoid operator criterion: at every point off u_{-inf} the
/// infimum over frames of d_upper_T must be >= -3 std_error.
CheckResult check_bp_psh(const EvalFn& u, std::span<const CPoint> grid, const FrameList& frames,
                         const LimsupSchedule& long_sched, const LimsupSchedule& short_sched,
                         const CheckOptions& options);

/// p-Laplacian criterion on R^m; p must be nonnegative.
CheckResult check_subharmonic_p(const RealEvalFn& u, std::span<const std::vector<double>> grid,
                                const WeightFunction& p, const LimsupSchedule& sched, const CheckOptions& options,
                                std::size_t t_nodes = kDefaultRadialNodes);

/// Two-sided n_u^p(x0, r) = u(x0) for each r in r_list.
CheckResult check_harmonic_p(const RealEvalFn& u, std::span<const std::vector<double>> grid,
                             const WeightFunction& p, std::span<const double> r_list, const CheckOptions& options,
                             std::size_t t_nodes = kDefaultRadialNodes);

/// M_u(z0, T, E) along increasing radius `axis` (0-based), other radii taken
/// from `base`. Violation iff a consecutive pair decreases by more than
/// 3 sqrt(se_a^2 + se_b^2).
CheckResult monotonicity_scan(const EvalFn& u, const CPoint& z0, const UnitaryFrame& frame, const Ellipsoid& base,
                              std::size_t axis, std::span<const double> steps, const CheckOptions& options);

}  // namespace psh
