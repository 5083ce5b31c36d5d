#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pshcheck/geometry.hpp"

namespace psh {

enum class Status { Consistent, Violation, Inconclusive };

std::string_view to_string(Status s);

/// Everything needed to replay one failing (or reported) comparison.
struct Witness {
  std::size_t point_index = 0;
  std::vector<Complex> point;      // complex-space checks
  std::vector<double> real_point;  // real-space checks
  std::optional<UnitaryFrame> frame;
  std::string frame_label;
  /// Ellipsoid radii, radius pair, schedule radii, or r-list entry involved.
  std::vector<double> radii;
  double center_value = 0.0;
  double estimate = 0.0;
  /// estimate - u(point) for mean checks, the operator value for operator checks.
  double margin = 0.0;
  double std_error = 0.0;
  std::uint64_t seed = 0;
  std::size_t budget = 0;
  bool escalated = false;
};

struct CheckCounts {
  std::size_t run = 0;
  std::size_t skipped_minus_infinity = 0;
  std::size_t noise_dominated = 0;
  std::size_t minus_infinity_estimates = 0;
  std::size_t escalated = 0;
};

struct Verdict {
  Status status = Status::Consistent;
  std::vector<Witness> witnesses;
  CheckCounts counts;
  std::string note;
};

/// Decision band: a one-sided inequality estimate >= value fails only when
/// margin < -(sigmas * std_error + floor). The floor absorbs round-off when
/// the estimator is exact (std_error == 0).
inline constexpr double kDecisionSigmas = 3.0;
inline constexpr double kEscalationSigmas = 6.0;
inline constexpr std::size_t kEscalationFactor = 10;
double rounding_floor(double scale);

}  // namespace psh
