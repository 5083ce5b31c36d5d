#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "pshcheck/geometry.hpp"

namespace psh::cli {

inline constexpr int kExitConsistent = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitError = 3;
inline constexpr int kExitUsage = 64;

inline constexpr std::string_view kReportSchema = "pshcheck.report/1";

/// Grid specs: "origin", "points:a,b;c,d", "box:LO:HI:K" (K points per real
/// axis), "random:N:LO:HI" (uniform in the cube, seeded). Coordinates of
/// explicit points are constant expressions such as 0.3+0.1*i.
std::vector<CPoint> parse_complex_grid(std::string_view spec, std::size_t n, std::uint64_t seed);
std::vector<std::vector<double>> parse_real_grid(std::string_view spec, std::size_t m, std::uint64_t seed);

/// Entry point shared by the executable and tests. args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace psh::cli
