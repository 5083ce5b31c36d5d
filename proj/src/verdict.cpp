#include "pshcheck/verdict.hpp"

#include <cmath>

namespace psh {

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Consistent: return "consistent";
    case Status::Violation: return "violation";
    case Status::Inconclusive: return "inconclusive";
  }
  return "?";
}

double rounding_floor(double scale) { return 1e-12 * (1.0 + (std::isfinite(scale) ? std::abs(scale) : 0.0)); }

}  // namespace psh
