#include "pshcheck/operators.hpp"

#include <cmath>

#include "pshcheck/random.hpp"

namespace psh {
namespace {

double center_value_or_throw(double v) {
  if (std::isnan(v)) throw EvaluationError("operator: u(center) is NaN");
  if (v == kMinusInfinity) throw PreconditionError("operator: u(center) = -inf; the point lies in u_{-inf}");
  if (!std::isfinite(v)) throw EvaluationError("operator: u(center) is +inf");
  return v;
}

RadiusQuotient make_quotient(double radius, const MeanEstimate& m, double center, double scale) {
  RadiusQuotient q;
  q.radius = radius;
  if (m.value == kMinusInfinity) {
    q.minus_infinity = true;
    q.quotient = kMinusInfinity;
    return q;
  }
  q.quotient = scale * (m.value - center);
  q.std_error = scale * m.std_error;
  q.noise_dominated = q.std_error > std::abs(q.quotient);
  return q;
}

void finalize_tail(OperatorEstimate& est) {
  bool found = false;
  for (const auto& q : est.per_radius) {
    if (q.noise_dominated || q.minus_infinity) continue;
    if (!found || q.quotient > est.value) {
      est.value = q.quotient;
      est.std_error = q.std_error;
      found = true;
    }
  }
  if (found) return;
  est.inconclusive = true;
  est.value = kMinusInfinity;
  est.std_error = 0.0;
  for (const auto& q : est.per_radius) {
    if (q.minus_infinity) continue;
    if (est.value == kMinusInfinity || q.quotient > est.value) {
      est.value = q.quotient;
      est.std_error = q.std_error;
    }
  }
}

void require_budget(std::size_t budget) {
  if (budget < 2) throw DomainError("sample budget must be at least 2");
}

}  // namespace

LimsupSchedule::LimsupSchedule(std::vector<double> radii, std::size_t tail_window)
    : radii_(std::move(radii)), tail_window_(tail_window) {
  if (radii_.empty()) throw DomainError("LimsupSchedule: need at least one radius");
  if (tail_window_ < 1 || tail_window_ > radii_.size())
    throw DomainError("LimsupSchedule: tail window must be in [1, count]");
  for (std::size_t i = 0; i < radii_.size(); ++i) {
    if (!(radii_[i] > 0.0) || !std::isfinite(radii_[i]))
      throw DomainError("LimsupSchedule: radii must be positive");
    if (i > 0 && !(radii_[i] < radii_[i - 1])) throw DomainError("LimsupSchedule: radii must strictly decrease");
  }
}

LimsupSchedule LimsupSchedule::geometric(double start, double ratio, std::size_t count, std::size_t tail_window) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw DomainError("LimsupSchedule: ratio must lie in (0, 1)");
  std::vector<double> radii(count);
  double r = start;
  for (auto& x : radii) {
    x = r;
    r *= ratio;
  }
  return LimsupSchedule(std::move(radii), tail_window);
}

OperatorEstimate bp_laplacian(const RealEvalFn& u, std::span<const double> x0, const LimsupSchedule& sched,
                              std::size_t budget, std::uint64_t seed) {
  require_budget(budget);
  OperatorEstimate est;
  est.center_value = center_value_or_throw(u(x0));
  const double m = static_cast<double>(x0.size());
  for (double r : sched.tail()) {
    const MeanEstimate mean = sphere_mean(u, x0, r, budget, seed);
    est.per_radius.push_back(make_quotient(r, mean, est.center_value, 2.0 * m / (r * r)));
  }
  finalize_tail(est);
  return est;
}

OperatorEstimate p_laplacian(const RealEvalFn& u, std::span<const double> x0, const WeightFunction& p,
                             const LimsupSchedule& sched, std::size_t budget, std::uint64_t seed,
                             std::size_t t_nodes) {
  require_budget(budget);
  const double a = laplace_constant(p, static_cast<double>(x0.size()));
  OperatorEstimate est;
  est.center_value = center_value_or_throw(u(x0));
  for (double r : sched.tail()) {
    const MeanEstimate mean = weighted_radial_mean(u, x0, r, p, t_nodes, budget, seed);
    est.per_radius.push_back(make_quotient(r, mean, est.center_value, a / (r * r)));
  }
  finalize_tail(est);
  return est;
}

OperatorEstimate d_upper_T(const EvalFn& u, const CPoint& z0, const UnitaryFrame& frame,
                           const LimsupSchedule& long_sched, const LimsupSchedule& short_sched,
                           std::size_t budget, std::uint64_t seed) {
  require_budget(budget);
  if (frame.dim() != z0.dim()) throw DomainError("d_upper_T: dimension mismatch");
  const std::size_t n = z0.dim();
  OperatorEstimate est;
  est.center_value = center_value_or_throw(u(z0.coords()));
  for (double R : long_sched.tail()) {
    // Inner limsup over r at fixed R: max of the means over the short tail.
    MeanEstimate inner;
    bool have_inner = false;
    const std::size_t inner_count = n == 1 ? 1 : short_sched.tail_window();
    for (std::size_t k = 0; k < inner_count; ++k) {
      const double r = n == 1 ? R : R * short_sched.tail()[k];
      const MeanEstimate m = mean_over_ellipsoid(u, z0, frame, Ellipsoid::axial(n, R, r), budget, seed);
      if (m.value == kMinusInfinity) continue;
      if (!have_inner || m.value > inner.value) {
        inner = m;
        have_inner = true;
      }
    }
    if (!have_inner) inner.value = kMinusInfinity;
    est.per_radius.push_back(make_quotient(R, inner, est.center_value, 1.0 / (R * R)));
  }
  finalize_tail(est);
  return est;
}

std::vector<std::pair<std::string, UnitaryFrame>> standard_frames(std::size_t n, bool include_swaps,
                                                                  std::size_t n_haar, std::uint64_t seed) {
  std::vector<std::pair<std::string, UnitaryFrame>> frames;
  frames.emplace_back("identity", UnitaryFrame::identity(n));
  if (include_swaps)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        frames.emplace_back("swap(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")",
                            UnitaryFrame::swap(n, i, j));
  for (std::size_t k = 0; k < n_haar; ++k)
    frames.emplace_back("haar#" + std::to_string(k), sample_haar_unitary(n, rng::derive_seed(seed, 0x4a11, k)));
  return frames;
}

OperatorEstimate d_upper_over(const EvalFn& u, const CPoint& z0,
                              const std::vector<std::pair<std::string, UnitaryFrame>>& frames,
                              const LimsupSchedule& long_sched, const LimsupSchedule& short_sched,
                              std::size_t budget, std::uint64_t seed) {
  if (frames.empty()) throw DomainError("d_upper: need at least one frame");
  OperatorEstimate best;
  bool have_best = false;
  std::vector<FrameValue> values;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    OperatorEstimate e = d_upper_T(u, z0, frames[i].second, long_sched, short_sched, budget, seed);
    values.push_back(FrameValue{frames[i].first, frames[i].second, e.value, e.std_error, e.inconclusive, e.per_radius});
    if (!have_best || e.value < best.value) {
      best = std::move(e);
      best.best_frame = i;
      have_best = true;
    }
  }
  best.frames = std::move(values);
  best.frames_tried = frames.size();
  return best;
}

OperatorEstimate d_upper(const EvalFn& u, const CPoint& z0, std::size_t n_haar, const LimsupSchedule& long_sched,
                         const LimsupSchedule& short_sched, std::size_t budget, std::uint64_t seed) {
  return d_upper_over(u, z0, standard_frames(z0.dim(), true, n_haar, seed), long_sched, short_sched, budget, seed);
}

}  // namespace psh
