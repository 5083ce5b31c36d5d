#include "pshcheck/criteria.hpp"

#include <cmath>
#include <functional>

namespace psh {
namespace {

struct Comparison {
  double estimate = 0.0;
  double margin = 0.0;
  double std_error = 0.0;
  bool minus_infinity = false;
  bool noise_dominated = false;
};

bool fails(const Comparison& c, double floor, bool two_sided) {
  if (c.minus_infinity) return false;
  const double band = kDecisionSigmas * c.std_error + floor;
  return two_sided ? std::abs(c.margin) > band : c.margin < -band;
}

// Runs `compare` at the configured budget and, for a borderline failure,
// once more at kEscalationFactor times the budget. Returns the budget whose
// result is reported.
std::size_t run_with_escalation(const std::function<Comparison(std::size_t)>& compare, const CheckOptions& options,
                                double floor, bool two_sided, Comparison& out, Verdict& verdict, bool& escalated) {
  out = compare(options.budget);
  escalated = false;
  if (options.escalate && fails(out, floor, two_sided) &&
      std::abs(out.margin) < kEscalationSigmas * out.std_error) {
    ++verdict.counts.escalated;
    escalated = true;
    const std::size_t budget = options.budget * kEscalationFactor;
    out = compare(budget);
    return budget;
  }
  return options.budget;
}

double center_value(double v) {
  if (std::isnan(v)) throw EvaluationError("u(center) is NaN");
  if (v == std::numeric_limits<double>::infinity()) throw EvaluationError("u(center) is +inf");
  return v;
}

void require_fit(const CheckOptions& options, const CPoint& z, const Ellipsoid& e) {
  if (!options.domain) return;
  const DomainBall& d = *options.domain;
  if (d.center.size() != z.dim()) throw ConfigError("domain centre has the wrong dimension");
  double dist2 = 0.0;
  for (std::size_t j = 0; j < z.dim(); ++j) dist2 += std::norm(z[j] - d.center[j]);
  if (std::sqrt(dist2) + e.max_radius() > d.radius)
    throw ConfigError("ellipsoid of max radius " + std::to_string(e.max_radius()) +
                      " around a grid point leaves the declared domain; shrink the radii");
}

std::vector<Complex> coords_of(const CPoint& z) { return {z.coords().begin(), z.coords().end()}; }

void finish(CheckResult& result, bool empty_is_inconclusive, const char* empty_note) {
  Verdict& v = result.verdict;
  if (v.status == Status::Violation) return;
  const bool nothing_tested = v.counts.run == 0;
  const bool all_minus_inf = v.counts.run > 0 && v.counts.minus_infinity_estimates == v.counts.run;
  if ((nothing_tested && empty_is_inconclusive) || all_minus_inf) {
    v.status = Status::Inconclusive;
    v.note = all_minus_inf ? "every estimate was -inf-flagged" : empty_note;
  } else {
    v.status = Status::Consistent;
    if (nothing_tested) v.note = empty_note;
  }
}

CheckResult mean_inequality_check(const EvalFn& u, std::span<const CPoint> grid, const FrameList& frames,
                                  std::span<const Ellipsoid> ellipsoids, const CheckOptions& options) {
  if (frames.empty() || ellipsoids.empty()) throw ConfigError("mean-value check needs frames and ellipsoids");
  CheckResult result;
  Verdict& verdict = result.verdict;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const CPoint& z = grid[i];
    for (const auto& e : ellipsoids) require_fit(options, z, e);
    PointSummary summary;
    summary.index = i;
    summary.center_value = center_value(u(z.coords()));
    if (summary.center_value == kMinusInfinity) {
      ++verdict.counts.skipped_minus_infinity;
      summary.status = "skipped";
      result.points.push_back(summary);
      continue;
    }
    const double floor = rounding_floor(summary.center_value);
    bool first = true, violated = false;
    for (const auto& [label, frame] : frames) {
      for (const auto& e : ellipsoids) {
        auto compare = [&](std::size_t budget) {
          const MeanEstimate m = mean_over_ellipsoid(u, z, frame, e, budget, options.seed);
          Comparison c;
          c.estimate = m.value;
          c.std_error = m.std_error;
          c.minus_infinity = m.value == kMinusInfinity;
          c.margin = c.minus_infinity ? 0.0 : m.value - summary.center_value;
          return c;
        };
        Comparison c;
        bool escalated = false;
        const std::size_t budget = run_with_escalation(compare, options, floor, false, c, verdict, escalated);
        ++verdict.counts.run;
        if (c.minus_infinity) {
          ++verdict.counts.minus_infinity_estimates;
          continue;
        }
        if (first || c.margin < summary.margin) {
          summary.margin = c.margin;
          summary.std_error = c.std_error;
          summary.frame_label = label;
          first = false;
        }
        if (fails(c, floor, false)) {
          violated = true;
          verdict.status = Status::Violation;
          Witness w;
          w.point_index = i;
          w.point = coords_of(z);
          w.frame = frame;
          w.frame_label = label;
          w.radii.assign(e.radii().begin(), e.radii().end());
          w.center_value = summary.center_value;
          w.estimate = c.estimate;
          w.margin = c.margin;
          w.std_error = c.std_error;
          w.seed = options.seed;
          w.budget = budget;
          w.escalated = escalated;
          verdict.witnesses.push_back(std::move(w));
        }
      }
    }
    summary.status = violated ? "violation" : (first ? "inconclusive" : "consistent");
    result.points.push_back(summary);
  }
  finish(result, false, "every grid point lies in u_{-inf}; the inequality holds trivially");
  return result;
}

}  // namespace

CheckResult check_mean_value_b(const EvalFn& u, std::span<const CPoint> grid, const FrameList& frames,
                               std::span<const Ellipsoid> ellipsoids, const CheckOptions& options) {
  return mean_inequality_check(u, grid, frames, ellipsoids, options);
}

std::vector<Ellipsoid> radius_lattice(std::size_t n, double r0, double ratio, std::size_t count) {
  if (!(r0 > 0.0)) throw DomainError("radius_lattice: r0 must be positive");
  if (!(ratio > 0.0 && ratio < 1.0) || count == 0) throw DomainError("radius_lattice: bad ratio or count");
  std::vector<double> radii(count);
  for (std::size_t k = 0; k < count; ++k) radii[k] = r0 * std::pow(ratio, static_cast<double>(k));
  std::vector<Ellipsoid> out;
  for (double R : radii) {
    if (n == 1) {
      out.push_back(Ellipsoid::axial(1, R, R));
      continue;
    }
    for (double r : radii) out.push_back(Ellipsoid::axial(n, R, r));
  }
  return out;
}

CheckResult check_mean_value_d(const EvalFn& u, std::span<const CPoint> grid, const FrameList& frames, double r0,
                               const CheckOptions& options) {
  if (!(r0 > 0.0)) throw DomainError("check_mean_value_d: r0 must be positive");
  if (grid.empty()) return mean_inequality_check(u, grid, frames, radius_lattice(1, r0), options);
  const std::vector<Ellipsoid> lattice = radius_lattice(grid.front().dim(), r0);
  return mean_inequality_check(u, grid, frames, lattice, options);
}

CheckResult check_bp_psh(const EvalFn& u, std::span<const CPoint> grid, const FrameList& frames,
                         const LimsupSchedule& long_sched, const LimsupSchedule& short_sched,
                         const CheckOptions& options) {
  if (frames.empty()) throw ConfigError("check_bp_psh: need at least one frame");
  CheckResult result;
  Verdict& verdict = result.verdict;
  const double r_min = long_sched.tail().back();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const CPoint& z = grid[i];
    PointSummary summary;
    summary.index = i;
    summary.center_value = center_value(u(z.coords()));
    if (summary.center_value == kMinusInfinity) {
      ++verdict.counts.skipped_minus_infinity;
      summary.status = "skipped";
      result.points.push_back(summary);
      continue;
    }
    const double floor = rounding_floor(summary.center_value) / (r_min * r_min);
    const OperatorEstimate est = d_upper_over(u, z, frames, long_sched, short_sched, options.budget, options.seed);
    ++verdict.counts.run;
    summary.margin = est.value;
    summary.std_error = est.std_error;
    summary.frame_label = est.frames[est.best_frame].label;

    // Witness: the frame with the most negative value that fails the band.
    bool violated = false;
    Witness best;
    for (const FrameValue& fv : est.frames) {
      auto compare = [&](std::size_t budget) {
        Comparison c;
        if (budget == options.budget) {
          c.margin = fv.value;
          c.std_error = fv.std_error;
        } else {
          const OperatorEstimate again =
              d_upper_T(u, z, fv.frame, long_sched, short_sched, budget, options.seed);
          c.margin = again.value;
          c.std_error = again.std_error;
        }
        c.estimate = c.margin;
        c.minus_infinity = c.margin == kMinusInfinity;
        return c;
      };
      Comparison c;
      bool escalated = false;
      const std::size_t budget = run_with_escalation(compare, options, floor, false, c, verdict, escalated);
      if (!fails(c, floor, false)) continue;
      if (!violated || c.margin < best.margin) {
        best = Witness{};
        best.point_index = i;
        best.point = coords_of(z);
        best.frame = fv.frame;
        best.frame_label = fv.label;
        best.radii.assign(long_sched.tail().begin(), long_sched.tail().end());
        best.center_value = summary.center_value;
        best.estimate = c.margin;
        best.margin = c.margin;
        best.std_error = c.std_error;
        best.seed = options.seed;
        best.budget = budget;
        best.escalated = escalated;
        violated = true;
      }
    }
    if (violated) {
      verdict.status = Status::Violation;
      summary.status = "violation";
      summary.margin = best.margin;
      summary.std_error = best.std_error;
      summary.frame_label = best.frame_label;
      verdict.witnesses.push_back(std::move(best));
    } else if (est.inconclusive) {
      ++verdict.counts.noise_dominated;
      summary.status = "noise-dominated";
    } else {
      summary.status = "consistent";
    }
    result.points.push_back(summary);
  }
  finish(result, true, "every grid point lies in u_{-inf}; the operator criterion excludes them");
  return result;
}

CheckResult check_subharmonic_p(const RealEvalFn& u, std::span<const std::vector<double>> grid,
                                const WeightFunction& p, const LimsupSchedule& sched, const CheckOptions& options,
                                std::size_t t_nodes) {
  if (!p.nonneg()) throw PreconditionError("check_subharmonic_p: the weight must be nonnegative");
  CheckResult result;
  Verdict& verdict = result.verdict;
  const double r_min = sched.tail().back();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& x = grid[i];
    PointSummary summary;
    summary.index = i;
    summary.center_value = center_value(u(x));
    if (summary.center_value == kMinusInfinity) {
      ++verdict.counts.skipped_minus_infinity;
      summary.status = "skipped";
      result.points.push_back(summary);
      continue;
    }
    const double a = laplace_constant(p, static_cast<double>(x.size()));
    const double floor = rounding_floor(summary.center_value) * a / (r_min * r_min);
    OperatorEstimate est;
    auto compare = [&](std::size_t budget) {
      est = p_laplacian(u, x, p, sched, budget, options.seed, t_nodes);
      Comparison c;
      c.estimate = c.margin = est.value;
      c.std_error = est.std_error;
      c.minus_infinity = est.value == kMinusInfinity && est.inconclusive;
      return c;
    };
    Comparison c;
    bool escalated = false;
    const std::size_t budget = run_with_escalation(compare, options, floor, false, c, verdict, escalated);
    ++verdict.counts.run;
    summary.margin = c.margin;
    summary.std_error = c.std_error;
    if (c.minus_infinity) ++verdict.counts.minus_infinity_estimates;
    if (fails(c, floor, false)) {
      verdict.status = Status::Violation;
      summary.status = "violation";
      Witness w;
      w.point_index = i;
      w.real_point = x;
      w.radii.assign(sched.tail().begin(), sched.tail().end());
      w.center_value = summary.center_value;
      w.estimate = c.estimate;
      w.margin = c.margin;
      w.std_error = c.std_error;
      w.seed = options.seed;
      w.budget = budget;
      w.escalated = escalated;
      verdict.witnesses.push_back(std::move(w));
    } else if (est.inconclusive) {
      ++verdict.counts.noise_dominated;
      summary.status = "noise-dominated";
    } else {
      summary.status = "consistent";
    }
    result.points.push_back(summary);
  }
  finish(result, true, "every grid point lies in u_{-inf}; the operator criterion excludes them");
  return result;
}

CheckResult check_harmonic_p(const RealEvalFn& u, std::span<const std::vector<double>> grid,
                             const WeightFunction& p, std::span<const double> r_list, const CheckOptions& options,
                             std::size_t t_nodes) {
  if (r_list.empty()) throw ConfigError("check_harmonic_p: need at least one radius");
  CheckResult result;
  Verdict& verdict = result.verdict;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& x = grid[i];
    PointSummary summary;
    summary.index = i;
    summary.center_value = center_value(u(x));
    if (summary.center_value == kMinusInfinity) {
      ++verdict.counts.skipped_minus_infinity;
      summary.status = "skipped";
      result.points.push_back(summary);
      continue;
    }
    const double floor = rounding_floor(summary.center_value);
    bool violated = false;
    for (double r : r_list) {
      auto compare = [&](std::size_t budget) {
        const MeanEstimate m = weighted_radial_mean(u, x, r, p, t_nodes, budget, options.seed);
        Comparison c;
        c.estimate = m.value;
        c.std_error = m.std_error;
        c.minus_infinity = m.value == kMinusInfinity;
        c.margin = c.minus_infinity ? 0.0 : m.value - summary.center_value;
        return c;
      };
      Comparison c;
      bool escalated = false;
      const std::size_t budget = run_with_escalation(compare, options, floor, true, c, verdict, escalated);
      ++verdict.counts.run;
      if (c.minus_infinity) {
        ++verdict.counts.minus_infinity_estimates;
        continue;
      }
      if (std::abs(c.margin) >= std::abs(summary.margin)) {
        summary.margin = c.margin;
        summary.std_error = c.std_error;
      }
      if (fails(c, floor, true)) {
        violated = true;
        verdict.status = Status::Violation;
        Witness w;
        w.point_index = i;
        w.real_point = x;
        w.radii = {r};
        w.center_value = summary.center_value;
        w.estimate = c.estimate;
        w.margin = c.margin;
        w.std_error = c.std_error;
        w.seed = options.seed;
        w.budget = budget;
        w.escalated = escalated;
        verdict.witnesses.push_back(std::move(w));
      }
    }
    summary.status = violated ? "violation" : "consistent";
    result.points.push_back(summary);
  }
  finish(result, true, "every grid point lies in u_{-inf}");
  return result;
}

CheckResult monotonicity_scan(const EvalFn& u, const CPoint& z0, const UnitaryFrame& frame, const Ellipsoid& base,
                              std::size_t axis, std::span<const double> steps, const CheckOptions& options) {
  if (axis >= base.dim()) throw DomainError("monotonicity_scan: axis out of range");
  if (steps.size() < 2) throw DomainError("monotonicity_scan: need at least two radius steps");
  for (std::size_t k = 1; k < steps.size(); ++k)
    if (!(steps[k] > steps[k - 1])) throw DomainError("monotonicity_scan: steps must increase strictly");

  auto ellipsoid_at = [&](double s) {
    std::vector<double> radii(base.radii().begin(), base.radii().end());
    radii[axis] = s;
    return Ellipsoid(std::move(radii));
  };
  for (double s : steps) require_fit(options, z0, ellipsoid_at(s));

  CheckResult result;
  Verdict& verdict = result.verdict;
  auto mean_at = [&](double s, std::size_t budget) {
    return mean_over_ellipsoid(u, z0, frame, ellipsoid_at(s), budget, options.seed);
  };
  std::vector<MeanEstimate> means;
  for (double s : steps) means.push_back(mean_at(s, options.budget));

  for (std::size_t k = 0; k + 1 < steps.size(); ++k) {
    PointSummary summary;
    summary.index = k;
    summary.center_value = means[k].value;
    auto compare = [&](std::size_t budget) {
      const MeanEstimate a = budget == options.budget ? means[k] : mean_at(steps[k], budget);
      const MeanEstimate b = budget == options.budget ? means[k + 1] : mean_at(steps[k + 1], budget);
      Comparison c;
      c.minus_infinity = a.value == kMinusInfinity || b.value == kMinusInfinity;
      c.estimate = b.value;
      c.margin = c.minus_infinity ? 0.0 : b.value - a.value;
      c.std_error = std::hypot(a.std_error, b.std_error);
      return c;
    };
    const double floor = rounding_floor(std::max(std::abs(means[k].value), std::abs(means[k + 1].value)));
    Comparison c;
    bool escalated = false;
    const std::size_t budget = run_with_escalation(compare, options, floor, false, c, verdict, escalated);
    ++verdict.counts.run;
    summary.margin = c.margin;
    summary.std_error = c.std_error;
    if (c.minus_infinity) {
      ++verdict.counts.minus_infinity_estimates;
      summary.status = "inconclusive";
    } else if (fails(c, floor, false)) {
      verdict.status = Status::Violation;
      summary.status = "violation";
      Witness w;
      w.point_index = k;
      w.point = coords_of(z0);
      w.frame = frame;
      w.frame_label = "scan";
      w.radii = {steps[k], steps[k + 1]};
      w.center_value = means[k].value;
      w.estimate = c.estimate;
      w.margin = c.margin;
      w.std_error = c.std_error;
      w.seed = options.seed;
      w.budget = budget;
      w.escalated = escalated;
      verdict.witnesses.push_back(std::move(w));
    } else {
      summary.status = "consistent";
    }
    result.points.push_back(summary);
  }
  finish(result, true, "no comparisons were made");
  return result;
}

}  // namespace psh
