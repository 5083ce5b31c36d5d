#include "pshcheck/weights.hpp"

#include <cmath>
#include <sstream>

#include "pshcheck/common.hpp"
#include "pshcheck/quadrature.hpp"

namespace psh {
namespace {

constexpr std::size_t kNormalizationNodes = 64;
constexpr int kSignSamples = 1024;

const QuadratureRule& normalization_rule() {
  static const QuadratureRule rule = gauss_legendre(kNormalizationNodes, 0.0, 1.0);
  return rule;
}

std::string format_number(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

WeightFunction::WeightFunction(std::function<double(double)> fn, WeightFamily family, std::string description)
    : fn_(std::move(fn)), family_(family), description_(std::move(description)) {
  const auto& rule = normalization_rule();
  double total = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double v = fn_(rule.nodes[i]);
    if (!std::isfinite(v)) throw DomainError("weight function is not finite on [0, 1]");
    if (v < 0.0) nonneg_ = false;
    total += rule.weights[i] * v;
  }
  for (int i = 0; i <= kSignSamples && nonneg_; ++i)
    if (fn_(static_cast<double>(i) / kSignSamples) < 0.0) nonneg_ = false;
  // m t^{m-1} integrates to 1 in closed form; quadrature is inexact for fractional m.
  if (family_ == WeightFamily::Ball) total = 1.0;
  normalization_ = total;
  if (!(std::abs(total - 1.0) <= kNormalizationTolerance))
    throw DomainError("weight function " + description_ + " integrates to " + format_number(total) +
                      ", expected 1");
}

WeightFunction WeightFunction::custom(std::function<double(double)> fn, std::string description) {
  return WeightFunction(std::move(fn), WeightFamily::Custom, std::move(description));
}

WeightFunction ball_weight(double m) {
  if (!(m >= 1.0) || !std::isfinite(m)) throw DomainError("ball_weight: dimension m must be >= 1");
  WeightFunction p([m](double t) { return m * std::pow(t, m - 1.0); }, WeightFamily::Ball,
                   "ball(m=" + format_number(m) + ")");
  p.param_m_ = m;
  return p;
}

WeightFunction ellipsoid_slice_weight(int k, int l) {
  if (k < 1 || l < 0) throw DomainError("ellipsoid_slice_weight: need k >= 1 and l >= 0");
  // 2 (k+l)! / (l! (k-1)!) = 2 * prod_{j=k}^{k+l} j / l!
  double coeff = 2.0;
  for (int j = k; j <= k + l; ++j) coeff *= j;
  for (int j = 2; j <= l; ++j) coeff /= j;
  WeightFunction p(
      [coeff, k, l](double t) {
        const double s = 1.0 - t * t;
        double v = coeff * std::pow(t, 2 * k - 1);
        for (int j = 0; j < l; ++j) v *= s;
        return v;
      },
      WeightFamily::EllipsoidSlice, "slice(k=" + std::to_string(k) + ",l=" + std::to_string(l) + ")");
  p.param_k_ = k;
  p.param_l_ = l;
  return p;
}

double weight_moment(const WeightFunction& p, int power) {
  // t^{m-1} is not smooth at 0 for fractional m; use the closed form.
  if (p.family() == WeightFamily::Ball) return p.ball_dimension() / (p.ball_dimension() + power);
  const auto& rule = normalization_rule();
  double total = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    total += rule.weights[i] * std::pow(rule.nodes[i], power) * p(rule.nodes[i]);
  return total;
}

double laplace_constant(const WeightFunction& p, double m) {
  if (!(m >= 1.0)) throw DomainError("laplace_constant: dimension m must be >= 1");
  const double second = weight_moment(p, 2);
  // p integrates to 1, so a second moment at round-off level means it vanishes.
  if (!(std::abs(second) > 1e-12) || !std::isfinite(second))
    throw DomainError("laplace_constant: degenerate weight, int t^2 p(t) dt = 0");
  return 2.0 * m / second;
}

}  // namespace psh
