#include "pshcheck/integrate.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "pshcheck/parallel.hpp"
#include "pshcheck/quadrature.hpp"
#include "pshcheck/random.hpp"

namespace psh {
namespace {

constexpr std::size_t kBlockSize = 1024;

// Welford accumulator; blocks are merged in index order (Chan et al.), so the
// result depends only on the block partition, never on the thread count.
struct Accumulator {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t minus_infinity = 0;

  void add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  void merge(const Accumulator& other) {
    minus_infinity += other.minus_infinity;
    if (other.count == 0) return;
    if (count == 0) {
      count = other.count;
      mean = other.mean;
      m2 = other.m2;
      return;
    }
    const double n_a = static_cast<double>(count);
    const double n_b = static_cast<double>(other.count);
    const double total = n_a + n_b;
    const double delta = other.mean - mean;
    mean += delta * n_b / total;
    m2 += other.m2 + delta * delta * n_a * n_b / total;
    count += other.count;
  }
};

std::string describe_point(std::span<const double> x) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ')';
  return os.str();
}

std::string describe_point(std::span<const Complex> z) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < z.size(); ++i) os << (i ? ", " : "") << z[i];
  os << ')';
  return os.str();
}

template <typename Point>
double checked(double v, const Point& at) {
  if (std::isnan(v)) throw EvaluationError("function evaluated to NaN at " + describe_point(at));
  if (v == std::numeric_limits<double>::infinity())
    throw EvaluationError("function evaluated to +inf at " + describe_point(at));
  return v;
}

// draw(rng, scratch) returns the orbit average for one draw (possibly -inf).
template <typename Scratch, typename Draw>
MeanEstimate run_estimator(std::size_t draws, std::uint64_t seed, rng::Stream stream, Draw draw) {
  const std::size_t blocks = (draws + kBlockSize - 1) / kBlockSize;
  std::vector<Accumulator> partial(blocks);
  parallel_for(blocks, [&](std::size_t b) {
    Scratch scratch;
    Accumulator acc;
    const std::size_t begin = b * kBlockSize;
    const std::size_t end = std::min(draws, begin + kBlockSize);
    for (std::size_t i = begin; i < end; ++i) {
      rng::CounterRng gen(seed, stream, i);
      const double v = draw(gen, scratch);
      if (v == kMinusInfinity)
        ++acc.minus_infinity;
      else
        acc.add(v);
    }
    partial[b] = acc;
  });
  Accumulator total;
  for (const auto& p : partial) total.merge(p);

  MeanEstimate est;
  est.samples = draws;
  est.minus_infinity_samples = total.minus_infinity;
  est.hit_minus_infinity = total.minus_infinity > 0;
  if (total.minus_infinity > MeanEstimate::kIgnoredMinusInfinity || total.count == 0) {
    est.value = kMinusInfinity;
    est.std_error = 0.0;
    return est;
  }
  est.value = total.mean;
  est.std_error = total.count > 1
                      ? std::sqrt(total.m2 / static_cast<double>(total.count - 1) / static_cast<double>(total.count))
                      : std::numeric_limits<double>::infinity();
  return est;
}

void require_budget(std::size_t budget) {
  if (budget < 2) throw DomainError("sample budget must be at least 2");
}

void require_radius(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("radius must be positive and finite");
}

void require_finite_center(std::span<const double> center) {
  if (center.empty()) throw DomainError("center must have dimension >= 1");
  for (double c : center)
    if (!std::isfinite(c)) throw DomainError("center coordinates must be finite");
}

struct RealScratch {
  std::vector<double> dir;
  std::vector<double> x;
};

// Shared body of sphere_mean and ball_mean: antipodal pair center +- r d.
MeanEstimate antipodal_mean(const RealEvalFn& u, std::span<const double> center, double r, std::size_t budget,
                            std::uint64_t seed, bool solid) {
  require_budget(budget);
  require_radius(r);
  require_finite_center(center);
  const std::size_t m = center.size();
  const rng::Stream stream = solid ? rng::Stream::Ball : rng::Stream::Sphere;
  return run_estimator<RealScratch>(budget, seed, stream, [&](rng::CounterRng& gen, RealScratch& s) {
    s.dir.resize(m);
    s.x.resize(m);
    if (solid)
      rng::uniform_ball(gen, s.dir);
    else
      rng::uniform_sphere(gen, s.dir);
    double total = 0.0;
    for (double sign : {1.0, -1.0}) {
      for (std::size_t j = 0; j < m; ++j) s.x[j] = center[j] + sign * r * s.dir[j];
      const double v = checked(u(std::span<const double>(s.x)), std::span<const double>(s.x));
      if (v == kMinusInfinity) return kMinusInfinity;
      total += v;
    }
    return 0.5 * total;
  });
}

}  // namespace

MeanEstimate mean_over_ellipsoid(const EvalFn& u, const CPoint& center, const UnitaryFrame& frame,
                                 const Ellipsoid& e, std::size_t budget, std::uint64_t seed) {
  require_budget(budget);
  const std::size_t n = center.dim();
  if (frame.dim() != n || e.dim() != n) throw DomainError("mean_over_ellipsoid: dimension mismatch");

  // map = T diag(r): z = center + map w
  std::vector<Complex> map(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) map[i * n + k] = frame(i, k) * e.radius(k);

  struct Scratch {
    std::vector<double> w;
    std::vector<Complex> v;
    std::vector<Complex> z;
  };
  static constexpr Complex kPhases[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
  const auto c = center.coords();
  return run_estimator<Scratch>(budget, seed, rng::Stream::Ellipsoid, [&](rng::CounterRng& gen, Scratch& s) {
    s.w.resize(2 * n);
    s.v.resize(n);
    s.z.resize(n);
    rng::uniform_ball(gen, s.w);
    for (std::size_t i = 0; i < n; ++i) {
      Complex acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += map[i * n + k] * Complex(s.w[2 * k], s.w[2 * k + 1]);
      s.v[i] = acc;
    }
    double total = 0.0;
    for (const Complex& phase : kPhases) {
      for (std::size_t i = 0; i < n; ++i) s.z[i] = c[i] + phase * s.v[i];
      const double val = checked(u(std::span<const Complex>(s.z)), std::span<const Complex>(s.z));
      if (val == kMinusInfinity) return kMinusInfinity;
      total += val;
    }
    return 0.25 * total;
  });
}

MeanEstimate sphere_mean(const RealEvalFn& u, std::span<const double> center, double r, std::size_t budget,
                         std::uint64_t seed) {
  return antipodal_mean(u, center, r, budget, seed, false);
}

MeanEstimate ball_mean(const RealEvalFn& u, std::span<const double> center, double r, std::size_t budget,
                       std::uint64_t seed) {
  return antipodal_mean(u, center, r, budget, seed, true);
}

MeanEstimate weighted_radial_mean(const RealEvalFn& u, std::span<const double> center, double r,
                                  const WeightFunction& p, std::size_t t_nodes, std::size_t budget,
                                  std::uint64_t seed) {
  require_radius(r);
  if (!(std::abs(p.normalization() - 1.0) <= 1e-8))
    throw DomainError("weighted_radial_mean: weight is not normalized");
  if (t_nodes == 0) throw DomainError("weighted_radial_mean: need at least one quadrature node");
  const QuadratureRule rule = gauss_legendre(t_nodes, 0.0, 1.0);
  MeanEstimate out;
  for (std::size_t i = 0; i < t_nodes; ++i) {
    const double weight = rule.weights[i] * p(rule.nodes[i]);
    const MeanEstimate m = sphere_mean(u, center, r * rule.nodes[i], budget, seed);
    out.samples += m.samples;
    out.minus_infinity_samples += m.minus_infinity_samples;
    out.hit_minus_infinity = out.hit_minus_infinity || m.hit_minus_infinity;
    if (m.value == kMinusInfinity) {
      if (weight != 0.0) out.value = kMinusInfinity;
      continue;
    }
    if (out.value != kMinusInfinity) out.value += weight * m.value;
    out.std_error += std::abs(weight) * m.std_error;
  }
  if (out.value == kMinusInfinity) out.std_error = 0.0;
  return out;
}

RealEvalFn as_real_function(EvalFn u) {
  return [u = std::move(u)](std::span<const double> x) {
    const std::size_t n = (x.size() + 1) / 2;
    Complex small[16];
    std::vector<Complex> big;
    std::span<Complex> z;
    if (n <= 16) {
      z = std::span<Complex>(small, n);
    } else {
      big.resize(n);
      z = big;
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double im = 2 * j + 1 < x.size() ? x[2 * j + 1] : 0.0;
      z[j] = Complex(x[2 * j], im);
    }
    return u(std::span<const Complex>(z.data(), n));
  };
}

std::vector<double> to_real(const CPoint& z) {
  std::vector<double> x(2 * z.dim());
  for (std::size_t j = 0; j < z.dim(); ++j) {
    x[2 * j] = z[j].real();
    x[2 * j + 1] = z[j].imag();
  }
  return x;
}

CPoint to_complex(std::span<const double> x) {
  if (x.empty()) throw DomainError("to_complex: empty point");
  std::vector<Complex> z((x.size() + 1) / 2);
  for (std::size_t j = 0; j < z.size(); ++j)
    z[j] = Complex(x[2 * j], 2 * j + 1 < x.size() ? x[2 * j + 1] : 0.0);
  return CPoint(std::move(z));
}

}  // namespace psh
