#include "pshcheck/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace psh {
namespace {

constexpr int kMaxJacobiSweeps = 100;
constexpr double kJacobiTolerance = 1e-12;

double eval_checked(const EvalFn& u, std::span<const Complex> z) {
  const double v = u(z);
  if (v == kMinusInfinity) throw OracleUnavailable("levi_form: stencil reached u = -inf");
  if (!std::isfinite(v)) throw EvaluationError("levi_form: non-finite value in stencil");
  return v;
}

std::vector<double> jacobi_eigenvalues(std::size_t n, std::vector<double> a) {
  for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
    double off = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) (i == j ? scale : off) += a[i * n + j] * a[i * n + j];
    if (off <= kJacobiTolerance * kJacobiTolerance * std::max(scale, 1e-300)) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p], akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k], aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a[i * n + i];
  std::sort(eig.begin(), eig.end());
  return eig;
}

}  // namespace

double LeviForm::max_abs() const {
  double m = 0.0;
  for (const auto& c : matrix) m = std::max(m, std::abs(c));
  return m;
}

double default_step(double point_norm) { return 1e-4 * (1.0 + point_norm); }

LeviForm levi_form(const EvalFn& u, const CPoint& z, std::optional<double> step) {
  const std::size_t n = z.dim();
  const double h = step.value_or(default_step(z.norm()));
  if (!(h > 0.0)) throw DomainError("levi_form: step must be positive");

  std::vector<Complex> p(z.coords().begin(), z.coords().end());
  const double center = eval_checked(u, p);

  // Second difference of u along complex direction v (real directional derivative).
  auto second = [&](const std::vector<Complex>& v) {
    double s = -2.0 * center;
    for (double sign : {1.0, -1.0}) {
      for (std::size_t j = 0; j < n; ++j) p[j] = z[j] + sign * h * v[j];
      s += eval_checked(u, p);
    }
    for (std::size_t j = 0; j < n; ++j) p[j] = z[j];
    return s / (h * h);
  };
  auto quadratic = [&](const std::vector<Complex>& v) {
    std::vector<Complex> iv(n);
    for (std::size_t j = 0; j < n; ++j) iv[j] = Complex(0.0, 1.0) * v[j];
    return 0.25 * (second(v) + second(iv));
  };

  LeviForm form;
  form.n = n;
  form.step = h;
  form.matrix.assign(n * n, 0.0);
  std::vector<Complex> v(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(v.begin(), v.end(), Complex(0.0));
    v[j] = 1.0;
    form.matrix[j * n + j] = quadratic(v);
  }
  static constexpr Complex kPowers[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      if (j == k) continue;
      Complex acc = 0.0;
      for (const Complex& ip : kPowers) {
        std::fill(v.begin(), v.end(), Complex(0.0));
        v[j] = 1.0;
        v[k] = ip;
        acc += ip * quadratic(v);
      }
      form.matrix[j * n + k] = 0.25 * acc;
    }
  }
  double dev = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j; k < n; ++k) {
      const Complex a = form.matrix[j * n + k];
      const Complex b = std::conj(form.matrix[k * n + j]);
      dev = std::max(dev, 0.5 * std::abs(a - b));
      const Complex sym = 0.5 * (a + b);
      form.matrix[j * n + k] = j == k ? Complex(sym.real(), 0.0) : sym;
      form.matrix[k * n + j] = std::conj(form.matrix[j * n + k]);
    }
  }
  form.hermitian_deviation = dev;
  return form;
}

std::vector<double> hermitian_eigenvalues(std::size_t n, std::span<const Complex> m) {
  if (n == 0 || m.size() != n * n) throw DomainError("hermitian_eigenvalues: expected an n x n matrix");
  if (n == 1) return {m[0].real()};
  if (n == 2) {
    const double a = m[0].real(), d = m[3].real();
    const double mid = 0.5 * (a + d);
    const double rad = std::hypot(0.5 * (a - d), std::abs(m[1]));
    return {mid - rad, mid + rad};
  }
  // H = A + iB acts on x + iy as the real symmetric [[A, -B], [B, A]]; each
  // eigenvalue of H appears twice.
  const std::size_t N = 2 * n;
  std::vector<double> real(N * N);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double A = m[i * n + j].real(), B = m[i * n + j].imag();
      real[i * N + j] = A;
      real[i * N + (j + n)] = -B;
      real[(i + n) * N + j] = B;
      real[(i + n) * N + (j + n)] = A;
    }
  }
  const std::vector<double> doubled = jacobi_eigenvalues(N, std::move(real));
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = 0.5 * (doubled[2 * i] + doubled[2 * i + 1]);
  return eig;
}

double min_levi_eigenvalue(const LeviForm& form) { return hermitian_eigenvalues(form.n, form.matrix).front(); }

double fd_laplacian(const RealEvalFn& u, std::span<const double> x, std::optional<double> step) {
  if (x.empty()) throw DomainError("fd_laplacian: empty point");
  double norm = 0.0;
  for (double c : x) norm += c * c;
  const double h = step.value_or(default_step(std::sqrt(norm)));
  std::vector<double> p(x.begin(), x.end());
  auto value = [&] {
    const double v = u(p);
    if (v == kMinusInfinity) throw OracleUnavailable("fd_laplacian: stencil reached u = -inf");
    if (!std::isfinite(v)) throw EvaluationError("fd_laplacian: non-finite value in stencil");
    return v;
  };
  const double center = value();
  double total = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    p[j] = x[j] + h;
    const double up = value();
    p[j] = x[j] - h;
    const double down = value();
    p[j] = x[j];
    total += (up - 2.0 * center + down) / (h * h);
  }
  return total;
}

Verdict line_subharmonic_check(const EvalFn& u, const CPoint& z0, const CPoint& direction,
                               std::span<const double> disc_radii, std::size_t budget, std::uint64_t seed) {
  if (direction.dim() != z0.dim()) throw DomainError("line_subharmonic_check: dimension mismatch");
  if (direction.norm() == 0.0) throw DomainError("line_subharmonic_check: direction must be nonzero");
  Verdict verdict;
  const double center = u(z0.coords());
  if (std::isnan(center)) throw EvaluationError("line_subharmonic_check: u(z0) is NaN");
  if (center == kMinusInfinity) {
    verdict.counts.skipped_minus_infinity = 1;
    verdict.note = "u(z0) = -inf: sub-mean inequality holds trivially";
    return verdict;
  }
  // Restriction to the line, viewed as a function on C = R^2.
  std::vector<Complex> dir(direction.coords().begin(), direction.coords().end());
  std::vector<Complex> base(z0.coords().begin(), z0.coords().end());
  RealEvalFn restricted = [&u, dir, base](std::span<const double> lambda) {
    const Complex l(lambda[0], lambda[1]);
    Complex buf[16];
    std::vector<Complex> big;
    Complex* z = buf;
    if (dir.size() > 16) {
      big.resize(dir.size());
      z = big.data();
    }
    for (std::size_t j = 0; j < dir.size(); ++j) z[j] = base[j] + l * dir[j];
    return u(std::span<const Complex>(z, dir.size()));
  };
  const double origin[2] = {0.0, 0.0};
  for (double rho : disc_radii) {
    const MeanEstimate m = sphere_mean(restricted, origin, rho, budget, seed);
    ++verdict.counts.run;
    if (m.value == kMinusInfinity) {
      ++verdict.counts.minus_infinity_estimates;
      continue;
    }
    const double margin = m.value - center;
    if (margin < -(kDecisionSigmas * m.std_error + rounding_floor(center))) {
      verdict.status = Status::Violation;
      Witness w;
      w.point = std::vector<Complex>(z0.coords().begin(), z0.coords().end());
      w.frame_label = "line";
      w.radii = {rho};
      w.center_value = center;
      w.estimate = m.value;
      w.margin = margin;
      w.std_error = m.std_error;
      w.seed = seed;
      w.budget = budget;
      verdict.witnesses.push_back(std::move(w));
    }
  }
  if (verdict.status != Status::Violation && verdict.counts.run > 0 &&
      verdict.counts.minus_infinity_estimates == verdict.counts.run)
    verdict.status = Status::Inconclusive;
  return verdict;
}

}  // namespace psh
