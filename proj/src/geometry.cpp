#include "pshcheck/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pshcheck/random.hpp"

namespace psh {
namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b)
    throw DomainError(std::string(what) + ": dimension mismatch (" + std::to_string(a) + " vs " +
                      std::to_string(b) + ")");
}

}  // namespace

CPoint::CPoint(std::vector<Complex> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw DomainError("CPoint: dimension must be at least 1");
  for (const Complex& c : coords_)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw DomainError("CPoint: coordinates must be finite");
}

CPoint CPoint::zero(std::size_t n) { return CPoint(std::vector<Complex>(n)); }

double CPoint::norm() const {
  double s = 0.0;
  for (const Complex& c : coords_) s += std::norm(c);
  return std::sqrt(s);
}

Ellipsoid::Ellipsoid(std::vector<double> radii) : radii_(std::move(radii)) {
  if (radii_.empty()) throw DomainError("Ellipsoid: dimension must be at least 1");
  for (double r : radii_)
    if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("Ellipsoid: radii must be positive and finite");
}

Ellipsoid Ellipsoid::axial(std::size_t n, double long_radius, double short_radius) {
  if (n == 0) throw DomainError("Ellipsoid: dimension must be at least 1");
  std::vector<double> radii(n, short_radius);
  radii[0] = long_radius;
  return Ellipsoid(std::move(radii));
}

double Ellipsoid::max_radius() const { return *std::max_element(radii_.begin(), radii_.end()); }

bool Ellipsoid::contains(std::span<const Complex> w) const {
  require_same_dim(w.size(), radii_.size(), "Ellipsoid::contains");
  double s = 0.0;
  for (std::size_t j = 0; j < radii_.size(); ++j) s += std::norm(w[j]) / (radii_[j] * radii_[j]);
  return s <= 1.0;
}

UnitaryFrame::UnitaryFrame(std::size_t n, std::vector<Complex> entries) : n_(n), entries_(std::move(entries)) {
  if (n_ == 0) throw DomainError("UnitaryFrame: dimension must be at least 1");
  if (entries_.size() != n_ * n_) throw DomainError("UnitaryFrame: expected n*n entries");
  const double defect = unitarity_defect();
  if (!(defect <= kUnitaryTolerance))
    throw DomainError("UnitaryFrame: matrix is not unitary (defect " + std::to_string(defect) + ")");
  if (!(std::abs(std::abs(determinant()) - 1.0) <= kDeterminantTolerance))
    throw DomainError("UnitaryFrame: |det| differs from 1");
}

UnitaryFrame UnitaryFrame::identity(std::size_t n) {
  std::vector<Complex> m(n * n);
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] = 1.0;
  return UnitaryFrame(n, std::move(m));
}

UnitaryFrame UnitaryFrame::swap(std::size_t n, std::size_t i, std::size_t j) {
  if (i >= n || j >= n) throw DomainError("UnitaryFrame::swap: index out of range");
  std::vector<std::size_t> perm(n);
  for (std::size_t k = 0; k < n; ++k) perm[k] = k;
  std::swap(perm[i], perm[j]);
  std::vector<Complex> m(n * n);
  for (std::size_t k = 0; k < n; ++k) m[k * n + perm[k]] = 1.0;
  return UnitaryFrame(n, std::move(m));
}

void UnitaryFrame::apply(std::span<const Complex> v, std::span<Complex> out) const {
  require_same_dim(v.size(), n_, "UnitaryFrame::apply");
  for (std::size_t i = 0; i < n_; ++i) {
    Complex s = 0.0;
    for (std::size_t k = 0; k < n_; ++k) s += entries_[i * n_ + k] * v[k];
    out[i] = s;
  }
}

void UnitaryFrame::apply_adjoint(std::span<const Complex> v, std::span<Complex> out) const {
  require_same_dim(v.size(), n_, "UnitaryFrame::apply_adjoint");
  for (std::size_t i = 0; i < n_; ++i) {
    Complex s = 0.0;
    for (std::size_t k = 0; k < n_; ++k) s += std::conj(entries_[k * n_ + i]) * v[k];
    out[i] = s;
  }
}

double UnitaryFrame::unitarity_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      Complex s = 0.0;
      for (std::size_t k = 0; k < n_; ++k) s += entries_[i * n_ + k] * std::conj(entries_[j * n_ + k]);
      if (i == j) s -= 1.0;
      const double d = std::abs(s);
      if (!(d <= worst)) worst = d;  // NaN-propagating max
    }
  }
  return worst;
}

Complex UnitaryFrame::determinant() const {
  std::vector<Complex> a = entries_;
  Complex det = 1.0;
  for (std::size_t col = 0; col < n_; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n_; ++r)
      if (std::abs(a[r * n_ + col]) > std::abs(a[pivot * n_ + col])) pivot = r;
    if (a[pivot * n_ + col] == Complex(0.0)) return 0.0;
    if (pivot != col) {
      for (std::size_t k = 0; k < n_; ++k) std::swap(a[pivot * n_ + k], a[col * n_ + k]);
      det = -det;
    }
    const Complex p = a[col * n_ + col];
    det *= p;
    for (std::size_t r = col + 1; r < n_; ++r) {
      const Complex f = a[r * n_ + col] / p;
      for (std::size_t k = col; k < n_; ++k) a[r * n_ + k] -= f * a[col * n_ + k];
    }
  }
  return det;
}

double ellipsoid_volume(std::span<const double> radii) {
  if (radii.empty()) throw DomainError("ellipsoid_volume: need at least one radius");
  double v = 1.0;
  for (std::size_t j = 0; j < radii.size(); ++j) {
    if (!(radii[j] > 0.0) || !std::isfinite(radii[j]))
      throw DomainError("ellipsoid_volume: radii must be positive");
    v *= std::numbers::pi * radii[j] * radii[j] / static_cast<double>(j + 1);
  }
  return v;
}

bool contains(const Ellipsoid& e, const UnitaryFrame& frame, const CPoint& center, const CPoint& z) {
  require_same_dim(e.dim(), frame.dim(), "contains");
  require_same_dim(e.dim(), center.dim(), "contains");
  require_same_dim(e.dim(), z.dim(), "contains");
  std::vector<Complex> d(z.dim()), w(z.dim());
  for (std::size_t j = 0; j < z.dim(); ++j) d[j] = z[j] - center[j];
  frame.apply_adjoint(d, w);
  return e.contains(w);
}

UnitaryFrame sample_haar_unitary(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw DomainError("sample_haar_unitary: n must be at least 1");
  rng::CounterRng gen(seed, rng::Stream::Haar, 0);
  // Columns of a complex Ginibre matrix, stored column-major while orthonormalizing.
  std::vector<Complex> cols(n * n);
  const double scale = std::sqrt(0.5);
  for (auto& c : cols) {
    const double re = gen.normal();
    const double im = gen.normal();
    c = Complex(re, im) * scale;
  }
  // Modified Gram-Schmidt with one re-orthogonalization pass. Q is Haar
  // distributed once R has a positive real diagonal; Gram-Schmidt produces
  // r_jj = ||v_j|| directly, so the phase correction diag(r_jj/|r_jj|) is 1.
  for (std::size_t j = 0; j < n; ++j) {
    Complex* vj = &cols[j * n];
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        const Complex* qk = &cols[k * n];
        Complex proj = 0.0;
        for (std::size_t i = 0; i < n; ++i) proj += std::conj(qk[i]) * vj[i];
        for (std::size_t i = 0; i < n; ++i) vj[i] -= proj * qk[i];
      }
    }
    double norm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm2 += std::norm(vj[i]);
    const double r_jj = std::sqrt(norm2);
    for (std::size_t i = 0; i < n; ++i) vj[i] /= r_jj;
  }
  std::vector<Complex> rows(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rows[i * n + j] = cols[j * n + i];
  return UnitaryFrame(n, std::move(rows));
}

CPoint ball_to_ellipsoid(const CPoint& w, const Ellipsoid& e, const UnitaryFrame& frame, const CPoint& center) {
  require_same_dim(w.dim(), e.dim(), "ball_to_ellipsoid");
  require_same_dim(w.dim(), frame.dim(), "ball_to_ellipsoid");
  require_same_dim(w.dim(), center.dim(), "ball_to_ellipsoid");
  const double n2 = w.norm();
  if (n2 > 1.0 + 1e-15) throw DomainError("ball_to_ellipsoid: w lies outside the closed unit ball");
  std::vector<Complex> scaled(w.dim()), out(w.dim());
  for (std::size_t j = 0; j < w.dim(); ++j) scaled[j] = e.radius(j) * w[j];
  frame.apply(scaled, out);
  for (std::size_t j = 0; j < w.dim(); ++j) out[j] += center[j];
  return CPoint(std::move(out));
}

CPoint ellipsoid_to_ball(const CPoint& z, const Ellipsoid& e, const UnitaryFrame& frame, const CPoint& center) {
  require_same_dim(z.dim(), e.dim(), "ellipsoid_to_ball");
  require_same_dim(z.dim(), frame.dim(), "ellipsoid_to_ball");
  require_same_dim(z.dim(), center.dim(), "ellipsoid_to_ball");
  std::vector<Complex> d(z.dim()), w(z.dim());
  for (std::size_t j = 0; j < z.dim(); ++j) d[j] = z[j] - center[j];
  frame.apply_adjoint(d, w);
  for (std::size_t j = 0; j < z.dim(); ++j) w[j] /= e.radius(j);
  return CPoint(std::move(w));
}

}  // namespace psh
