#include <doctest.h>

#include <cmath>

#include "pshcheck/common.hpp"
#include "pshcheck/expr.hpp"
#include "pshcheck/operators.hpp"

using namespace psh;

namespace {

// Midpoint rule over the unit ball of C^2 = R^4 for E|w1|^2.
double grid_ball_moment(int k) {
  const double h = 2.0 / k;
  double num = 0.0, den = 0.0;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int c = 0; c < k; ++c)
        for (int d = 0; d < k; ++d) {
          const double x = -1 + (a + 0.5) * h, y = -1 + (b + 0.5) * h;
          const double s = -1 + (c + 0.5) * h, t = -1 + (d + 0.5) * h;
          if (x * x + y * y + s * s + t * t > 1.0) continue;
          num += x * x + y * y;
          den += 1.0;
        }
  return num / den;
}

const LimsupSchedule kLong = LimsupSchedule::geometric(0.1, 0.7, 12, 4);
const LimsupSchedule kShort = LimsupSchedule::geometric(1.0, 0.7, 12, 4);

}  // namespace

TEST_CASE("schedules") {
  const auto s = LimsupSchedule::geometric(1.0, 0.5, 5, 2);
  CHECK(s.radii().size() == 5);
  CHECK(s.tail().size() == 2);
  CHECK(s.tail()[0] == 0.125);
  CHECK(s.tail()[1] == 0.0625);
  CHECK_THROWS_AS(LimsupSchedule({1.0, 1.0}, 1), DomainError);
  CHECK_THROWS_AS(LimsupSchedule({1.0, 0.5}, 3), DomainError);
  CHECK_THROWS_AS(LimsupSchedule::geometric(1.0, 1.5, 4, 2), DomainError);
}

TEST_CASE("classical and weighted Laplacians of |x|^2 equal 2m") {
  const expr::Expression u("x1^2 + x2^2 + x3^2");
  const std::vector<double> x0{0.2, -0.1, 0.4};
  const auto bp = bp_laplacian(u.as_real_eval_fn(), x0, kLong, 1000, 1);
  CHECK(bp.value == doctest::Approx(6.0).epsilon(1e-9));
  const auto pb = p_laplacian(u.as_real_eval_fn(), x0, ball_weight(3), kLong, 1000, 1);
  CHECK(pb.value == doctest::Approx(6.0).epsilon(1e-9));
  const expr::Expression u4("x1^2 + x2^2 + x3^2 + x4^2");
  const std::vector<double> y0{0.0, 0.0, 0.0, 0.0};
  const auto ps = p_laplacian(u4.as_real_eval_fn(), y0, ellipsoid_slice_weight(2, 1), kLong, 1000, 1);
  CHECK(ps.value == doctest::Approx(8.0).epsilon(1e-9));
}

TEST_CASE("weighted Laplacian of exp(x1) approaches exp(x1)") {
  const expr::Expression u("exp(x1)");
  const std::vector<double> x0{0.5, 0.0};
  const auto est = p_laplacian(u.as_real_eval_fn(), x0, ellipsoid_slice_weight(2, 1), kLong, 20000, 3);
  CHECK(std::abs(est.value - std::exp(0.5)) < std::max(0.05 * std::exp(0.5), 3.0 * est.std_error));
}

TEST_CASE("ellipsoid operator at the identity and swapped frames for |z1|^2 - |z2|^2") {
  const double c = grid_ball_moment(60);
  const expr::Expression u("abs(z1)^2 - abs(z2)^2");
  const CPoint z0 = CPoint::zero(2);
  const auto id = d_upper_T(u.as_eval_fn(), z0, UnitaryFrame::identity(2), kLong, kShort, 100000, 1);
  const auto sw = d_upper_T(u.as_eval_fn(), z0, UnitaryFrame::swap(2, 0, 1), kLong, kShort, 100000, 1);
  CHECK(std::abs(id.value - c) < 0.02);
  CHECK(std::abs(sw.value + c) < 0.02);
  CHECK_FALSE(id.inconclusive);
  const auto inf = d_upper(u.as_eval_fn(), z0, 2, kLong, kShort, 20000, 1);
  CHECK(inf.frames_tried == 4);
  CHECK(inf.frames[inf.best_frame].label == "swap(1,2)");
  CHECK(inf.value < 0.0);
}

TEST_CASE("frame infimum never exceeds the identity frame") {
  const expr::Expression u("abs(z1 + z2)^2 + abs(z2)^2 - 0.25*abs(z3)^2");
  const CPoint z0{Complex(0.1), Complex(0.2, 0.1), Complex(-0.3)};
  const auto id = d_upper_T(u.as_eval_fn(), z0, UnitaryFrame::identity(3), kLong, kShort, 5000, 4);
  const auto inf = d_upper(u.as_eval_fn(), z0, 3, kLong, kShort, 5000, 4);
  CHECK(inf.value <= id.value);
  CHECK(inf.frames.size() == 1 + 3 + 3);
}

TEST_CASE("one complex dimension uses the disc") {
  const expr::Expression u("abs(z1)^2");
  const auto est = d_upper_T(u.as_eval_fn(), CPoint::zero(1), UnitaryFrame::identity(1), kLong, kShort, 50000, 2);
  // disc mean of |z|^2 is R^2 / 2
  CHECK(std::abs(est.value - 0.5) < 4.0 * est.std_error + 1e-12);
}

TEST_CASE("operators are undefined on u_{-inf}") {
  const expr::Expression u("log(abs(z1))");
  CHECK_THROWS_AS(d_upper_T(u.as_eval_fn(), CPoint::zero(2), UnitaryFrame::identity(2), kLong, kShort, 100, 1),
                  PreconditionError);
  const expr::Expression v("log(sqrt(x1^2 + x2^2))");
  const std::vector<double> x0{0.0, 0.0};
  CHECK_THROWS_AS(bp_laplacian(v.as_real_eval_fn(), x0, kLong, 100, 1), PreconditionError);
}

TEST_CASE("superharmonic cone gives a large negative quotient") {
  const expr::Expression u("-sqrt(x1^2 + x2^2 + x3^2)");
  const std::vector<double> x0{0.0, 0.0, 0.0};
  const auto est = p_laplacian(u.as_real_eval_fn(), x0, ball_weight(3), kLong, 1000, 1);
  // quotient A * (-r * 3/4) / r^2 = -7.5 / r at the smallest tail radius
  const double r = kLong.tail().back();
  CHECK(est.value == doctest::Approx(-7.5 / kLong.tail().front()).epsilon(1e-9));
  CHECK(est.value > -7.5 / r);
}
