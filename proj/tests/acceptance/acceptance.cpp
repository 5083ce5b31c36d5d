// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pshcheck/catalog.hpp"
#include "pshcheck/cli.hpp"
#include "pshcheck/criteria.hpp"
#include "pshcheck/expr.hpp"
#include "pshcheck/operators.hpp"
#include "pshcheck/oracle.hpp"

using namespace psh;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

void require(Outcome& o, bool cond, const std::string& what) {
  if (!cond) {
    if (o.pass) o.detail = what;
    o.pass = false;
  }
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

int failures = 0;

void run_criterion(const char* id, const char* title, double limit_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (t > limit_s) {
    if (o.pass) o.detail = fmt("runtime %.1fs exceeds %.0fs", t, limit_s);
    o.pass = false;
  }
  if (!o.pass) ++failures;
  std::printf("%s %s  %s  [%.1fs] %s\n", id, o.pass ? "PASS" : "FAIL", title, t, o.detail.c_str());
  std::fflush(stdout);
}

// Midpoint rule over [-1,1]^4 restricted to the unit ball: E|w1|^2.
double brute_force_ball_moment(int k) {
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

double simpson(const std::function<double(double)>& f, int n) {
  const double h = 1.0 / n;
  double s = f(0.0) + f(1.0);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return s * h / 3.0;
}

Outcome ac1() {
  Outcome o;
  const std::vector<std::vector<double>> cases{{1.0}, {1.0, 1.0}, {1.0, 2.0, 3.0}};
  std::mt19937_64 gen(2718);
  double worst_rel = 0.0, worst_z = 0.0;
  for (const auto& radii : cases) {
    const std::size_t n = radii.size();
    double formula = std::pow(std::numbers::pi, static_cast<double>(n)) / std::tgamma(n + 1.0);
    for (double r : radii) formula *= r * r;
    const double v = ellipsoid_volume(radii);
    worst_rel = std::max(worst_rel, std::abs(v - formula) / formula);
    require(o, std::abs(v - formula) <= 1e-12 * formula, "closed-form volume mismatch");

    // hit-or-miss on the bounding box of a rotated, shifted ellipsoid
    const Ellipsoid e(radii);
    const UnitaryFrame t = sample_haar_unitary(n, 31 + n);
    std::vector<Complex> c(n);
    for (std::size_t j = 0; j < n; ++j) c[j] = Complex(0.1 * j, -0.2);
    const CPoint center(c);
    const double half = e.max_radius();
    std::uniform_real_distribution<double> unit(-half, half);
    const int samples = 1000000;
    int hits = 0;
    std::vector<Complex> z(n);
    for (int i = 0; i < samples; ++i) {
      for (std::size_t j = 0; j < n; ++j) z[j] = c[j] + Complex(unit(gen), unit(gen));
      hits += contains(e, t, center, CPoint(z));
    }
    const double box = std::pow(2.0 * half, 2.0 * n);
    const double p = static_cast<double>(hits) / samples;
    const double se = box * std::sqrt(p * (1.0 - p) / samples);
    const double zscore = std::abs(box * p - v) / se;
    worst_z = std::max(worst_z, zscore);
    require(o, zscore <= 3.0, fmt("MC volume off by %.2f standard errors", zscore));
  }
  if (o.pass) o.detail = fmt("max rel err %.1e, max MC z-score %.2f", worst_rel, worst_z);
  return o;
}

Outcome ac2() {
  Outcome o;
  double worst = 0.0, worst_a = 0.0;
  for (int m = 1; m <= 8; ++m) {
    const auto p = ball_weight(m);
    const double integral = simpson([&](double t) { return p(t); }, 4000);
    worst = std::max(worst, std::abs(integral - 1.0));
    const double a = laplace_constant(p, m);
    worst_a = std::max(worst_a, std::abs(a - 2.0 * (m + 2)));
  }
  for (int k = 1; k <= 4; ++k)
    for (int l = 0; l <= 4; ++l) {
      const auto p = ellipsoid_slice_weight(k, l);
      worst = std::max(worst, std::abs(simpson([&](double t) { return p(t); }, 4000) - 1.0));
    }
  require(o, worst <= 1e-10, fmt("normalization error %.2e", worst));
  require(o, worst_a <= 1e-10, fmt("laplace constant error %.2e", worst_a));
  if (o.pass) o.detail = fmt("max |int p - 1| = %.1e, max |A - 2(m+2)| = %.1e", worst, worst_a);
  return o;
}

Outcome ac3() {
  Outcome o;
  const double c = brute_force_ball_moment(80);
  require(o, std::abs(c - 1.0 / 3.0) < 1e-3, fmt("brute-force constant %.5f is not 1/3", c));
  const expr::Expression ex("abs(z1)^2 - abs(z2)^2");
  const EvalFn u = ex.as_eval_fn();
  const auto long_s = LimsupSchedule::geometric(0.1, 0.7, 12, 4);
  const auto short_s = LimsupSchedule::geometric(1.0, 0.7, 12, 4);
  const CPoint z0 = CPoint::zero(2);
  const auto id = d_upper_T(u, z0, UnitaryFrame::identity(2), long_s, short_s, 1000000, 1);
  const auto sw = d_upper_T(u, z0, UnitaryFrame::swap(2, 0, 1), long_s, short_s, 1000000, 1);
  require(o, std::abs(id.value - 1.0 / 3.0) <= 0.02, fmt("identity frame %.5f", id.value));
  require(o, std::abs(sw.value + 1.0 / 3.0) <= 0.02, fmt("swap frame %.5f", sw.value));

  CheckOptions opts;
  opts.budget = 100000;
  opts.seed = 1;
  const std::vector<CPoint> grid{z0};
  const auto r = check_bp_psh(u, grid, standard_frames(2, true, 4, 1), long_s, short_s, opts);
  require(o, r.verdict.status == Status::Violation, "check_bp_psh did not report a violation");
  require(o, !r.verdict.witnesses.empty() && r.verdict.witnesses[0].frame_label == "swap(1,2)",
          "witness frame is not the swap");
  if (o.pass)
    o.detail = fmt("D_I = %.5f, D_swap = %.5f, oracle c = %.5f", id.value, sw.value, c) +
               fmt(", bp-psh witness margin %.4f", r.verdict.witnesses[0].margin);
  return o;
}

Outcome ac4() {
  Outcome o;
  const std::vector<double> steps{0.05, 0.1, 0.15, 0.2, 0.25, 0.3};
  std::size_t scans = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (const char* name : {"ball-quadratic", "log-shifted", "max-log"}) {
    const CatalogEntry* e = find_catalog_entry(name);
    const EvalFn u = e->compile().as_eval_fn();
    const CPoint z0 = CPoint::zero(e->dimension);
    const Ellipsoid base(std::vector<double>(e->dimension, 0.1));
    for (std::size_t axis = 0; axis < e->dimension; ++axis)
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        CheckOptions opts;
        opts.budget = 50000;
        opts.seed = seed;
        opts.escalate = false;
        const auto r = monotonicity_scan(u, z0, UnitaryFrame::identity(e->dimension), base, axis, steps, opts);
        ++scans;
        for (const auto& p : r.points)
          if (p.std_error > 0.0) worst = std::min(worst, p.margin / p.std_error);
        require(o, r.verdict.status == Status::Consistent,
                std::string(name) + fmt(" decreases along axis %.0f (seed %.0f)", axis + 1.0, seed));
      }
  }
  if (o.pass) o.detail = fmt("%.0f scans, min step change %.2f combined errors", scans, worst);
  return o;
}

Outcome ac5() {
  Outcome o;
  std::mt19937_64 gen(55);
  std::uniform_real_distribution<double> coord(0.5, 1.5);
  const auto sched = LimsupSchedule::geometric(0.1, 0.7, 12, 4);
  std::size_t compared = 0;
  double worst = 0.0;
  for (const char* name : {"x-quadratic", "x-quartic", "x-saddle", "x-exp"}) {
    const CatalogEntry* e = find_catalog_entry(name);
    const RealEvalFn u = e->compile().as_real_eval_fn();
    const std::size_t m = e->dimension;
    for (int i = 0; i < 10; ++i) {
      std::vector<double> x(m);
      for (auto& v : x) v = coord(gen);
      const double fd = fd_laplacian(u, x);
      for (const auto& p : {ball_weight(static_cast<double>(m)), ellipsoid_slice_weight(2, 1)}) {
        const auto est = p_laplacian(u, x, p, sched, 20000, 100 + i);
        const double tol = std::max(0.05 * std::abs(fd), 3.0 * est.std_error);
        const double diff = std::abs(est.value - fd);
        worst = std::max(worst, diff / tol);
        ++compared;
        require(o, diff <= tol,
                std::string(name) + " " + p.description() + fmt(": %.5f vs fd %.5f (tol %.2e)", est.value, fd, tol));
      }
    }
  }
  if (o.pass) o.detail = fmt("%.0f comparisons, worst |diff|/tol = %.2f", compared, worst);
  return o;
}

Outcome ac6() {
  Outcome o;
  std::mt19937_64 gen(606);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  std::size_t points = 0, inconclusive = 0, disagreements = 0, violations = 0;
  for (const auto& e : catalog()) {
    if (e.space != Space::Complex || e.smoothness != Smoothness::C2) continue;
    const EvalFn u = e.compile().as_eval_fn();
    std::vector<CPoint> grid;
    for (int i = 0; i < 20; ++i) {
      std::vector<Complex> z(e.dimension);
      for (auto& c : z) c = Complex(coord(gen), coord(gen));
      grid.emplace_back(z);
    }
    CheckOptions opts;
    opts.budget = 4000;
    opts.seed = 9;
    const auto r = check_mean_value_d(u, grid, standard_frames(e.dimension, true, 2, 9), 0.2, opts);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto& s = r.points[i];
      ++points;
      if (s.status == "inconclusive" || s.status == "skipped") {
        ++inconclusive;
        continue;
      }
      const LeviForm L = levi_form(u, grid[i]);
      const bool oracle_psh = min_levi_eigenvalue(L) >= -1e-4 * (1.0 + L.max_abs());
      const bool consistent = s.status != "violation";
      violations += !consistent;
      if (oracle_psh != consistent) {
        ++disagreements;
        require(o, false, e.name + fmt(": point %.0f disagrees with the Levi oracle", static_cast<double>(i)));
      }
    }
  }
  if (o.pass)
    o.detail = fmt("%.0f points, %.0f violations, 0 disagreements", points, violations) +
               fmt(", %.0f inconclusive", inconclusive);
  return o;
}

Outcome ac7() {
  Outcome o;
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  const std::vector<double> r_list{0.05, 0.1, 0.2};
  CheckOptions opts;
  opts.budget = 20000;
  opts.seed = 3;
  struct Case {
    const char* expr;
    std::size_t m;
  };
  for (const Case c : {Case{"x1", 3}, Case{"x1^2 - x2^2", 2}, Case{"re(z1^2)", 4}}) {
    const RealEvalFn u = expr::Expression(c.expr).as_real_eval_fn();
    std::vector<std::vector<double>> grid(5, std::vector<double>(c.m));
    for (auto& x : grid)
      for (auto& v : x) v = coord(gen);
    for (const auto& p : {ball_weight(static_cast<double>(c.m)), ellipsoid_slice_weight(1, 1)}) {
      const auto r = check_harmonic_p(u, grid, p, r_list, opts);
      require(o, r.verdict.status == Status::Consistent, std::string(c.expr) + " flagged as non-harmonic");
    }
  }
  const RealEvalFn q = expr::Expression("x1^2 + x2^2 + x3^2").as_real_eval_fn();
  const std::vector<std::vector<double>> grid{{0.1, 0.2, 0.3}, {-0.5, 0.0, 0.4}};
  std::size_t witnesses = 0;
  for (const auto& p : {ball_weight(3.0), ellipsoid_slice_weight(1, 1)}) {
    const auto r = check_harmonic_p(q, grid, p, r_list, opts);
    require(o, r.verdict.status == Status::Violation, "|x|^2 not reported");
    for (const auto& w : r.verdict.witnesses) {
      ++witnesses;
      const double expected = w.radii[0] * w.radii[0] * simpson([&](double t) { return t * t * p(t); }, 2000);
      require(o, w.margin > 0.0, "non-positive margin for |x|^2");
      require(o, std::abs(w.margin - expected) <= 3.0 * w.std_error + 1e-12,
              fmt("margin %.6e vs r^2 int t^2 p = %.6e", w.margin, expected));
    }
  }
  require(o, witnesses == 2 * grid.size() * r_list.size(), "missing |x|^2 witnesses");
  if (o.pass) o.detail = fmt("3 harmonic functions consistent; %.0f |x|^2 witnesses match r^2 int t^2 p", witnesses);
  return o;
}

std::string strip_wall_time(const std::string& report) {
  std::istringstream in(report);
  std::string line, out;
  while (std::getline(in, line))
    if (line.find("\"wall_time_s\"") == std::string::npos) out += line + '\n';
  return out;
}

Outcome ac8() {
  Outcome o;
  const std::vector<std::vector<std::string>> configs{
      {"check", "--check", "bp-psh", "--catalog", "log-shifted", "--grid", "random:3:-1:1", "--frames", "all",
       "--budget", "5000", "--seed", "11"},
      {"check", "--check", "mean-d", "--catalog", "subharmonic-not-psh", "--grid", "random:4:-1:1", "--budget",
       "3000", "--seed", "12"},
      {"check", "--check", "harmonic-p", "--expr", "x1^2 - x2^2", "--grid", "random:3:-1:1", "--weight",
       "slice:1,1", "--budget", "3000", "--seed", "13"},
      {"mean", "--expr", "log(abs(z1 - 0.3)) + abs(z2)^2", "--radii", "0.4,0.2", "--frame", "haar:5", "--budget",
       "50000", "--seed", "14"},
  };
  std::size_t compared = 0;
  for (const auto& cfg : configs) {
    std::vector<std::string> reports;
    for (const char* threads : {"1", "2", "8"}) {
      auto args = cfg;
      args.push_back("--threads");
      args.push_back(threads);
      std::ostringstream out, err;
      const int code = cli::run(args, out, err);
      require(o, code <= cli::kExitInconclusive, "run failed: " + err.str());
      reports.push_back(strip_wall_time(out.str()));
    }
    for (const auto& r : reports) require(o, r == reports[0], "reports differ across thread counts: " + cfg[0]);
    compared += reports.size();
  }
  if (o.pass) o.detail = fmt("%.0f configs x {1,2,8} threads byte-identical", configs.size());
  return o;
}

}  // namespace

int main() {
  run_criterion("AC-1", "ellipsoid volume formula and MC membership volume", 10.0, ac1);
  run_criterion("AC-2", "weight normalization and Laplace constants", 1.0, ac2);
  run_criterion("AC-3", "|z1|^2-|z2|^2 frame constants +-1/3 and swap witness", 120.0, ac3);
  run_criterion("AC-4", "monotonicity of ellipsoid means for psh entries", 120.0, ac4);
  run_criterion("AC-5", "weighted Laplacian vs finite differences", 120.0, ac5);
  run_criterion("AC-6", "mean-d check vs Levi-form oracle", 300.0, ac6);
  run_criterion("AC-7", "harmonic equality and |x|^2 margin", 60.0, ac7);
  run_criterion("AC-8", "determinism across 1, 2, 8 worker threads", 600.0, ac8);
  std::printf("%s: %d of 8 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
