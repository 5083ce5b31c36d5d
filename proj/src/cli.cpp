#include "pshcheck/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pshcheck/catalog.hpp"
#include "pshcheck/criteria.hpp"
#include "pshcheck/expr.hpp"
#include "pshcheck/operators.hpp"
#include "pshcheck/oracle.hpp"
#include "pshcheck/parallel.hpp"
#include "pshcheck/random.hpp"

#ifndef PSHCHECK_VERSION
#define PSHCHECK_VERSION "0.0.0"
#endif

namespace psh::cli {
namespace {

using json = nlohmann::ordered_json;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// ---- text helpers ---------------------------------------------------------

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

Complex parse_complex(std::string_view text) {
  const std::string t = trim(text);
  if (t.empty()) throw ConfigError("empty coordinate");
  return expr::eval_constant(t);
}

double parse_real(std::string_view text) {
  const Complex c = parse_complex(text);
  if (c.imag() != 0.0) throw ConfigError("expected a real number, got '" + std::string(text) + "'");
  return c.real();
}

std::size_t parse_count(std::string_view text) {
  const std::string t = trim(text);
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) throw ConfigError("expected a count, got '" + t + "'");
  return v;
}

std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_real(item));
  return out;
}

std::vector<Complex> parse_complex_list(std::string_view text) {
  std::vector<Complex> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_complex(item));
  return out;
}

std::string format_double(double v) {
  if (v == kMinusInfinity) return "-inf";
  if (std::isinf(v)) return "inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// ---- JSON encoding --------------------------------------------------------

json num(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

json complex_json(Complex c) { return json::array({num(c.real()), num(c.imag())}); }

json complex_vector_json(std::span<const Complex> v) {
  json a = json::array();
  for (const auto& c : v) a.push_back(complex_json(c));
  return a;
}

json real_vector_json(std::span<const double> v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

json frame_json(const std::string& label, const UnitaryFrame& frame) {
  return json{{"label", label}, {"n", frame.dim()}, {"entries", complex_vector_json(frame.entries())}};
}

json witness_json(const Witness& w) {
  json j;
  j["point_index"] = w.point_index;
  if (!w.point.empty()) j["point"] = complex_vector_json(w.point);
  if (!w.real_point.empty()) j["real_point"] = real_vector_json(w.real_point);
  if (w.frame) j["frame"] = frame_json(w.frame_label, *w.frame);
  j["radii"] = real_vector_json(w.radii);
  j["center_value"] = num(w.center_value);
  j["estimate"] = num(w.estimate);
  j["margin"] = num(w.margin);
  j["std_error"] = num(w.std_error);
  j["seed"] = w.seed;
  j["budget"] = w.budget;
  j["escalated"] = w.escalated;
  return j;
}

json verdict_json(const Verdict& v) {
  json j;
  j["status"] = std::string(to_string(v.status));
  if (!v.note.empty()) j["note"] = v.note;
  j["counts"] = json{{"run", v.counts.run},
                     {"skipped_minus_infinity", v.counts.skipped_minus_infinity},
                     {"noise_dominated", v.counts.noise_dominated},
                     {"minus_infinity_estimates", v.counts.minus_infinity_estimates},
                     {"escalated", v.counts.escalated}};
  json w = json::array();
  for (const auto& x : v.witnesses) w.push_back(witness_json(x));
  j["witnesses"] = std::move(w);
  return j;
}

json radius_quotients_json(const std::vector<RadiusQuotient>& rq) {
  json a = json::array();
  for (const auto& q : rq)
    a.push_back(json{{"radius", num(q.radius)},
                     {"quotient", num(q.quotient)},
                     {"std_error", num(q.std_error)},
                     {"noise_dominated", q.noise_dominated},
                     {"minus_infinity", q.minus_infinity}});
  return a;
}

json operator_json(const OperatorEstimate& est) {
  json j;
  j["value"] = num(est.value);
  j["std_error"] = num(est.std_error);
  j["center_value"] = num(est.center_value);
  j["inconclusive"] = est.inconclusive;
  if (est.frames.empty()) {
    j["per_radius"] = radius_quotients_json(est.per_radius);
  } else {
    j["best_frame"] = est.frames[est.best_frame].label;
    json frames = json::array();
    for (const auto& f : est.frames)
      frames.push_back(json{{"label", f.label},
                            {"value", num(f.value)},
                            {"std_error", num(f.std_error)},
                            {"inconclusive", f.inconclusive},
                            {"per_radius", radius_quotients_json(f.per_radius)}});
    j["frames"] = std::move(frames);
  }
  return j;
}

// ---- grids ----------------------------------------------------------------

std::vector<std::vector<double>> real_grid_points(std::string_view spec, std::size_t m, std::uint64_t seed,
                                                  bool complex_coords, std::vector<CPoint>* complex_out) {
  if (m == 0) throw ConfigError("grid dimension must be positive");
  std::vector<std::vector<double>> out;
  const std::string s = trim(spec);
  if (s == "origin") {
    out.emplace_back(m, 0.0);
    return out;
  }
  const auto colon = s.find(':');
  const std::string kind = s.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : s.substr(colon + 1);
  if (kind == "points") {
    for (const auto& p : split(rest, ';')) {
      const auto coords = split(p, ',');
      if (complex_coords) {
        if (coords.size() != m / 2)
          throw ConfigError("grid point '" + p + "' needs " + std::to_string(m / 2) + " complex coordinates");
        std::vector<Complex> z;
        for (const auto& c : coords) z.push_back(parse_complex(c));
        complex_out->emplace_back(z);
      } else {
        if (coords.size() != m)
          throw ConfigError("grid point '" + p + "' needs " + std::to_string(m) + " real coordinates");
        std::vector<double> x;
        for (const auto& c : coords) x.push_back(parse_real(c));
        out.push_back(std::move(x));
      }
    }
    return out;
  }
  const auto parts = split(rest, ':');
  if (kind == "box") {
    if (parts.size() != 3) throw ConfigError("box grid is box:LO:HI:K");
    const double lo = parse_real(parts[0]), hi = parse_real(parts[1]);
    const std::size_t k = parse_count(parts[2]);
    if (k == 0 || !(hi >= lo)) throw ConfigError("box grid needs K >= 1 and HI >= LO");
    double total = std::pow(static_cast<double>(k), static_cast<double>(m));
    if (total > 1e6) throw ConfigError("box grid has more than 10^6 points");
    std::vector<std::size_t> idx(m, 0);
    const auto coord = [&](std::size_t i) {
      return k == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(k - 1);
    };
    while (true) {
      std::vector<double> x(m);
      for (std::size_t j = 0; j < m; ++j) x[j] = coord(idx[j]);
      out.push_back(std::move(x));
      std::size_t j = m;
      while (j > 0 && ++idx[j - 1] == k) idx[--j] = 0;
      if (j == 0) break;
    }
    return out;
  }
  if (kind == "random") {
    if (parts.size() != 3) throw ConfigError("random grid is random:N:LO:HI");
    const std::size_t count = parse_count(parts[0]);
    const double lo = parse_real(parts[1]), hi = parse_real(parts[2]);
    if (!(hi >= lo)) throw ConfigError("random grid needs HI >= LO");
    for (std::size_t i = 0; i < count; ++i) {
      rng::CounterRng g(seed, rng::Stream::Grid, i);
      std::vector<double> x(m);
      for (auto& v : x) v = lo + (hi - lo) * g.uniform();
      out.push_back(std::move(x));
    }
    return out;
  }
  throw ConfigError("unknown grid spec '" + s + "' (origin | points:... | box:LO:HI:K | random:N:LO:HI)");
}

// ---- configuration --------------------------------------------------------

struct Flags {
  std::optional<std::string> config_file, expr, catalog, grid, frames, check, weight, radii, r_list, steps, center,
      direction, frame, op, filter, format, out;
  std::optional<std::size_t> dim, real_dim, budget, haar_count, sched_count, sched_window, short_count, short_window,
      axis, t_nodes, threads;
  std::optional<std::uint64_t> seed;
  std::optional<double> sched_ratio, sched_start, short_ratio, short_start, r0, domain_radius;
  bool no_escalate = false;
};

std::size_t default_budget() {
  if (const char* env = std::getenv("PSH_DEFAULT_BUDGET")) {
    try {
      const std::size_t b = parse_count(env);
      if (b < 2) throw ConfigError("");
      return b;
    } catch (const std::exception&) {
      throw ConfigError(std::string("PSH_DEFAULT_BUDGET must be an integer >= 2, got '") + env + "'");
    }
  }
  return kDefaultBudget;
}

bool is_real_space(const std::string& command, const json& cfg) {
  if (command == "check") {
    const std::string c = cfg.value("check", "");
    return c == "subharmonic-p" || c == "harmonic-p";
  }
  if (command == "laplacian") {
    const std::string op = cfg.value("operator", "");
    return op == "bp" || op == "p";
  }
  return false;
}

json sched_json(double start, double ratio, std::size_t count, std::size_t window) {
  return json{{"start", start}, {"ratio", ratio}, {"count", count}, {"window", window}};
}

LimsupSchedule schedule_from(const json& j) {
  const double start = j.at("start").get<double>();
  const double ratio = j.at("ratio").get<double>();
  if (!(start > 0.0) || !(ratio > 0.0 && ratio < 1.0)) throw ConfigError("schedule needs start > 0 and 0 < ratio < 1");
  return LimsupSchedule::geometric(start, ratio, j.at("count").get<std::size_t>(), j.at("window").get<std::size_t>());
}

// Merges the config file and flags and fills defaults. The result is echoed
// in the report and is sufficient to replay the run.
json resolve_config(const std::string& command, const Flags& f) {
  json cfg = json::object();
  if (f.config_file) {
    std::ifstream in(*f.config_file);
    if (!in) throw ConfigError("cannot read config file '" + *f.config_file + "'");
    json file;
    try {
      file = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError("config file: " + std::string(e.what()));
    }
    if (file.contains("config")) file = file["config"];
    if (!file.is_object()) throw ConfigError("config file must hold a JSON object");
    cfg = file;
  }
  cfg["command"] = command;
  auto set = [&](const char* key, const auto& opt) {
    if (opt) cfg[key] = *opt;
  };
  if (f.expr) {
    cfg.erase("catalog");
    cfg["expr"] = *f.expr;
  }
  if (f.catalog) {
    cfg.erase("expr");
    cfg["catalog"] = *f.catalog;
  }
  set("dim", f.dim);
  set("real_dim", f.real_dim);
  set("grid", f.grid);
  set("budget", f.budget);
  set("seed", f.seed);
  set("frames", f.frames);
  set("haar_count", f.haar_count);
  set("check", f.check);
  set("weight", f.weight);
  set("r0", f.r0);
  set("axis", f.axis);
  set("frame", f.frame);
  set("operator", f.op);
  set("t_nodes", f.t_nodes);
  set("domain_radius", f.domain_radius);
  set("filter", f.filter);
  set("format", f.format);
  if (f.no_escalate) cfg["escalate"] = false;
  if (f.radii) {
    json list = json::array();
    for (const auto& e : split(*f.radii, ';')) list.push_back(parse_real_list(e));
    cfg["radii"] = list;
  }
  if (f.r_list) cfg["r_list"] = parse_real_list(*f.r_list);
  if (f.steps) cfg["steps"] = parse_real_list(*f.steps);
  if (f.center) cfg["center"] = *f.center;
  if (f.direction) cfg["direction"] = *f.direction;
  auto sched_override = [&](const char* key, const auto& start, const auto& ratio, const auto& count,
                            const auto& window) {
    json& s = cfg[key];
    if (!s.is_object()) s = json::object();
    if (start) s["start"] = *start;
    if (ratio) s["ratio"] = *ratio;
    if (count) s["count"] = *count;
    if (window) s["window"] = *window;
  };
  sched_override("sched", f.sched_start, f.sched_ratio, f.sched_count, f.sched_window);
  sched_override("short_sched", f.short_start, f.short_ratio, f.short_count, f.short_window);

  // Defaults.
  auto fill = [&](const char* key, json value) {
    if (!cfg.contains(key) || cfg[key].is_null()) cfg[key] = std::move(value);
  };
  auto fill_sched = [&](const char* key, json defaults) {
    for (auto& [k, v] : defaults.items())
      if (!cfg[key].contains(k)) cfg[key][k] = v;
  };
  fill("budget", default_budget());
  fill("seed", 0);
  fill_sched("sched", sched_json(0.1, 0.7, 12, 4));
  fill_sched("short_sched", sched_json(1.0, 0.7, 12, 4));
  fill("format", command == "scan" ? "csv" : "json");
  if (cfg["budget"].get<std::size_t>() < 2) throw ConfigError("budget must be at least 2");

  if (command == "catalog") {
    for (const char* k : {"budget", "seed", "sched", "short_sched"}) cfg.erase(k);
    return cfg;
  }

  if (command == "check") fill("check", "bp-psh");
  if (command == "laplacian") fill("operator", "d");
  if (command == "scan") cfg["operator"] = "d";
  if (command == "check") {
    static const std::set<std::string> known{"mean-b",      "mean-d",       "bp-psh",          "subharmonic-p",
                                             "harmonic-p",  "monotonicity", "line-subharmonic"};
    const std::string c = cfg["check"].get<std::string>();
    if (!known.count(c))
      throw ConfigError("unknown check '" + c +
                        "' (mean-b | mean-d | bp-psh | subharmonic-p | harmonic-p | monotonicity | line-subharmonic)");
  }
  if (command == "laplacian") {
    const std::string op = cfg["operator"].get<std::string>();
    if (op != "bp" && op != "p" && op != "d" && op != "dT")
      throw ConfigError("unknown operator '" + op + "' (bp | p | d | dT)");
  }

  // Function and dimensions.
  const CatalogEntry* entry = nullptr;
  if (cfg.contains("catalog")) {
    entry = find_catalog_entry(cfg["catalog"].get<std::string>());
    if (!entry) throw ConfigError("unknown catalog entry '" + cfg["catalog"].get<std::string>() + "'");
    cfg["expr"] = entry->expression;
  }
  if (!cfg.contains("expr")) throw UsageError("one of --expr or --catalog is required");
  const expr::Expression e(cfg["expr"].get<std::string>());
  cfg["expr"] = e.canonical();

  const bool real = is_real_space(command, cfg);
  if (!real && entry && entry->space == Space::Real)
    throw ConfigError("catalog entry '" + entry->name + "' is defined on R^m; use a real-space check");
  if (real) {
    std::size_t m = 0;
    if (cfg.contains("real_dim")) m = cfg["real_dim"].get<std::size_t>();
    else if (cfg.contains("dim")) m = 2 * cfg["dim"].get<std::size_t>();
    else if (entry) m = entry->real_dimension();
    else m = std::max<std::size_t>(1, e.real_dim());
    if (m < e.real_dim()) throw ConfigError("real dimension " + std::to_string(m) + " is below the expression's " +
                                            std::to_string(e.real_dim()));
    cfg["real_dim"] = m;
    cfg.erase("dim");
  } else {
    std::size_t n = 0;
    if (cfg.contains("dim")) n = cfg["dim"].get<std::size_t>();
    else if (entry) n = entry->dimension;
    else n = std::max<std::size_t>(1, e.complex_dim());
    if (n < e.complex_dim()) throw ConfigError("dimension " + std::to_string(n) + " is below the expression's " +
                                               std::to_string(e.complex_dim()));
    cfg["dim"] = n;
    cfg.erase("real_dim");
  }
  if (command == "mean") cfg.erase("grid");
  else fill("grid", "origin");

  const std::string check = cfg.value("check", "");
  const std::string op = cfg.value("operator", "");
  const bool uses_frames = (command == "check" && (check == "mean-b" || check == "mean-d" || check == "bp-psh")) ||
                           command == "scan" || (command == "laplacian" && op == "d");
  if (uses_frames) {
    fill("frames", "all");
    fill("haar_count", 4);
  }
  const bool uses_single_frame =
      command == "mean" || (command == "laplacian" && op == "dT") || (command == "check" && check == "monotonicity");
  if (uses_single_frame) fill("frame", "identity");
  if (command == "check") {
    fill("escalate", true);
    if (check == "mean-b" || check == "mean-d" || check == "monotonicity") fill("r0", 0.1);
    if (check == "subharmonic-p" || check == "harmonic-p") fill("weight", "ball");
    if (check == "harmonic-p") fill("r_list", json::array({0.05, 0.1, 0.2}));
    if (check == "line-subharmonic") fill("r_list", json::array({0.025, 0.05, 0.1}));
    if (check == "monotonicity") {
      fill("axis", 1);
      const double r0 = cfg["r0"].get<double>();
      json steps = json::array();
      for (double s : {0.25, 0.4, 0.55, 0.7, 0.85, 1.0}) steps.push_back(r0 * s);
      fill("steps", steps);
    }
  }
  if (command == "laplacian" && op == "p") fill("weight", "ball");
  if (cfg.contains("weight") || command == "check") fill("t_nodes", kDefaultRadialNodes);
  if (command == "mean") fill("radii", json::array({json::array({0.1})}));
  return cfg;
}

// ---- resolved-config accessors ---------------------------------------------

struct Function {
  expr::Expression expression;
  std::size_t n = 0;  // complex dimension (0 for real-space runs)
  std::size_t m = 0;  // real dimension
};

Function function_from(const json& cfg) {
  Function fn{expr::Expression(cfg["expr"].get<std::string>())};
  if (cfg.contains("dim")) {
    fn.n = cfg["dim"].get<std::size_t>();
    fn.m = 2 * fn.n;
  } else {
    fn.m = cfg["real_dim"].get<std::size_t>();
  }
  return fn;
}

FrameList frames_from(const json& cfg, std::size_t n) {
  const std::string spec = cfg["frames"].get<std::string>();
  const std::uint64_t seed = cfg["seed"].get<std::uint64_t>();
  if (spec == "identity") return standard_frames(n, false, 0, seed);
  if (spec == "swaps") return standard_frames(n, true, 0, seed);
  if (spec == "all") return standard_frames(n, true, cfg["haar_count"].get<std::size_t>(), seed);
  if (spec.rfind("haar:", 0) == 0) return standard_frames(n, false, parse_count(spec.substr(5)), seed);
  throw ConfigError("unknown frames spec '" + spec + "' (identity | swaps | haar:K | all)");
}

std::pair<std::string, UnitaryFrame> single_frame_from(const json& cfg, std::size_t n) {
  const std::string spec = cfg["frame"].get<std::string>();
  if (spec == "identity") return {spec, UnitaryFrame::identity(n)};
  if (spec.rfind("swap:", 0) == 0) {
    const auto ij = split(spec.substr(5), ',');
    if (ij.size() != 2) throw ConfigError("frame swap:I,J needs two indices");
    const std::size_t i = parse_count(ij[0]), j = parse_count(ij[1]);
    if (i < 1 || j < 1 || i > n || j > n) throw ConfigError("frame swap indices are 1-based and at most n");
    return {"swap(" + std::to_string(i) + "," + std::to_string(j) + ")", UnitaryFrame::swap(n, i - 1, j - 1)};
  }
  if (spec.rfind("haar:", 0) == 0) return {spec, sample_haar_unitary(n, parse_count(spec.substr(5)))};
  throw ConfigError("unknown frame '" + spec + "' (identity | swap:I,J | haar:SEED)");
}

WeightFunction weight_from(const json& cfg, std::size_t m) {
  const std::string spec = cfg["weight"].get<std::string>();
  if (spec == "ball") return ball_weight(static_cast<double>(m));
  if (spec.rfind("ball:", 0) == 0) return ball_weight(parse_real(spec.substr(5)));
  if (spec.rfind("slice:", 0) == 0) {
    const auto kl = split(spec.substr(6), ',');
    if (kl.size() != 2) throw ConfigError("weight slice:K,L needs two integers");
    return ellipsoid_slice_weight(static_cast<int>(parse_count(kl[0])), static_cast<int>(parse_count(kl[1])));
  }
  throw ConfigError("unknown weight '" + spec + "' (ball | ball:M | slice:K,L)");
}

CPoint center_from(const json& cfg, const char* key, std::size_t n, Complex first = 0.0) {
  if (!cfg.contains(key)) {
    std::vector<Complex> z(n, 0.0);
    z[0] = first;
    return CPoint(z);
  }
  const auto z = parse_complex_list(cfg[key].get<std::string>());
  if (z.size() != n) throw ConfigError(std::string(key) + " needs " + std::to_string(n) + " coordinates");
  return CPoint(z);
}

std::vector<double> real_center_from(const json& cfg, std::size_t m) {
  if (!cfg.contains("center")) return std::vector<double>(m, 0.0);
  const auto x = parse_real_list(cfg["center"].get<std::string>());
  if (x.size() != m) throw ConfigError("center needs " + std::to_string(m) + " coordinates");
  return x;
}

std::vector<Ellipsoid> ellipsoids_from(const json& cfg, std::size_t n) {
  std::vector<Ellipsoid> out;
  for (const auto& r : cfg["radii"]) {
    auto radii = r.get<std::vector<double>>();
    if (radii.size() == 1 && n > 1) radii.assign(n, radii[0]);
    if (radii.size() != n) throw ConfigError("each ellipsoid needs 1 or " + std::to_string(n) + " radii");
    out.emplace_back(std::move(radii));
  }
  return out;
}

CheckOptions options_from(const json& cfg, std::size_t n) {
  CheckOptions o;
  o.budget = cfg["budget"].get<std::size_t>();
  o.seed = cfg["seed"].get<std::uint64_t>();
  o.escalate = cfg.value("escalate", true);
  if (cfg.contains("domain_radius")) o.domain = DomainBall{std::vector<Complex>(n, 0.0), cfg["domain_radius"].get<double>()};
  return o;
}

// ---- commands -------------------------------------------------------------

struct Outcome {
  json result;
  std::vector<std::string> csv_header;
  std::vector<std::vector<std::string>> csv_rows;
  int exit_code = kExitConsistent;
};

int exit_for(Status s) {
  switch (s) {
    case Status::Consistent: return kExitConsistent;
    case Status::Violation: return kExitViolation;
    case Status::Inconclusive: return kExitInconclusive;
  }
  return kExitError;
}

std::vector<std::string> coordinate_header(std::size_t m) {
  std::vector<std::string> h;
  for (std::size_t j = 1; j <= m; ++j) h.push_back("x" + std::to_string(j));
  return h;
}

std::vector<std::string> coordinate_cells(std::span<const double> x) {
  std::vector<std::string> c;
  for (double v : x) c.push_back(format_double(v));
  return c;
}

Outcome run_check(const json& cfg) {
  const Function fn = function_from(cfg);
  const std::string check = cfg["check"].get<std::string>();
  const std::uint64_t seed = cfg["seed"].get<std::uint64_t>();
  const CheckOptions opts = options_from(cfg, fn.n);
  CheckResult res;
  std::vector<std::vector<double>> coords;  // per reported row, real embedding

  if (check == "subharmonic-p" || check == "harmonic-p") {
    const auto grid = real_grid_points(cfg["grid"].get<std::string>(), fn.m, seed, false, nullptr);
    const WeightFunction p = weight_from(cfg, fn.m);
    const std::size_t t_nodes = cfg["t_nodes"].get<std::size_t>();
    if (check == "subharmonic-p") {
      res = check_subharmonic_p(fn.expression.as_real_eval_fn(), grid, p, schedule_from(cfg["sched"]), opts, t_nodes);
    } else {
      const auto r_list = cfg["r_list"].get<std::vector<double>>();
      res = check_harmonic_p(fn.expression.as_real_eval_fn(), grid, p, r_list, opts, t_nodes);
    }
    coords = grid;
  } else if (check == "monotonicity") {
    const CPoint z0 = center_from(cfg, "center", fn.n);
    const auto [label, frame] = single_frame_from(cfg, fn.n);
    const std::size_t axis = cfg["axis"].get<std::size_t>();
    if (axis < 1 || axis > fn.n) throw ConfigError("axis is 1-based and at most n");
    const Ellipsoid base = cfg.contains("radii") ? ellipsoids_from(cfg, fn.n).at(0)
                                                 : Ellipsoid(std::vector<double>(fn.n, cfg["r0"].get<double>()));
    const auto steps = cfg["steps"].get<std::vector<double>>();
    res = monotonicity_scan(fn.expression.as_eval_fn(), z0, frame, base, axis - 1, steps, opts);
    for (std::size_t k = 0; k < res.points.size(); ++k) coords.push_back(to_real(z0));
  } else if (check == "line-subharmonic") {
    const CPoint z0 = center_from(cfg, "center", fn.n);
    const CPoint dir = center_from(cfg, "direction", fn.n, 1.0);
    const auto r_list = cfg["r_list"].get<std::vector<double>>();
    res.verdict = line_subharmonic_check(fn.expression.as_eval_fn(), z0, dir, r_list, opts.budget, seed);
  } else {
    std::vector<CPoint> grid;
    const std::string spec = cfg["grid"].get<std::string>();
    if (trim(spec).rfind("points:", 0) == 0) {
      real_grid_points(spec, fn.m, seed, true, &grid);
    } else {
      for (const auto& x : real_grid_points(spec, fn.m, seed, false, nullptr)) grid.push_back(to_complex(x));
    }
    const FrameList frames = frames_from(cfg, fn.n);
    const EvalFn u = fn.expression.as_eval_fn();
    if (check == "mean-b") {
      const auto ellipsoids = cfg.contains("radii") ? ellipsoids_from(cfg, fn.n)
                                                    : radius_lattice(fn.n, cfg["r0"].get<double>());
      res = check_mean_value_b(u, grid, frames, ellipsoids, opts);
    } else if (check == "mean-d") {
      res = check_mean_value_d(u, grid, frames, cfg["r0"].get<double>(), opts);
    } else if (check == "bp-psh") {
      res = check_bp_psh(u, grid, frames, schedule_from(cfg["sched"]), schedule_from(cfg["short_sched"]), opts);
    } else {
      throw ConfigError("unknown check '" + check +
                        "' (mean-b | mean-d | bp-psh | subharmonic-p | harmonic-p | monotonicity | line-subharmonic)");
    }
    for (const auto& z : grid) coords.push_back(to_real(z));
  }

  Outcome o;
  o.exit_code = exit_for(res.verdict.status);
  json points = json::array();
  o.csv_header = {"index", "status", "center_value", "margin", "std_error", "frame"};
  for (const auto& h : coordinate_header(fn.m)) o.csv_header.push_back(h);
  for (const auto& p : res.points) {
    json j{{"index", p.index}, {"status", p.status}, {"center_value", num(p.center_value)},
           {"margin", num(p.margin)}, {"std_error", num(p.std_error)}};
    if (!p.frame_label.empty()) j["frame"] = p.frame_label;
    const std::vector<double>& x = coords.at(p.index < coords.size() ? p.index : 0);
    j["point"] = real_vector_json(x);
    points.push_back(std::move(j));
    std::vector<std::string> row{std::to_string(p.index), p.status, format_double(p.center_value),
                                 format_double(p.margin), format_double(p.std_error), p.frame_label};
    for (auto& c : coordinate_cells(x)) row.push_back(std::move(c));
    o.csv_rows.push_back(std::move(row));
  }
  o.result = json{{"check", check}, {"verdict", verdict_json(res.verdict)}, {"points", std::move(points)}};
  return o;
}

Outcome run_mean(const json& cfg) {
  const Function fn = function_from(cfg);
  const CPoint z0 = center_from(cfg, "center", fn.n);
  const auto [label, frame] = single_frame_from(cfg, fn.n);
  const auto ellipsoids = ellipsoids_from(cfg, fn.n);
  Outcome o;
  json estimates = json::array();
  o.csv_header = {"index", "value", "std_error", "samples", "minus_infinity_samples", "radii"};
  for (std::size_t k = 0; k < ellipsoids.size(); ++k) {
    const MeanEstimate m = mean_over_ellipsoid(fn.expression.as_eval_fn(), z0, frame, ellipsoids[k],
                                               cfg["budget"].get<std::size_t>(), cfg["seed"].get<std::uint64_t>());
    estimates.push_back(json{{"radii", real_vector_json(ellipsoids[k].radii())},
                             {"value", num(m.value)},
                             {"std_error", num(m.std_error)},
                             {"samples", m.samples},
                             {"hit_minus_infinity", m.hit_minus_infinity},
                             {"minus_infinity_samples", m.minus_infinity_samples}});
    std::string radii;
    for (double r : ellipsoids[k].radii()) radii += (radii.empty() ? "" : ";") + format_double(r);
    o.csv_rows.push_back({std::to_string(k), format_double(m.value), format_double(m.std_error),
                          std::to_string(m.samples), std::to_string(m.minus_infinity_samples), radii});
  }
  o.result = json{{"center", complex_vector_json(z0.coords())},
                  {"frame", frame_json(label, frame)},
                  {"estimates", std::move(estimates)}};
  return o;
}

Outcome run_laplacian(const json& cfg) {
  const Function fn = function_from(cfg);
  const std::string op = cfg["operator"].get<std::string>();
  const std::size_t budget = cfg["budget"].get<std::size_t>();
  const std::uint64_t seed = cfg["seed"].get<std::uint64_t>();
  const LimsupSchedule sched = schedule_from(cfg["sched"]);
  std::vector<std::vector<double>> coords;
  std::vector<OperatorEstimate> estimates;
  std::vector<bool> skipped;
  // Points with u = -inf have no operator value; they are reported, not fatal.
  auto push = [&](auto&& compute) {
    try {
      estimates.push_back(compute());
      skipped.push_back(false);
    } catch (const PreconditionError&) {
      OperatorEstimate est;
      est.value = std::numeric_limits<double>::quiet_NaN();
      est.center_value = kMinusInfinity;
      est.inconclusive = true;
      estimates.push_back(std::move(est));
      skipped.push_back(true);
    }
  };

  if (op == "bp" || op == "p") {
    coords = real_grid_points(cfg["grid"].get<std::string>(), fn.m, seed, false, nullptr);
    const RealEvalFn u = fn.expression.as_real_eval_fn();
    for (const auto& x : coords) {
      if (op == "bp") push([&] { return bp_laplacian(u, x, sched, budget, seed); });
      else
        push([&] {
          return p_laplacian(u, x, weight_from(cfg, fn.m), sched, budget, seed, cfg["t_nodes"].get<std::size_t>());
        });
    }
  } else if (op == "d" || op == "dT") {
    std::vector<CPoint> grid;
    const std::string spec = cfg["grid"].get<std::string>();
    if (trim(spec).rfind("points:", 0) == 0) real_grid_points(spec, fn.m, seed, true, &grid);
    else
      for (const auto& x : real_grid_points(spec, fn.m, seed, false, nullptr)) grid.push_back(to_complex(x));
    const EvalFn u = fn.expression.as_eval_fn();
    const LimsupSchedule short_sched = schedule_from(cfg["short_sched"]);
    for (const auto& z : grid) {
      coords.push_back(to_real(z));
      if (op == "d") {
        push([&] { return d_upper_over(u, z, frames_from(cfg, fn.n), sched, short_sched, budget, seed); });
      } else {
        const auto [label, frame] = single_frame_from(cfg, fn.n);
        push([&] { return d_upper_T(u, z, frame, sched, short_sched, budget, seed); });
      }
    }
  } else {
    throw ConfigError("unknown operator '" + op + "' (bp | p | d | dT)");
  }

  Outcome o;
  json list = json::array();
  o.csv_header = {"index", "value", "std_error", "center_value", "inconclusive", "skipped", "best_frame"};
  for (const auto& h : coordinate_header(fn.m)) o.csv_header.push_back(h);
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    const auto& est = estimates[i];
    json j = operator_json(est);
    j["index"] = i;
    if (skipped[i]) j["skipped"] = true;
    j["point"] = real_vector_json(coords[i]);
    list.push_back(std::move(j));
    std::vector<std::string> row{std::to_string(i), format_double(est.value), format_double(est.std_error),
                                 format_double(est.center_value), est.inconclusive ? "true" : "false",
                                 skipped[i] ? "true" : "false",
                                 est.frames.empty() ? "" : est.frames[est.best_frame].label};
    for (auto& c : coordinate_cells(coords[i])) row.push_back(std::move(c));
    o.csv_rows.push_back(std::move(row));
  }
  o.result = json{{"operator", op}, {"estimates", std::move(list)}};
  return o;
}

Outcome run_catalog(const json& cfg) {
  std::optional<Label> filter;
  if (cfg.contains("filter")) {
    filter = label_from_string(cfg["filter"].get<std::string>());
    if (!filter) throw ConfigError("unknown label filter '" + cfg["filter"].get<std::string>() + "'");
  }
  Outcome o;
  json entries = json::array();
  o.csv_header = {"name", "label", "space", "dimension", "smoothness", "expression"};
  for (const auto& e : catalog()) {
    if (filter && e.label != *filter) continue;
    entries.push_back(json{{"name", e.name},
                           {"expression", e.expression},
                           {"space", std::string(to_string(e.space))},
                           {"dimension", e.dimension},
                           {"label", std::string(to_string(e.label))},
                           {"smoothness", std::string(to_string(e.smoothness))},
                           {"note", e.provenance}});
    o.csv_rows.push_back({e.name, std::string(to_string(e.label)), std::string(to_string(e.space)),
                          std::to_string(e.dimension), std::string(to_string(e.smoothness)), e.expression});
  }
  o.result = json{{"entries", std::move(entries)}};
  return o;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

void write_csv(std::ostream& os, const Outcome& o) {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_cell(cells[i]);
    os << '\n';
  };
  line(o.csv_header);
  for (const auto& r : o.csv_rows) line(r);
}

void report_expression_error(std::ostream& err, const expr::ExpressionError& e, const std::string& source) {
  err << "error: " << e.what() << '\n';
  if (!source.empty()) {
    err << "  " << source << '\n' << "  " << std::string(std::min(e.offset(), source.size()), ' ') << "^\n";
  }
  if (const auto* se = dynamic_cast<const expr::SyntaxError*>(&e); se && !se->expected().empty()) {
    err << "  expected one of:";
    for (const auto& t : se->expected()) err << ' ' << t;
    err << '\n';
  }
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config_file, "JSON config file (or a previous report)");
  sub->add_option("--expr", f.expr, "Function expression");
  sub->add_option("--catalog", f.catalog, "Catalog entry name");
  sub->add_option("--dim", f.dim, "Complex dimension n");
  sub->add_option("--real-dim", f.real_dim, "Real dimension m for real-space operators");
  sub->add_option("--grid", f.grid, "origin | points:a,b;c,d | box:LO:HI:K | random:N:LO:HI");
  sub->add_option("--budget", f.budget, "Monte Carlo draws per estimate");
  sub->add_option("--seed", f.seed, "Base seed");
  sub->add_option("--frames", f.frames, "identity | swaps | haar:K | all");
  sub->add_option("--haar-count", f.haar_count, "Haar frames added by --frames all");
  sub->add_option("--frame", f.frame, "identity | swap:I,J | haar:SEED");
  sub->add_option("--sched-start", f.sched_start, "First radius of the limsup schedule");
  sub->add_option("--sched-ratio", f.sched_ratio, "Geometric ratio of the limsup schedule");
  sub->add_option("--sched-count", f.sched_count, "Number of radii in the limsup schedule");
  sub->add_option("--sched-window", f.sched_window, "Tail radii standing in for the limsup");
  sub->add_option("--short-start", f.short_start, "First relative short radius");
  sub->add_option("--short-ratio", f.short_ratio, "Ratio of the short-radius schedule");
  sub->add_option("--short-count", f.short_count, "Number of short radii");
  sub->add_option("--short-window", f.short_window, "Tail window of the short schedule");
  sub->add_option("--radii", f.radii, "Ellipsoid radii, e.g. 0.1,0.05;0.05,0.1");
  sub->add_option("--r0", f.r0, "Largest radius of the (R, r) lattice");
  sub->add_option("--r-list", f.r_list, "Comma-separated radii");
  sub->add_option("--weight", f.weight, "ball | ball:M | slice:K,L");
  sub->add_option("--t-nodes", f.t_nodes, "Gauss-Legendre nodes for weighted means");
  sub->add_option("--center", f.center, "Comma-separated coordinates");
  sub->add_option("--direction", f.direction, "Line direction for line-subharmonic");
  sub->add_option("--axis", f.axis, "1-based axis for monotonicity");
  sub->add_option("--steps", f.steps, "Increasing radii for monotonicity");
  sub->add_option("--domain-radius", f.domain_radius, "Radius of the domain ball around the origin");
  sub->add_flag("--no-escalate", f.no_escalate, "Disable the 10x budget re-run of borderline violations");
  sub->add_option("--threads", f.threads, "Worker threads (not part of the report)");
  sub->add_option("--format", f.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--out", f.out, "Output file (default stdout)");
}

}  // namespace

std::vector<CPoint> parse_complex_grid(std::string_view spec, std::size_t n, std::uint64_t seed) {
  std::vector<CPoint> grid;
  if (trim(spec).rfind("points:", 0) == 0) {
    real_grid_points(spec, 2 * n, seed, true, &grid);
  } else {
    for (const auto& x : real_grid_points(spec, 2 * n, seed, false, nullptr)) grid.push_back(to_complex(x));
  }
  return grid;
}

std::vector<std::vector<double>> parse_real_grid(std::string_view spec, std::size_t m, std::uint64_t seed) {
  return real_grid_points(spec, m, seed, false, nullptr);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Plurisubharmonicity checks by Monte Carlo mean values", "pshcheck"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", PSHCHECK_VERSION);
  Flags f;
  for (const auto& [name, help] : std::vector<std::pair<const char*, const char*>>{
           {"check", "Run a named criterion over a grid"},
           {"mean", "Mean value over an ellipsoid"},
           {"laplacian", "Operator estimates (bp | p | d | dT)"},
           {"catalog", "List catalog functions"},
           {"scan", "Grid sweep of the frame-minimized operator"}}) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, f);
    if (std::string_view(name) == "check") sub->add_option("--check", f.check, "Criterion name");
    if (std::string_view(name) == "laplacian") sub->add_option("--operator", f.op, "bp | p | d | dT");
    if (std::string_view(name) == "catalog") sub->add_option("--filter", f.filter, "Only entries with this label");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? 0 : kExitUsage;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  std::string source;
  try {
    if (f.threads) set_worker_count(*f.threads);
    const auto start = std::chrono::steady_clock::now();
    const json cfg = resolve_config(command, f);
    source = cfg.value("expr", "");
    Outcome o;
    if (command == "check") o = run_check(cfg);
    else if (command == "mean") o = run_mean(cfg);
    else if (command == "laplacian" || command == "scan") o = run_laplacian(cfg);
    else o = run_catalog(cfg);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::ostringstream text;
    if (cfg["format"] == "csv") {
      write_csv(text, o);
    } else {
      json report{{"schema", kReportSchema},
                  {"tool_version", PSHCHECK_VERSION},
                  {"config", cfg},
                  {"result", o.result},
                  {"wall_time_s", wall}};
      text << report.dump(2) << '\n';
    }
    if (f.out) {
      std::ofstream file(*f.out, std::ios::binary);
      if (!file) throw ConfigError("cannot write '" + *f.out + "'");
      file << text.str();
    } else {
      out << text.str();
    }
    return o.exit_code;
  } catch (const expr::ExpressionError& e) {
    report_expression_error(err, e, f.expr.value_or(source));
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kExitUsage;
  } catch (const json::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace psh::cli
