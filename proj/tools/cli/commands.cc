#include "commands.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <variant>

#include "config.h"
#include "json.hpp"
#include "nlperim/asymptotics.h"
#include "nlperim/report.h"

namespace nlperim::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

Point point(const std::vector<double>& v, const std::string& key) {
  if (v.size() > 3) throw ValidationError(key + " has more than three coordinates");
  Point p{};
  for (std::size_t i = 0; i < v.size(); ++i) p[i] = v[i];
  return p;
}

std::vector<std::array<double, 2>> vertices(const Config& c, const std::string& key) {
  std::vector<std::array<double, 2>> out;
  for (const auto& r : c.rows(key)) {
    if (r.size() != 2) throw ValidationError(key + ": each vertex needs two coordinates");
    out.push_back({r[0], r[1]});
  }
  return out;
}

// ---------------------------------------------------------------------------
// [set]

bool is_step(const Config& c) { return c.get("set.kind", "") == "step"; }

SetGeometry build_set(const Config& c) {
  const std::string kind = c.get("set.kind");
  if (kind == "interval") return make_interval_union({{c.number("set.a"), c.number("set.b")}});
  if (kind == "intervals") {
    std::vector<std::pair<double, double>> iv;
    for (const auto& r : c.rows("set.intervals")) {
      if (r.size() != 2) throw ValidationError("set.intervals: each interval needs two endpoints");
      iv.emplace_back(r[0], r[1]);
    }
    return make_interval_union(std::move(iv));
  }
  if (kind == "dyadic") return dyadic_set(c.integer("set.n_max", 40));
  if (kind == "disk" || kind == "ball") {
    const int d = kind == "disk" ? 2 : c.integer("set.d", 2);
    const Point center = c.has("set.center") ? point(c.numbers("set.center"), "set.center") : Point{};
    return make_ball(d, c.number("set.radius", 1.0), center);
  }
  if (kind == "square") {
    const double s = c.number("set.side", 1.0);
    return make_box(2, {0, 0, 0}, {s, s, 0});
  }
  if (kind == "box") {
    const int d = c.integer("set.d", 2);
    return make_box(d, point(c.numbers("set.lo"), "set.lo"), point(c.numbers("set.hi"), "set.hi"));
  }
  if (kind == "polygon") return make_polygon(vertices(c, "set.vertices"));
  if (kind == "box_union") {
    const int d = c.integer("set.d", 2);
    std::vector<Box> boxes;
    for (const auto& r : c.rows("set.boxes")) {
      if (static_cast<int>(r.size()) != 2 * d) {
        throw ValidationError("set.boxes: each box needs " + std::to_string(2 * d) + " numbers");
      }
      Point lo{}, hi{};
      for (int i = 0; i < d; ++i) {
        lo[i] = r[i];
        hi[i] = r[d + i];
      }
      boxes.push_back(make_box(d, lo, hi));
    }
    return make_box_union(d, std::move(boxes));
  }
  if (kind == "voxels") {
    VoxelSet v = read_voxels(c.get("set.path"));
    validate(v);
    return v;
  }
  throw ValidationError("unknown set kind '" + kind + "'");
}

// Piecewise-constant function: a sum of value * indicator over steps
// "a b value" (d = 1) or "x0 y0 x1 y1 value" (d = 2), sampled at cell centres.
GridFunction build_step(const Config& c) {
  const int d = c.integer("set.d", 1);
  if (d != 1 && d != 2) throw ValidationError("step functions are supported in d = 1 and 2");
  const double h = c.number("set.h", d == 1 ? 1.0 / 64 : 1.0 / 32);
  if (!(h > 0.0)) throw ValidationError("set.h must be positive");
  const auto steps = c.rows("set.steps");
  if (steps.empty()) throw ValidationError("set.steps is empty");
  Point lo{HUGE_VAL, HUGE_VAL, 0}, hi{-HUGE_VAL, -HUGE_VAL, 0};
  for (const auto& s : steps) {
    if (static_cast<int>(s.size()) != 2 * d + 1) {
      throw ValidationError("set.steps: each step needs " + std::to_string(2 * d + 1) + " numbers");
    }
    for (int i = 0; i < d; ++i) {
      if (!(s[i] < s[d + i])) throw ValidationError("set.steps: empty step");
      lo[i] = std::min(lo[i], s[i]);
      hi[i] = std::max(hi[i], s[d + i]);
    }
  }
  GridFunction u;
  u.d = d;
  u.h = h;
  for (int i = 0; i < d; ++i) {
    const double a = (std::floor(lo[i] / h) - 2) * h;
    u.origin[i] = a;
    u.dims[i] = static_cast<int>(std::ceil((hi[i] - a) / h)) + 2;
  }
  u.values.assign(static_cast<std::size_t>(u.dims[0]) * u.dims[1], 0.0);
  for (int j = 0; j < u.dims[1]; ++j) {
    for (int i = 0; i < u.dims[0]; ++i) {
      const double x[2] = {u.origin[0] + (i + 0.5) * h, u.origin[1] + (j + 0.5) * h};
      double v = 0.0;
      for (const auto& s : steps) {
        bool in = true;
        for (int a = 0; a < d; ++a) in = in && x[a] > s[a] && x[a] < s[d + a];
        if (in) v += s[2 * d];
      }
      u.values[u.index(i, j)] = v;
    }
  }
  validate(u);
  return u;
}

Covariogram build_covariogram(const Config& c, const SetGeometry& s) {
  if (const auto* v = std::get_if<VoxelSet>(&s)) return covariogram_grid(*v);
  if (const auto* p = std::get_if<Polygon>(&s)) {
    return covariogram_grid(rasterize(Shape{*p}, c.number("set.h", 1.0 / 256)));
  }
  return covariogram_exact(std::visit(
      [](const auto& x) -> Shape {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, VoxelSet>) {
          throw ValidationError("unreachable");
        } else {
          return x;
        }
      },
      s));
}

// ---------------------------------------------------------------------------
// [body], [measure], [quadrature]

ConvexBody build_body(const Config& c) {
  const std::string kind = c.get("body.kind");
  if (kind == "ball") return ConvexBody::ball(c.integer("body.d", 2), c.number("body.radius", 1.0));
  if (kind == "ellipsoid") return ConvexBody::ellipsoid(c.numbers("body.semi_axes"));
  if (kind == "box") return ConvexBody::box(c.numbers("body.half_widths"));
  if (kind == "lp_ball") {
    return ConvexBody::lp_ball(c.integer("body.d", 2), c.number("body.p"), c.number("body.radius", 1.0));
  }
  if (kind == "polygon_sym") return ConvexBody::polygon_sym(vertices(c, "body.vertices"));
  throw ValidationError("unknown body kind '" + kind + "'");
}

KernelSpec build_kernel(const Config& c) {
  KernelSpec k;
  k.name = kernel_from_string(c.get("measure.kernel"));
  k.beta = c.number("measure.beta", 0.0);
  k.amplitude = c.number("measure.amplitude", 1.0);
  k.scale = c.number("measure.scale", 1.0);
  if (c.has("measure.cone_axis")) {
    k.cone_axis = point(c.numbers("measure.cone_axis"), "measure.cone_axis");
    k.cone_half_angle = c.number("measure.cone_half_angle");
  }
  return k;
}

SphericalMeasure build_sphere(const Config& c, int d) {
  const std::string kind = c.get("measure.sphere", "uniform");
  if (kind == "uniform") return SphericalMeasure::uniform(d);
  if (kind == "surface") return SphericalMeasure::surface(d);
  if (kind == "atoms") {
    std::vector<std::pair<Point, double>> atoms;
    for (const auto& r : c.rows("measure.directions")) {
      if (static_cast<int>(r.size()) != d + 1) {
        throw ValidationError("measure.directions: each atom needs d coordinates and a weight");
      }
      Point th{};
      for (int i = 0; i < d; ++i) th[i] = r[i];
      atoms.emplace_back(th, r[d]);
    }
    return SphericalMeasure::atoms(d, std::move(atoms));
  }
  throw ValidationError("unknown sphere kind '" + kind + "'");
}

MeasureSpec build_measure(const Config& c, int d_default) {
  const std::string kind = c.get("measure.kind");
  const int d = c.integer("measure.d", d_default);
  if (d != d_default) {
    throw ValidationError("measure dimension " + std::to_string(d) + " differs from set dimension " +
                          std::to_string(d_default));
  }
  if (kind == "fractional") return MeasureSpec::fractional(d, c.number("measure.alpha"));
  if (kind == "stable") return MeasureSpec::stable(d, c.number("measure.alpha"));
  if (kind == "anisotropic_stable") {
    c.require_section("body", "anisotropic_stable measure");
    return MeasureSpec::anisotropic_stable(build_body(c), c.number("measure.alpha"),
                                           c.number("measure.prefactor", 1.0));
  }
  if (kind == "kernel") return MeasureSpec::kernel(d, build_kernel(c));
  if (kind == "power") {
    return MeasureSpec::radial_spherical(
        RadialProfile::power(c.number("measure.alpha"), c.number("measure.prefactor", 1.0)),
        build_sphere(c, d));
  }
  if (kind == "atoms") {
    std::vector<std::pair<double, double>> rw;
    for (const auto& r : c.rows("measure.atoms")) {
      if (r.size() != 2) throw ValidationError("measure.atoms: each atom needs radius and weight");
      rw.emplace_back(r[0], r[1]);
    }
    return MeasureSpec::radial_spherical(RadialProfile::atoms(std::move(rw)), build_sphere(c, d));
  }
  throw ValidationError("unknown measure kind '" + kind + "'");
}

QuadratureSpec build_quadrature(const Config& c) {
  QuadratureSpec q;
  q.rel_tol = c.number("quadrature.rel_tol", q.rel_tol);
  q.panels_per_decade = c.integer("quadrature.panels_per_decade", q.panels_per_decade);
  q.sphere.circle_points = c.integer("quadrature.circle_points", q.sphere.circle_points);
  q.sphere.polar_points = c.integer("quadrature.polar_points", q.sphere.polar_points);
  q.sphere.azimuth_points = c.integer("quadrature.azimuth_points", q.sphere.azimuth_points);
  q.r_min = c.number("quadrature.r_min", 0.0);
  q.r_max = c.number("quadrature.r_max", 0.0);
  if (!(q.rel_tol > 0.0)) throw ValidationError("quadrature.rel_tol must be positive");
  if (q.panels_per_decade < 1) throw ValidationError("quadrature.panels_per_decade must be >= 1");
  if (q.sphere.circle_points < 4 || q.sphere.circle_points % 2 != 0 || q.sphere.polar_points < 2 ||
      q.sphere.azimuth_points < 4 || q.sphere.azimuth_points % 2 != 0) {
    throw ValidationError("spherical resolution must be even and at least 4 points per angle");
  }
  return q;
}

json result_json(const PerimeterResult& r) {
  json j;
  j["value"] = num(r.value);
  j["abs_error"] = num(r.abs_error);
  j["rel_error"] = num(r.rel_error);
  j["breakdown"] = {
      {"near", num(r.breakdown.near)}, {"bulk", num(r.breakdown.bulk)}, {"tail", num(r.breakdown.tail)}};
  j["method"] = r.method;
  if (r.samples) j["samples"] = r.samples;
  j["warnings"] = r.warnings;
  return j;
}

json set_json(const SetGeometry& s) {
  json j;
  j["description"] = describe(s);
  j["volume"] = num(volume(s));
  try {
    j["classical_perimeter"] = num(classical_perimeter(s));
  } catch (const std::exception&) {
    j["classical_perimeter"] = nullptr;
  }
  return j;
}

// ---------------------------------------------------------------------------
// Sweeps

std::vector<double> sweep_grid(const Config& c, bool alpha_up) {
  if (c.has("sweep.grid")) return c.numbers("sweep.grid");
  if (!c.has("sweep.start") || !c.has("sweep.stop")) {
    throw ValidationError("[sweep] needs grid or start/stop");
  }
  const double a = c.number("sweep.start"), b = c.number("sweep.stop");
  const int n = c.integer("sweep.points", 6);
  if (n < 2) throw ValidationError("sweep.points must be at least 2");
  // Geometric in the distance to the limit point.
  const double xa = alpha_up ? 1.0 - a : a, xb = alpha_up ? 1.0 - b : b;
  if (!(xa > 0.0 && xb > 0.0)) throw ValidationError("sweep start/stop must be inside the range");
  std::vector<double> g;
  for (int i = 0; i < n; ++i) {
    const double x = xa * std::pow(xb / xa, static_cast<double>(i) / (n - 1));
    g.push_back(alpha_up ? 1.0 - x : x);
  }
  return g;
}

SweepOptions sweep_options(const Config& c, const QuadratureSpec& q, int threads) {
  SweepOptions o;
  o.q = q;
  o.threads = threads;
  o.h0 = c.number("sweep.h0", o.h0);
  if (c.has("sweep.lambda_radii")) o.lambda_radii = c.numbers("sweep.lambda_radii");
  return o;
}

json sweep_json(const SweepResult& r, double tol, const std::string& target_description) {
  json j;
  j["regime"] = r.regime;
  j["target"] = num(r.target);
  j["target_description"] = target_description;
  j["small_parameter"] = r.small_parameter;
  j["extrapolated"] = r.extrapolated ? num(*r.extrapolated) : json(nullptr);
  j["residual"] = num(r.residual);
  j["tolerance"] = tol;
  j["pass"] = r.extrapolated && r.residual <= tol && r.gate.passed;
  j["residual_decreasing"] = r.residual_decreasing;
  j["h_rule"] = r.h_rule;
  j["lambda_gate"] = {{"direction", r.gate.direction}, {"radii", r.gate.radii},
                      {"first", r.gate.first},         {"extreme", r.gate.extreme},
                      {"passed", r.gate.passed},       {"diagnostic", r.gate.diagnostic}};
  json rows = json::array();
  for (const auto& row : r.rows) {
    json x;
    x["param"] = row.param;
    x["small"] = num(row.small);
    x["C_eps"] = num(row.C);
    x["per_nu"] = num(row.per_nu);
    x["normalized"] = num(row.normalized);
    x["residual"] = num(row.residual);
    x["err_est"] = num(row.err_est);
    x["h"] = row.h;
    if (!row.error.empty()) x["error"] = row.error;
    rows.push_back(x);
  }
  j["rows"] = rows;
  return j;
}

int fail(const char* kind, const std::string& msg, int code) {
  std::string one = msg;
  for (char& ch : one) {
    if (ch == '\n') ch = ' ';
  }
  std::cerr << "nlperim: error kind=" << kind << " exit=" << code << ": " << one << "\n";
  return code;
}

struct Context {
  Config cfg;
  std::string command;
  std::uint64_t seed = 1;
  int threads = 0;
  fs::path out;
};

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + p.string());
  f << s;
}

json cmd_constants(const Context& ctx) {
  const int d = ctx.cfg.integer("run.d", 2);
  check_dimension(d);
  const auto c = universal_constants(d);
  return {{"d", d}, {"varpi", c.varpi}, {"kappa", c.kappa}, {"K1d", c.K1d}};
}

json cmd_perimeter(const Context& ctx) {
  const Config& c = ctx.cfg;
  c.require_section("set", ctx.command);
  c.require_section("measure", ctx.command);
  const SetGeometry s = build_set(c);
  const MeasureSpec m = build_measure(c, dimension(s));
  const Covariogram cov = build_covariogram(c, s);
  const PerimeterResult r = per_nu(cov, m, build_quadrature(c));
  json j = result_json(r);
  j["set"] = set_json(s);
  j["measure"] = m.describe();
  j["covariogram"] = cov.describe();
  return j;
}

json cmd_oracle(const Context& ctx) {
  const Config& c = ctx.cfg;
  c.require_section("set", ctx.command);
  c.require_section("measure", ctx.command);
  const SetGeometry s = build_set(c);
  if (std::holds_alternative<VoxelSet>(s)) throw ValidationError("the oracle needs an analytic shape");
  const MeasureSpec m = build_measure(c, dimension(s));
  OracleOptions o;
  o.samples = static_cast<std::uint64_t>(c.number("run.samples", 1e6));
  o.seed = ctx.seed;
  o.threads = ctx.threads;
  const Shape shape = std::visit(
      [](const auto& x) -> Shape {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, VoxelSet>) {
          throw ValidationError("unreachable");
        } else {
          return x;
        }
      },
      s);
  const PerimeterResult mc = per_nu_mc_oracle(shape, m, o);
  json j;
  j["monte_carlo"] = result_json(mc);
  j["monte_carlo"]["seed"] = o.seed;
  const PerimeterResult q = per_nu(build_covariogram(c, s), m, build_quadrature(c));
  j["quadrature"] = result_json(q);
  const double sigma = std::hypot(mc.abs_error, q.abs_error);
  j["z_score"] = num(sigma > 0.0 ? (mc.value - q.value) / sigma : 0.0);
  j["set"] = set_json(s);
  j["measure"] = m.describe();
  return j;
}

json cmd_coarea(const Context& ctx) {
  const Config& c = ctx.cfg;
  c.require_section("set", ctx.command);
  c.require_section("measure", ctx.command);
  if (!is_step(c)) throw ValidationError("coarea needs [set] kind = step");
  const GridFunction u = build_step(c);
  const MeasureSpec m = build_measure(c, u.d);
  const QuadratureSpec q = build_quadrature(c);
  const PerimeterResult lhs = f_nu(u, m, q);
  const PerimeterResult rhs = coarea_rhs(u, m, q);
  json j;
  j["f_nu"] = result_json(lhs);
  j["coarea_rhs"] = result_json(rhs);
  j["gap"] = num(std::abs(lhs.value - rhs.value));
  j["rel_gap"] = num(rhs.value > 0 ? std::abs(lhs.value - rhs.value) / rhs.value : 0.0);
  j["measure"] = m.describe();
  return j;
}

void emit_sweep(const Context& ctx, const SweepResult& r, const std::string& description, json& j) {
  const double tol = ctx.cfg.number("sweep.tolerance", 0.02);
  j = sweep_json(r, tol, description);
  std::ostringstream csv;
  write_series_csv(csv, r);
  write_text(ctx.out / "series.csv", csv.str());
}

double target_factor(const Config& c, int d) {
  const std::string f = c.get("sweep.target_factor", "1");
  if (f == "kappa") return universal_constants(d).kappa;
  return c.number("sweep.target_factor", 1.0);
}

json cmd_sweep(const Context& ctx) {
  const Config& c = ctx.cfg;
  for (const char* s : {"set", "measure", "sweep"}) c.require_section(s, ctx.command);
  const SetGeometry s = build_set(c);
  const int d = dimension(s);
  const MeasureSpec m = build_measure(c, d);
  const Regime regime = regime_from_string(c.get("sweep.regime"));
  const std::string rule = c.get("sweep.rule");
  ScalingFamily fam{m};
  fam.rule = scaling_rule_from_string(rule);
  const bool alpha_up = rule == "alpha_up" || (rule == "alpha_family" && concentrates_at_zero(regime));
  std::string norm_default = "cap_at_R";
  if (fam.rule == ScalingRule::alpha_family) norm_default = alpha_up ? "one_minus_alpha" : "alpha";
  fam.normalization = normalization_from_string(c.get("sweep.normalization", norm_default));
  fam.lambda_mode = normalization_from_string(
      c.get("sweep.lambda_mode", concentrates_at_zero(regime) ? "cap_at_R" : "cap_at_one"));
  const double R = c.number("sweep.R", 1.0);
  fam.R_rule = [R](double) { return R; };

  const std::vector<double> grid = sweep_grid(c, alpha_up);
  TargetPayload tp;
  tp.shape = s;
  tp.factor = target_factor(c, d);
  const QuadratureSpec q = build_quadrature(c);
  tp.sphere = q.sphere;
  if (c.has_section("body")) tp.body = build_body(c);
  if (m.kernel_spec()) tp.kernel = *m.kernel_spec();
  if (regime == Regime::classical_mu) tp.mu = sphere_projection(fam, grid.back(), q.sphere);
  const LimitTarget target = limit_target(regime, tp);
  const SweepResult r = sweep(fam, s, target, grid, sweep_options(c, q, ctx.threads));
  json j;
  emit_sweep(ctx, r, target.description, j);
  j["family"] = {{"rule", to_string(fam.rule)},
                 {"normalization", to_string(fam.normalization)},
                 {"lambda_mode", to_string(fam.lambda_mode)},
                 {"R", num(R)},
                 {"base", m.describe()}};
  return j;
}

json cmd_aniso(const Context& ctx) {
  const Config& c = ctx.cfg;
  for (const char* s : {"set", "body", "sweep"}) c.require_section(s, ctx.command);
  const ConvexBody K = build_body(c);
  const std::string dir = c.get("sweep.direction", "up");
  if (dir != "up" && dir != "down") throw ValidationError("sweep.direction must be up or down");
  const std::vector<double> grid = sweep_grid(c, dir == "up");
  const SweepOptions o = sweep_options(c, build_quadrature(c), ctx.threads);
  SweepResult r;
  std::string description;
  if (is_step(c)) {
    if (dir != "up") throw ValidationError("the anisotropic Sobolev limit is an alpha -> 1 limit");
    r = aniso_sobolev_sweep(build_step(c), K, grid, o);
    description = "2 sum gap Per({u > t}, ZK)";
  } else {
    const SetGeometry s = build_set(c);
    r = aniso_sweep(K, s, dir == "up" ? AlphaDirection::up : AlphaDirection::down, grid, o);
    description = dir == "up" ? "Per(E, ZK)" : "d |K| |E|";
  }
  json j;
  emit_sweep(ctx, r, description, j);
  j["body"] = K.describe();
  return j;
}

}  // namespace

int run(const RunOptions& o) {
  try {
    Context ctx;
    ctx.cfg = Config::parse_file(o.config_path);
    for (const auto& s : o.overrides) ctx.cfg.apply_override(s);
    ctx.cfg.require_section("run", "run");
    ctx.command = ctx.cfg.get("run.command");
    ctx.seed = o.seed ? *o.seed : static_cast<std::uint64_t>(ctx.cfg.number("run.seed", 1));
    ctx.threads = o.threads ? *o.threads : ctx.cfg.integer("run.threads", 0);
    ctx.out = o.out_dir ? fs::path(*o.out_dir) : fs::path(ctx.cfg.get("output.dir", "."));
    fs::create_directories(ctx.out);

    json body;
    if (ctx.command == "constants") {
      body = cmd_constants(ctx);
    } else if (ctx.command == "perimeter") {
      body = cmd_perimeter(ctx);
    } else if (ctx.command == "oracle") {
      body = cmd_oracle(ctx);
    } else if (ctx.command == "coarea") {
      body = cmd_coarea(ctx);
    } else if (ctx.command == "sweep") {
      body = cmd_sweep(ctx);
    } else if (ctx.command == "aniso") {
      body = cmd_aniso(ctx);
    } else {
      throw ValidationError("unknown command '" + ctx.command + "'");
    }

    const std::string hash = hex64(fnv1a64(ctx.cfg.canonical() + "seed=" + std::to_string(ctx.seed)));
    json result;
    result["command"] = ctx.command;
    result["inputs_hash"] = hash;
    result["result"] = body;
    write_text(ctx.out / "result.json", result.dump(2) + "\n");

    json manifest;
    manifest["tool"] = "nlperim";
    manifest["version"] = NLPERIM_VERSION;
    manifest["command"] = ctx.command;
    manifest["config"] = o.config_path;
    manifest["overrides"] = o.overrides;
    manifest["canonical_config"] = ctx.cfg.canonical();
    manifest["inputs_hash"] = hash;
    manifest["seed"] = ctx.seed;
    manifest["threads"] = ctx.threads;
    manifest["libraries"] = library_versions();
    manifest["outputs"] = json::array({"result.json"});
    if (fs::exists(ctx.out / "series.csv") && (ctx.command == "sweep" || ctx.command == "aniso")) {
      manifest["outputs"].push_back("series.csv");
    }
    write_text(ctx.out / "manifest.json", manifest.dump(2) + "\n");
    return 0;
  } catch (const ValidationError& e) {
    return fail("validation", e.what(), 2);
  } catch (const UnsupportedError& e) {
    return fail("unsupported", e.what(), 2);
  } catch (const NumericalError& e) {
    return fail("numerical", e.what(), 3);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 3);
  }
}

int plot(const std::string& csv_path, const std::string& out_path) {
  try {
    std::ifstream in(csv_path);
    if (!in) throw ValidationError("cannot read " + csv_path);
    std::string line;
    if (!std::getline(in, line) || line.empty()) throw ValidationError(csv_path + " is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kSeriesHeader) throw ValidationError(csv_path + ": unexpected header '" + line + "'");
    // regime -> (param, normalized, target)
    std::map<std::string, std::vector<std::array<std::string, 3>>> panels;
    int lineno = 1;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      std::vector<std::string> f;
      std::stringstream ss(line);
      for (std::string x; std::getline(ss, x, ',');) f.push_back(x);
      if (!line.empty() && line.back() == ',') f.emplace_back();
      if (f.size() != 9) {
        throw ValidationError(csv_path + ":" + std::to_string(lineno) + ": expected 9 fields");
      }
      try {
        std::size_t pos = 0;
        std::stod(f[0], &pos);
        if (pos != f[0].size()) throw std::invalid_argument("param");
      } catch (const std::exception&) {
        throw ValidationError(csv_path + ":" + std::to_string(lineno) + ": bad param '" + f[0] + "'");
      }
      if (f[8].empty()) throw ValidationError(csv_path + ":" + std::to_string(lineno) + ": no regime");
      panels[f[8]].push_back({f[0], f[3], f[4]});
    }
    if (panels.empty()) throw ValidationError(csv_path + " has no data rows");

    std::ostringstream g;
    g << "# gnuplot script generated by nlperim plot\n";
    g << "set terminal pngcairo size 640," << 360 * panels.size() << "\n";
    g << "set output '" << fs::path(out_path).replace_extension(".png").string() << "'\n";
    g << "set multiplot layout " << panels.size() << ",1\n";
    g << "set logscale x\nset grid\nset key bottom right\n";
    for (const auto& [regime, rows] : panels) {
      std::string target;
      for (const auto& r : rows) {
        if (!r[2].empty()) target = r[2];
      }
      g << "set title '" << regime << "' noenhanced\nset xlabel 'param'\nset ylabel 'normalized'\n";
      g << "$" << regime << " << EOD\n";
      for (const auto& r : rows) {
        if (!r[1].empty()) g << r[0] << " " << r[1] << "\n";
      }
      g << "EOD\n";
      g << "plot $" << regime << " using 1:2 with linespoints title 'C^{-1} Per'";
      if (!target.empty()) g << ", " << target << " with lines dashtype 2 title 'limit'";
      g << "\n";
    }
    g << "unset multiplot\n";
    write_text(out_path, g.str());
    return 0;
  } catch (const ValidationError& e) {
    return fail("validation", e.what(), 2);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 3);
  }
}

}  // namespace nlperim::cli
