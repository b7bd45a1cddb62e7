#include "nlperim/asymptotics.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace nlperim {

UniversalConstants universal_constants(int d) {
  if (d < 1) throw ValidationError("dimension must be at least 1");
  UniversalConstants c;
  c.varpi = unit_ball_volume(d);
  c.kappa = d * c.varpi;
  c.K1d = 2.0 * unit_ball_volume(d - 1);
  return c;
}

Regime regime_from_string(const std::string& s) {
  if (s == "classical_uniform") return Regime::classical_uniform;
  if (s == "classical_mu") return Regime::classical_mu;
  if (s == "lebesgue") return Regime::lebesgue;
  if (s == "aniso_moment_body") return Regime::aniso_moment_body;
  if (s == "aniso_volume") return Regime::aniso_volume;
  if (s == "j_kernel") return Regime::j_kernel;
  if (s == "j_total_mass") return Regime::j_total_mass;
  throw ValidationError("unknown regime '" + s + "'");
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::classical_uniform: return "classical_uniform";
    case Regime::classical_mu: return "classical_mu";
    case Regime::lebesgue: return "lebesgue";
    case Regime::aniso_moment_body: return "aniso_moment_body";
    case Regime::aniso_volume: return "aniso_volume";
    case Regime::j_kernel: return "j_kernel";
    case Regime::j_total_mass: return "j_total_mass";
  }
  return "?";
}

bool concentrates_at_zero(Regime r) {
  switch (r) {
    case Regime::classical_uniform:
    case Regime::classical_mu:
    case Regime::aniso_moment_body:
    case Regime::j_kernel: return true;
    default: return false;
  }
}

namespace {

template <class T>
const T& need(const std::optional<T>& v, Regime r, const char* what) {
  if (!v) throw ValidationError("regime " + to_string(r) + " needs " + what);
  return *v;
}

// 1/2 int_{∂*E} int |n.theta| mu(dtheta)
double projected_boundary(const SetGeometry& s, const SphericalMeasure& mu, const SphereResolution& res) {
  const auto nodes = mu.nodes(res);
  return 0.5 * boundary_integral(
                   s,
                   [&](const Point& n) {
                     double acc = 0.0;
                     for (const auto& node : nodes) acc += node.weight * std::abs(dot(n, node.theta));
                     return acc;
                   },
                   res);
}

}  // namespace

LimitTarget limit_target(Regime regime, const TargetPayload& p) {
  const SetGeometry& s = need(p.shape, regime, "a shape");
  const int d = dimension(s);
  LimitTarget t;
  t.regime = regime;
  std::ostringstream os;
  switch (regime) {
    case Regime::classical_uniform: {
      const auto c = universal_constants(d);
      t.value = c.K1d / (2.0 * c.kappa) * classical_perimeter(s);
      os << "K_{1,d}/(2 kappa_{d-1}) Per(E)";
      break;
    }
    case Regime::classical_mu:
      t.value = projected_boundary(s, need(p.mu, regime, "a spherical measure mu"), p.sphere);
      os << "1/2 int |n.theta| mu";
      break;
    case Regime::lebesgue:
      t.value = volume(s);
      os << "|E|";
      break;
    case Regime::aniso_moment_body:
      t.value = perimeter_wrt_moment_body(s, need(p.body, regime, "a convex body"), 1e-10, p.sphere);
      os << "Per(E, ZK)";
      break;
    case Regime::aniso_volume: {
      const ConvexBody& K = need(p.body, regime, "a convex body");
      t.value = d * K.volume() * volume(s);
      os << "d |K| |E|";
      break;
    }
    case Regime::j_kernel: {
      const KernelSpec& J = need(p.kernel, regime, "a kernel");
      const MeasureSpec m = MeasureSpec::kernel(d, J);
      const double CJ = m.moment(1, 0.0, kInfinity);
      if (!std::isfinite(CJ)) throw ValidationError("j_kernel target needs int |x| J < infinity");
      ScalingFamily fam{m};
      fam.rule = ScalingRule::kernel_shrink;
      const SphericalMeasure mu = sphere_projection(fam, 1.0, p.sphere);
      t.value = CJ * projected_boundary(s, mu, p.sphere);
      os << "(C_J/2) int |n.theta| mu_J, C_J = " << CJ;
      break;
    }
    case Regime::j_total_mass: {
      const KernelSpec& J = need(p.kernel, regime, "a kernel");
      const double mass = MeasureSpec::kernel(d, J).mass(0.0, kInfinity);
      if (!std::isfinite(mass)) throw ValidationError("j_total_mass target needs J in L^1");
      t.value = mass * volume(s);
      os << "||J||_1 |E|";
      break;
    }
  }
  if (p.factor != 1.0) os << " times " << p.factor;
  t.value *= p.factor;
  t.description = os.str();
  if (!std::isfinite(t.value)) throw NumericalError("limit target is not finite");
  return t;
}

std::optional<double> extrapolate_linear(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3) return std::nullopt;
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = n - 3; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = 3.0 * sxx - sx * sx;
  if (!(std::abs(den) > 0.0)) return std::nullopt;
  const double slope = (3.0 * sxy - sx * sy) / den;
  return (sy - slope * sx) / 3.0;
}

LambdaGate check_lambda(const ScalingFamily& fam, const std::vector<double>& grid, Regime regime,
                        const std::vector<double>& radii) {
  LambdaGate g;
  g.direction = concentrates_at_zero(regime) ? "zero" : "one";
  g.radii = radii;
  if (grid.size() < 2) {
    g.diagnostic = "grid needs at least two points";
    return g;
  }
  g.passed = true;
  std::ostringstream os;
  for (double R : radii) {
    const double a = lambda_tail(fam, grid.front(), R);
    const double b = lambda_tail(fam, grid.back(), R);
    g.first.push_back(a);
    g.extreme.push_back(b);
    bool ok;
    if (g.direction == "zero") {
      ok = (b < a || b <= 1e-14) && b < 0.5;
    } else {
      ok = (b > a || b >= 1.0 - 1e-14) && b > 0.5;
    }
    if (!ok) {
      g.passed = false;
      os << "R=" << R << ": lambda " << a << " -> " << b << " does not move toward " << g.direction << "; ";
    }
  }
  g.diagnostic = os.str();
  return g;
}

namespace {

double small_parameter(const ScalingFamily& fam, Regime regime, double p, double C) {
  if (fam.rule == ScalingRule::alpha_family) return concentrates_at_zero(regime) ? 1.0 - p : p;
  if (fam.normalization == Normalization::tail_mass) return 1.0 / C;
  return p;
}

std::string small_parameter_name(const ScalingFamily& fam, Regime regime) {
  if (fam.rule == ScalingRule::alpha_family) return concentrates_at_zero(regime) ? "1-alpha" : "alpha";
  if (fam.normalization == Normalization::tail_mass) return "1/C_eps";
  return "epsilon";
}

bool needs_grid(const SetGeometry& s) {
  return std::holds_alternative<Polygon>(s) || std::holds_alternative<VoxelSet>(s);
}

template <class F>
void parallel_for(std::size_t n, int threads, F&& f) {
  const int t = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) f(i);
  };
  std::vector<std::thread> pool;
  for (int k = 1; k < std::min<int>(t, static_cast<int>(n)); ++k) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
}

using RowFn = std::function<void(SweepRow&)>;

void finish(SweepResult& r) {
  std::vector<double> xs, ys;
  for (const auto& row : r.rows) {
    if (!row.error.empty()) continue;
    xs.push_back(row.small);
    ys.push_back(row.normalized);
  }
  r.extrapolated = extrapolate_linear(xs, ys);
  r.residual = r.extrapolated ? std::abs(*r.extrapolated - r.target) / std::abs(r.target)
                              : std::numeric_limits<double>::quiet_NaN();
  const SweepRow* first = nullptr;
  const SweepRow* last = nullptr;
  for (const auto& row : r.rows) {
    if (!row.error.empty()) continue;
    if (!first) first = &row;
    last = &row;
  }
  r.residual_decreasing = first && last && first != last && last->residual < first->residual;
}

void run_rows(SweepResult& r, const std::vector<double>& grid, int threads, const RowFn& fn) {
  r.rows.resize(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    SweepRow& row = r.rows[i];
    row.param = grid[i];
    row.target = r.target;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      fn(row);
      row.residual = std::abs(row.normalized - row.target) / std::abs(row.target);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    row.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  });
  finish(r);
}

void check_grid(const std::vector<double>& small) {
  for (std::size_t i = 1; i < small.size(); ++i) {
    if (!(small[i] < small[i - 1])) {
      throw ValidationError("sweep grid must be strictly monotone toward the limit point");
    }
  }
}

}  // namespace

SweepResult sweep(const ScalingFamily& fam, const SetGeometry& shape, const LimitTarget& target,
                  const std::vector<double>& grid, const SweepOptions& o) {
  if (grid.empty()) throw ValidationError("sweep grid is empty");
  if (fam.base.dimension() != dimension(shape)) {
    throw ValidationError("family and shape dimensions differ");
  }
  SweepResult r;
  r.regime = to_string(target.regime);
  r.small_parameter = small_parameter_name(fam, target.regime);
  r.target = target.value;
  if (fam.rule == ScalingRule::alpha_family || fam.normalization != Normalization::tail_mass) {
    std::vector<double> xs;
    for (double p : grid) xs.push_back(small_parameter(fam, target.regime, p, 1.0));
    check_grid(xs);
  }
  if (o.check_lambda) {
    r.gate = check_lambda(fam, grid, target.regime, o.lambda_radii);
  } else {
    r.gate.diagnostic = "not checked";
  }

  std::optional<Covariogram> exact;
  if (std::holds_alternative<VoxelSet>(shape)) {
    exact = covariogram_grid(std::get<VoxelSet>(shape));
    r.h_rule = "fixed voxel input";
  } else if (!needs_grid(shape)) {
    exact = covariogram_exact(std::visit(
        [](const auto& s) -> Shape {
          if constexpr (std::is_same_v<std::decay_t<decltype(s)>, VoxelSet>) {
            throw ValidationError("unreachable");
          } else {
            return s;
          }
        },
        shape));
    r.h_rule = "exact covariogram";
  } else {
    std::ostringstream os;
    os << "h = min(h0, x/4), h0 = " << o.h0;
    r.h_rule = os.str();
  }

  run_rows(r, grid, o.threads, [&](SweepRow& row) {
    const MeasureSpec m = fam.at(row.param);
    row.C = normalization_constant(fam, row.param);
    row.small = small_parameter(fam, target.regime, row.param, row.C);
    PerimeterResult p;
    if (exact) {
      p = per_nu(*exact, m, o.q);
      if (std::holds_alternative<VoxelSet>(shape)) row.h = std::get<VoxelSet>(shape).h;
    } else {
      row.h = std::min(o.h0, row.small / 4.0);
      const VoxelSet v = rasterize(Shape{std::get<Polygon>(shape)}, row.h);
      p = per_nu(covariogram_grid(v), m, o.q);
    }
    row.per_nu = p.value;
    row.normalized = p.value / row.C;
    row.err_est = p.abs_error / row.C;
  });
  return r;
}

SweepResult aniso_sweep(const ConvexBody& K, const SetGeometry& shape, AlphaDirection dir,
                        const std::vector<double>& grid, const SweepOptions& o) {
  ScalingFamily fam{MeasureSpec::anisotropic_stable(K, 0.5)};
  fam.rule = ScalingRule::alpha_family;
  TargetPayload tp;
  tp.shape = shape;
  tp.body = K;
  tp.sphere = o.q.sphere;
  if (dir == AlphaDirection::up) {
    fam.normalization = Normalization::one_minus_alpha;
    fam.lambda_mode = Normalization::cap_at_R;
    return sweep(fam, shape, limit_target(Regime::aniso_moment_body, tp), grid, o);
  }
  fam.normalization = Normalization::alpha;
  fam.lambda_mode = Normalization::cap_at_one;
  return sweep(fam, shape, limit_target(Regime::aniso_volume, tp), grid, o);
}

SweepResult aniso_sobolev_sweep(const GridFunction& u, const ConvexBody& K, const std::vector<double>& grid,
                                const SweepOptions& o) {
  validate(u);
  if (u.d != K.dimension()) throw ValidationError("function and body dimensions differ");
  ScalingFamily fam{MeasureSpec::anisotropic_stable(K, 0.5)};
  fam.rule = ScalingRule::alpha_family;
  fam.normalization = Normalization::one_minus_alpha;
  fam.lambda_mode = Normalization::cap_at_R;

  std::vector<double> levels(u.values.begin(), u.values.end());
  levels.push_back(0.0);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  double target = 0.0;
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    if (levels[i] < 0.0) throw ValidationError("aniso_sobolev_sweep expects a nonnegative function");
    const VoxelSet s = superlevel_set(u, levels[i]);
    target += (levels[i + 1] - levels[i]) * perimeter_wrt_moment_body(SetGeometry{s}, K, 1e-10, o.q.sphere);
  }
  SweepResult r;
  r.regime = "aniso_sobolev";
  r.small_parameter = "1-alpha";
  r.h_rule = "fixed grid function";
  r.target = 2.0 * target;
  std::vector<double> xs;
  for (double a : grid) xs.push_back(1.0 - a);
  check_grid(xs);
  r.gate = o.check_lambda ? check_lambda(fam, grid, Regime::aniso_moment_body, o.lambda_radii) : LambdaGate{};
  run_rows(r, grid, o.threads, [&](SweepRow& row) {
    const PerimeterResult F = f_nu(u, fam.at(row.param), o.q);
    row.small = 1.0 - row.param;
    row.C = normalization_constant(fam, row.param);
    row.h = u.h;
    row.per_nu = 2.0 * F.value;
    row.normalized = row.per_nu / row.C;
    row.err_est = 2.0 * F.abs_error / row.C;
  });
  return r;
}

double dyadic_per_infinite(double alpha) {
  // Pairs beyond n = 40 interact at O(2^-40); past n = 52 the endpoint
  // n + 2^-n is no longer representable.
  constexpr int kTerms = 40;
  double cross = 0.0;
  for (int i = 1; i <= kTerms; ++i) {
    for (int j = i + 1; j <= kTerms; ++j) {
      cross += interval_interaction_stable({i, i + std::ldexp(1.0, -i)}, {j, j + std::ldexp(1.0, -j)}, alpha);
    }
  }
  return dyadic_example_inner(alpha) + 1.0 - 2.0 * cross;
}

std::vector<DyadicPoint> dyadic_divergence_study(const std::vector<double>& alphas) {
  std::vector<DyadicPoint> out;
  for (double a : alphas) out.push_back({a, dyadic_per_infinite(a)});
  return out;
}

MixtureStudy mixture_study(double p, const std::vector<int>& ns) {
  if (ns.size() < 2) throw ValidationError("mixture study needs at least two values of n");
  MixtureStudy st;
  st.p = p;
  std::vector<double> z;
  for (int n : ns) {
    if (n < 2) throw ValidationError("mixture index n must be at least 2");
    const double c = std::pow(static_cast<double>(n), -p);
    const double hi = c * dyadic_per_infinite(1.0 - 1.0 / n);
    st.n.push_back(n);
    st.value.push_back(dyadic_per_infinite(1.0 / n) + hi);
    z.push_back(hi);
  }
  const std::size_t k = z.size();
  st.growth_exponent = std::log(z[k - 1] / z[k - 2]) / std::log(static_cast<double>(ns[k - 1]) / ns[k - 2]);
  if (st.growth_exponent > 0.5) {
    st.classification = "unbounded";
  } else if (st.growth_exponent < -0.5) {
    st.classification = "converges_to_volume";
  } else {
    st.classification = "bounded";
  }
  return st;
}

}  // namespace nlperim
