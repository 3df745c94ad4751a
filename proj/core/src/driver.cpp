#include "yinyang/driver.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "yinyang/error.hpp"
#include "yinyang/field_dump.hpp"
#include "yinyang/operators.hpp"
#include "yinyang/parallel.hpp"

namespace yy {

double ConductiveShell::temperature(double, const Vec3& x) const {
  const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
  return (r1_ * r2_ / r - r1_) / (r2_ - r1_);
}

GravityFn make_gravity(const std::string& name) {
  if (name == "radial_in") return radial_inward_gravity;
  if (name == "radial_out") return [](const Vec3& x) {
    const Vec3 g = radial_inward_gravity(x);
    return Vec3{-g[0], -g[1], -g[2]};
  };
  if (name == "none") return [](const Vec3&) { return Vec3{0.0, 0.0, 0.0}; };
  fail(ErrorKind::Config, "config key 'gravity': unknown direction '" + name + "'");
}

std::unique_ptr<FlowProblem> make_problem(const RunConfig& c) {
  switch (c.problem) {
    case ProblemKind::Manufactured: {
      PhysicalParams p;
      p.nu = c.viscosity();
      p.Ra = c.Ra;
      p.Pr = c.Pr;
      p.kappa = c.kappa;
      p.gravity = make_gravity(c.gravity);
      return std::make_unique<ManufacturedSolution>(p);
    }
    case ProblemKind::Landau: return std::make_unique<LandauSolution>(1.0 / c.viscosity(), c.landau_a);
    case ProblemKind::HeatOnly: return std::make_unique<HeatOnlyProblem>();
    case ProblemKind::Custom: return std::make_unique<ConductiveShell>(c.extents.r_inner, c.extents.r_outer);
  }
  fail(ErrorKind::Config, "unknown problem");
}

PhysicsConfig make_physics(const RunConfig& c, const FlowProblem& pb) {
  PhysicsConfig p;
  p.ac.chi = c.chi;
  p.ac.nu = c.viscosity();
  p.ac.Ra = c.Ra;
  p.ac.Pr = c.Pr;
  p.ac.gravity = make_gravity(c.gravity);
  p.ac.correction = c.correction == "literal" ? CorrectionForm::Literal : CorrectionForm::Consistent;
  p.kappa = c.kappa;
  p.problem = &pb;
  p.solve_heat = pb.has_heat();
  p.solve_flow = pb.has_flow();
  return p;
}

void write_csv(std::ostream& out, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << "\n";
  out << std::setprecision(17);
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
    out << "\n";
  }
}

std::vector<std::string> run_columns(ProblemKind p) {
  std::vector<std::string> c{"step", "time", "iterations", "converged"};
  switch (p) {
    case ProblemKind::Manufactured:
      c.insert(c.end(), {"err_u1", "err_p1", "err_u2", "err_p2", "err_T", "div_u1", "div_u2"});
      break;
    case ProblemKind::Landau: c.insert(c.end(), {"err_u1", "err_p1", "err_u2", "err_p2", "div_u1", "div_u2"}); break;
    case ProblemKind::HeatOnly: c.insert(c.end(), {"max_T", "energy"}); break;
    case ProblemKind::Custom: c.insert(c.end(), {"max_T", "max_u", "div_u1", "div_u2"}); break;
  }
  c.push_back("residual");
  return c;
}

GlobalState initial_state(const RunConfig& c, const YinYangDomain& dom, const FlowProblem& pb) {
  GlobalState s = initialize_state(dom, pb, c.dt);
  if ((c.problem == ProblemKind::HeatOnly || c.problem == ProblemKind::Custom) && c.initial == "random") {
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (auto& cs : s.charts) {
      for_interior(cs.thermal.T_n.dims(), [&](int i, int j, int k) { cs.thermal.T_n(i, j, k) += c.amplitude * U(rng); });
      cs.thermal.T_nm1 = cs.thermal.T_n;
    }
  }
  return s;
}

namespace {

double vnorm(const MacGrid& g, const VectorField& a, const VectorField* b) {
  double s = 0;
  for (int c = 0; c < 3; ++c) {
    const double v = weighted_norm(g, b ? a[c] - (*b)[c] : a[c], WeightKind::Omega);
    s += v * v;
  }
  return std::sqrt(s);
}

double pressure_diff(const MacGrid& g, const Field& a, const Field& b, bool remove_mean) {
  Field e = a - b;
  if (remove_mean) {
    const Field one(e.layout(), e.dims(), 1.0);
    const double m = weighted_product(g, e, one, WeightKind::Omega) / weighted_product(g, one, one, WeightKind::Omega);
    for_interior(e.dims(), [&](int i, int j, int k) { e(i, j, k) -= m; });
  }
  return weighted_norm(g, e, WeightKind::Omega);
}

double max_div(const YinYangDomain& dom, const GlobalState& s, int sys) {
  double m = 0;
  for (int ci = 0; ci < 2; ++ci) {
    const MacGrid& g = dom.grid(static_cast<Chart>(ci));
    m = std::max(m, weighted_norm(g, divergence(g, s.charts[ci].flow.u_n(sys)), WeightKind::Omega));
  }
  return m;
}

long step_count(const RunConfig& c) {
  const double n = c.t_final / c.dt;
  const long steps = std::lround(n);
  if (std::abs(n - static_cast<double>(steps)) > 1e-8 * std::max(1.0, n))
    fail(ErrorKind::Config, "config key 't_final': must be a multiple of dt");
  return std::max(steps, 1L);
}

}  // namespace

ErrorReport state_difference(const YinYangDomain& dom, const GlobalState& a, const GlobalState& b, bool remove_mean) {
  ErrorReport r;
  r.t = a.t;
  for (int ci = 0; ci < 2; ++ci) {
    const MacGrid& g = dom.grid(static_cast<Chart>(ci));
    const ChartState &x = a.charts[ci], &y = b.charts[ci];
    r.e[kU1][ci] = vnorm(g, x.flow.u1_n, &y.flow.u1_n);
    r.e[kU2][ci] = vnorm(g, x.flow.u2_n, &y.flow.u2_n);
    r.e[kP1][ci] = pressure_diff(g, x.flow.p1_n, y.flow.p1_n, remove_mean);
    r.e[kP2][ci] = pressure_diff(g, x.flow.p2_n, y.flow.p2_n, remove_mean);
    r.e[kT][ci] = weighted_norm(g, x.thermal.T_n - y.thermal.T_n, WeightKind::Omega);
  }
  for (int q = 0; q < kQuantityCount; ++q) r.e[q][2] = std::hypot(r.e[q][0], r.e[q][1]);
  return r;
}

RunOutput run_simulation(const RunConfig& c, WorkerPool* pool, std::ostream* log) {
  c.validate();
  const YinYangDomain dom = build_domain(c.extents, c.grid);
  const auto maps = build_exchange_maps(dom, c.schwarz.interp_order);
  const auto pb = make_problem(c);
  const PhysicsConfig phys = make_physics(c, *pb);
  const long steps = step_count(c);
  RunOutput out;
  out.table.columns = run_columns(c.problem);
  out.state = initial_state(c, dom, *pb);
  GlobalState& s = out.state;
  ErrorOptions eo;
  eo.remove_pressure_mean = c.remove_pressure_mean;
  auto dump = [&](long step) {
    for (Chart ch : {Chart::Yin, Chart::Yang}) {
      const FieldDump d = make_state_dump(dom, s, ch);
      const std::string base = c.dump_path + "_" + chart_name(ch) + "_" + std::to_string(step);
      write_field_dump(base + ".yyd", d);
      if (c.vtk) write_vtk(base + ".vtk", dom, d);
    }
  };
  if (c.dump_every > 0) dump(0);
  for (long n = 1; n <= steps; ++n) {
    const StepReport rep = schwarz_time_step(dom, maps, s, phys, c.schwarz, pool);
    out.iterations.push_back(rep.iterations);
    if (!rep.converged) ++out.nonconverged;
    double resid = 0;
    for (double r : rep.residuals) resid = std::max(resid, r);
    std::vector<double> row{static_cast<double>(n), s.t, static_cast<double>(rep.iterations),
                            rep.converged ? 1.0 : 0.0};
    switch (c.problem) {
      case ProblemKind::Manufactured:
      case ProblemKind::Landau: {
        out.final_errors = error_norms(dom, s, *pb, s.t, eo);
        out.has_errors = true;
        for (int q : {kU1, kP1, kU2, kP2}) row.push_back(out.final_errors.combined(q));
        if (c.problem == ProblemKind::Manufactured) row.push_back(out.final_errors.combined(kT));
        row.push_back(max_div(dom, s, 1));
        row.push_back(max_div(dom, s, 2));
        break;
      }
      case ProblemKind::HeatOnly: {
        double mx = 0, e = 0;
        for (int ci = 0; ci < 2; ++ci) {
          mx = std::max(mx, max_abs(s.charts[ci].thermal.T_n));
          e += discrete_energy(dom.grid(static_cast<Chart>(ci)), s.charts[ci].thermal);
        }
        row.push_back(mx);
        row.push_back(e);
        break;
      }
      case ProblemKind::Custom: {
        double mx = 0, mu = 0;
        for (int ci = 0; ci < 2; ++ci) {
          mx = std::max(mx, max_abs(s.charts[ci].thermal.T_n));
          for (int k = 0; k < 3; ++k) mu = std::max(mu, max_abs(s.charts[ci].flow.u2_n[k]));
        }
        row.push_back(mx);
        row.push_back(mu);
        row.push_back(max_div(dom, s, 1));
        row.push_back(max_div(dom, s, 2));
        break;
      }
    }
    row.push_back(resid);
    out.table.rows.push_back(std::move(row));
    if (log)
      *log << "step " << n << "/" << steps << " t=" << s.t << " iterations=" << rep.iterations
           << (rep.converged ? "" : " (not converged)") << "\n";
    if (c.dump_every > 0 && n % c.dump_every == 0) dump(n);
  }
  out.steps = steps;
  return out;
}

Table StudyResult::table() const {
  Table t;
  t.columns = {"level", abscissa, "ok"};
  for (int q = 0; q < kQuantityCount; ++q) t.columns.push_back(std::string("err_") + quantity_name(q));
  t.columns.push_back("max_iterations");
  int l = 0;
  for (const auto& lv : levels) {
    std::vector<double> r{static_cast<double>(l++), lv.x, lv.ok ? 1.0 : 0.0};
    for (int q = 0; q < kQuantityCount; ++q) r.push_back(lv.ok ? lv.errors.combined(q) : std::nan(""));
    r.push_back(lv.max_iterations);
    t.rows.push_back(std::move(r));
  }
  return t;
}

StudyResult convergence_study(StudyKind kind, const RunConfig& base, const StudyOptions& opt, WorkerPool* pool,
                              std::ostream* log) {
  if (opt.levels < 3) fail(ErrorKind::Config, "config key 'levels': a convergence study needs at least 3 levels");
  base.validate();
  StudyResult res;
  res.abscissa = kind == StudyKind::Time ? "tau" : "h";
  const bool ref = kind == StudyKind::Time && opt.reference;
  std::vector<GlobalState> finals;
  auto level_config = [&](int l) {
    RunConfig c = base;
    c.csv.clear();
    c.dump_every = 0;
    if (kind == StudyKind::Time) {
      c.dt = base.dt / std::pow(2.0, l);
    } else {
      c.grid.n_r = base.grid.n_r << l;
      c.grid.n_theta = base.grid.n_theta << l;
      c.grid.n_phi = base.grid.n_phi << l;
    }
    return c;
  };
  for (int l = 0; l < opt.levels; ++l) {
    const RunConfig c = level_config(l);
    StudyLevel lv;
    lv.x = kind == StudyKind::Time ? c.dt : max_cell_diameter(build_domain(c.extents, c.grid).yin);
    if (log) *log << "level " << l << ": " << res.abscissa << " = " << lv.x << "\n";
    try {
      RunOutput o = run_simulation(c, pool, nullptr);
      lv.ok = true;
      lv.errors = o.final_errors;
      lv.nonconverged = o.nonconverged;
      for (int it : o.iterations) lv.max_iterations = std::max(lv.max_iterations, it);
      if (ref) finals.push_back(std::move(o.state));
    } catch (const Error& e) {
      lv.failure = e.what();
      if (ref) finals.emplace_back();
    }
    res.levels.push_back(std::move(lv));
  }
  if (ref) {
    RunConfig c = level_config(opt.levels + 1);  // tau_finest / 4
    if (log) *log << "reference: tau = " << c.dt << "\n";
    try {
      const RunOutput o = run_simulation(c, pool, nullptr);
      const YinYangDomain dom = build_domain(c.extents, c.grid);
      for (int l = 0; l < opt.levels; ++l)
        if (res.levels[l].ok) res.levels[l].errors = state_difference(dom, finals[l], o.state, c.remove_pressure_mean);
    } catch (const Error& e) {
      for (auto& lv : res.levels) {
        lv.ok = false;
        lv.failure = std::string("reference run failed: ") + e.what();
      }
    }
  }
  bool all = true;
  for (const auto& lv : res.levels) all = all && lv.ok;
  res.slopes.fill(std::nan(""));
  if (all) {
    ConvergenceTable t;
    t.abscissa = res.abscissa;
    for (const auto& lv : res.levels) {
      t.x.push_back(lv.x);
      t.rows.push_back(lv.errors);
    }
    try {
      res.slopes = convergence_slope(t);
      res.complete = true;
    } catch (const Error&) {
      res.complete = false;
    }
  }
  return res;
}

std::vector<OverlapPoint> overlap_study(const RunConfig& base, const std::vector<double>& epsilons, WorkerPool* pool,
                                        std::ostream* log) {
  std::vector<OverlapPoint> out;
  for (double eps : epsilons) {
    RunConfig c = base;
    c.extents.epsilon = eps;
    c.csv.clear();
    c.dump_every = 0;
    OverlapPoint p;
    p.epsilon = eps;
    if (log) *log << "epsilon = " << eps << "\n";
    try {
      const RunOutput o = run_simulation(c, pool, nullptr);
      p.ok = true;
      p.errors = o.final_errors;
    } catch (const Error& e) {
      p.failure = e.what();
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<StabilityRun> stability_study(const ShellExtents& ext, const GridSpec& grid, const std::vector<double>& taus,
                                          int steps, std::uint64_t seed, double rel_tol, WorkerPool* pool) {
  const YinYangDomain dom = build_domain(ext, grid);
  const MacGrid& g = dom.yin;
  HeatConfig hc;
  hc.kappa = 1.0;
  hc.boundary = [](double, const Vec3&) { return 0.0; };
  std::vector<StabilityRun> out;
  for (double tau : taus) {
    StabilityRun run;
    run.tau = tau;
    run.steps = steps;
    ThermalState s;
    s.T_n = make_scalar(g);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for_interior(s.T_n.dims(), [&](int i, int j, int k) { s.T_n(i, j, k) = U(rng); });
    s.T_nm1 = s.T_n;
    s.tau = tau;
    run.initial_max = max_abs(s.T_n);
    run.energy.push_back(discrete_energy(g, s));
    for (int n = 0; n < steps; ++n) {
      s = douglas_step(g, s, hc, nullptr, pool);
      const double m = max_abs(s.T_n);
      if (!std::isfinite(m)) {
        run.finite = false;
        break;
      }
      run.max_norm = std::max(run.max_norm, m);
      const double e = discrete_energy(g, s);
      if (n >= 1) {
        const double prev = run.energy.back();
        const double growth = prev > 0 ? (e - prev) / prev : (e > 0 ? 1.0 : 0.0);
        run.worst_energy_growth = std::max(run.worst_energy_growth, growth);
        if (growth > rel_tol) run.energy_monotone = false;
      }
      run.energy.push_back(e);
    }
    out.push_back(std::move(run));
  }
  return out;
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::Config:
    case ErrorKind::Format:
    case ErrorKind::Shape:
    case ErrorKind::OverlapTooSmall: return 2;
    default: return 3;
  }
}

}  // namespace yy
