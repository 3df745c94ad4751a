// Acceptance checks 1-7. One line per criterion: "criterion N: PASS|FAIL  details".
// Exit status is non-zero when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "flow_oracles.hpp"
#include "oracles.hpp"
#include "yinyang/config.hpp"
#include "yinyang/coupling.hpp"
#include "yinyang/driver.hpp"
#include "yinyang/error.hpp"
#include "yinyang/heat.hpp"
#include "yinyang/momentum.hpp"
#include "yinyang/operators.hpp"
#include "yinyang/parallel.hpp"
#include "yinyang/tridiag.hpp"
#include "yinyang/verify.hpp"

using namespace yy;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

bool in_range(double s, double lo, double hi) { return std::isfinite(s) && s >= lo && s <= hi; }

std::ostream* progress = nullptr;  // --verbose

void describe_study(Outcome& o, const StudyResult& r) {
  for (std::size_t l = 0; l < r.levels.size(); ++l) {
    const auto& lv = r.levels[l];
    o.detail << " " << r.abscissa << "=" << lv.x;
    if (!lv.ok) {
      o.detail << " (failed: " << lv.failure << ")";
      continue;
    }
    o.detail << " (";
    for (int q = 0; q < kQuantityCount; ++q) o.detail << (q ? " " : "") << quantity_name(q) << "=" << lv.errors.combined(q);
    o.detail << ", iters<=" << lv.max_iterations << ")";
  }
  o.detail << "; slopes";
  for (int q = 0; q < kQuantityCount; ++q) o.detail << " " << quantity_name(q) << "=" << r.slopes[q];
}

RunConfig manufactured_base() {
  RunConfig c;
  c.extents = {1.0, 2.0, 0.1};
  c.Ra = c.Pr = 1.0;
  c.schwarz.tol = 1e-6;
  c.schwarz.error_reduction = true;
  return c;
}

RunConfig criterion1_config() {
  RunConfig c = manufactured_base();
  c.grid = GridSpec{12, 36, 72, {}};
  c.dt = 0.1;
  c.t_final = 1.0;
  c.schwarz.max_iters = 300;  // error reduction contracts slowly at large tau/h^2
  return c;
}

// ------------------------------------------------------------------ 1
Outcome criterion1(WorkerPool* pool) {
  Outcome o;
  StudyOptions opt;
  opt.levels = 4;
  const StudyResult r = convergence_study(StudyKind::Time, criterion1_config(), opt, pool, progress);
  describe_study(o, r);
  o.check(r.complete, "every level completes");
  for (int q : {kU2, kP2, kT}) o.check(in_range(r.slopes[q], 1.8, 2.2), std::string(quantity_name(q)) + " slope in [1.8,2.2]");
  for (int q : {kU1, kP1}) o.check(in_range(r.slopes[q], 0.8, 1.2), std::string(quantity_name(q)) + " slope in [0.8,1.2]");
  return o;
}

// ------------------------------------------------------------------ 2
Outcome criterion2(WorkerPool* pool) {
  Outcome o;
  RunConfig c = manufactured_base();
  c.grid = GridSpec{6, 18, 36, {}};
  c.dt = 1e-3;
  c.t_final = 0.1;
  StudyOptions opt;
  opt.levels = 3;
  const StudyResult r = convergence_study(StudyKind::Space, c, opt, pool, progress);
  describe_study(o, r);
  o.check(r.complete, "every level completes");
  for (int q = 0; q < kQuantityCount; ++q)
    o.check(in_range(r.slopes[q], 1.8, 2.2), std::string(quantity_name(q)) + " slope in [1.8,2.2]");
  return o;
}

// ------------------------------------------------------------------ 3
Outcome criterion3(WorkerPool* pool) {
  Outcome o;
  RunConfig c;
  c.problem = ProblemKind::Landau;
  c.Re = 1.0;
  c.extents = {1.0, 2.0, 0.1};
  c.grid = GridSpec{6, 18, 36, {}};
  c.dt = 1e-3;
  c.t_final = 0.01;
  c.schwarz.tol = 1e-6;
  StudyOptions opt;
  opt.levels = 3;
  const StudyResult r = convergence_study(StudyKind::Space, c, opt, pool, progress);
  o.detail << "spatial:";
  describe_study(o, r);
  o.check(r.complete, "every level completes");
  for (int q : {kU1, kP1, kU2, kP2})
    o.check(in_range(r.slopes[q], 1.8, 2.2), std::string(quantity_name(q)) + " slope in [1.8,2.2]");

  RunConfig oc = c;
  oc.grid = GridSpec{12, 36, 72, {}};
  const auto ov = overlap_study(oc, {0.05, 0.1, 0.2}, pool, progress);
  o.detail << "; overlap:";
  bool all = true;
  for (const auto& p : ov) {
    o.detail << " eps=" << p.epsilon;
    if (p.ok) o.detail << " (u2=" << p.errors.combined(kU2) << " p2=" << p.errors.combined(kP2) << ")";
    else o.detail << " (failed: " << p.failure << ")";
    all = all && p.ok;
  }
  o.check(all, "every overlap run completes");
  if (all) {
    for (int q : {kU1, kP1, kU2, kP2}) {
      double lo = INFINITY, hi = 0;
      for (const auto& p : ov) {
        lo = std::min(lo, p.errors.combined(q));
        hi = std::max(hi, p.errors.combined(q));
      }
      o.detail << " ratio_" << quantity_name(q) << "=" << hi / lo;
      o.check(lo > 0 && hi / lo <= 2.0, std::string(quantity_name(q)) + " max/min error ratio <= 2");
    }
  }
  return o;
}

// ------------------------------------------------------------------ 4
Outcome criterion4(WorkerPool* pool) {
  Outcome o;
  const auto runs = stability_study({1.0, 2.0, 0.1}, GridSpec{8, 24, 48, {}}, {0.1, 1.0, 10.0, 100.0}, 200, 7, 1e-10, pool);
  for (const auto& r : runs) {
    o.detail << " tau=" << r.tau << " (max=" << r.max_norm << "/" << r.initial_max
             << " growth=" << r.worst_energy_growth << " E_end=" << r.energy.back() << ")";
    const std::string t = "tau=" + std::to_string(r.tau);
    o.check(r.finite, t + " finite");
    o.check(r.max_norm <= 10 * r.initial_max, t + " max-norm <= 10x initial");
    o.check(r.energy_monotone, t + " energy non-increasing");
  }
  return o;
}

// ------------------------------------------------------------------ 5
TridiagonalSystem random_system(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1, 1);
  TridiagonalSystem s;
  s.lower.resize(n), s.diag.resize(n), s.upper.resize(n), s.rhs.resize(n);
  for (int i = 0; i < n; ++i) {
    s.lower[i] = i > 0 ? u(rng) : 0.0;
    s.upper[i] = i < n - 1 ? u(rng) : 0.0;
    s.diag[i] = (std::abs(s.lower[i]) + std::abs(s.upper[i]) + 0.5 + std::abs(u(rng))) * (u(rng) < 0 ? -1 : 1);
    s.rhs[i] = u(rng);
  }
  return s;
}

Outcome criterion5() {
  Outcome o;
  // partitioned == Thomas
  {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> N(2, 400);
    double worst = 0;
    for (int n = 0; n < 1000; ++n) {
      const auto s = random_system(rng, N(rng));
      const int segs = std::uniform_int_distribution<int>(1, std::min(16, s.size()))(rng);
      const auto a = partitioned_solve(s, make_partition_plan(s, segs));
      const auto b = thomas_solve(s);
      double d = 0, m = 0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        d = std::max(d, std::abs(a[i] - b[i]));
        m = std::max(m, std::abs(b[i]));
      }
      worst = std::max(worst, d / m);
    }
    o.detail << " partitioned-vs-thomas=" << worst;
    o.check(worst <= 1e-12, "partitioned solve within 1e-12 of Thomas");
  }
  // hat-operator commutation
  {
    const MacGrid g = build_domain({1, 2, 0.1}, {8, 24, 48, {}}).yin;
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> U(-1, 1);
    double worst = 0;
    for (Layout l : {kCellLayout, kFaceRLayout, kFaceThetaLayout, kFacePhiLayout}) {
      Field f = make_field(g, l);
      for_interior(f.dims(), [&](int i, int j, int k) { f(i, j, k) = U(rng); });
      const DirectionalOperator ops[3] = {{Dir::R, false}, {Dir::Theta, true}, {Dir::Phi, true}};
      for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) {
          const Field ab = apply_directional(g, ops[a], apply_directional(g, ops[b], f));
          const Field ba = apply_directional(g, ops[b], apply_directional(g, ops[a], f));
          worst = std::max(worst, max_abs_diff(ab, ba) / std::max(1.0, max_abs(ab)));
        }
    }
    o.detail << " commutation=" << worst;
    o.check(worst <= 1e-12, "hat operators commute to 1e-12");
  }
  // manufactured forcing vs differentiation oracle
  {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> U(0, 2 * oracle::pi);
    double worst = 0;
    for (PhysicalParams p : {PhysicalParams{}, PhysicalParams{0.3, 2.0, 0.7, 1.5}}) {
      const ManufacturedSolution m(p);
      for (int n = 0; n < 500; ++n) {
        const double t = U(rng);
        const Vec3 x = oracle::shell_point(rng);
        const auto r = oracle::numeric_forcing(m, p, t, x);
        const Vec3 f = m.momentum_forcing(t, x);
        for (int c = 0; c < 3; ++c) worst = std::max(worst, std::abs(f[c] - r.f[c]) / std::max(1.0, std::abs(f[c])));
        worst = std::max(worst, std::abs(m.heat_source(t, x) - r.s) / std::max(1.0, std::abs(r.s)));
      }
    }
    o.detail << " forcing=" << worst;
    o.check(worst <= 1e-8, "forcing matches the oracle to 1e-8");
  }
  // Landau steady residual
  {
    std::mt19937_64 rng(14);
    double worst = 0;
    for (double re : {1.0, 10.0}) {
      const LandauSolution l(re);
      PhysicalParams p;
      p.nu = l.nu();
      p.Ra = 0;
      for (int n = 0; n < 500; ++n) {
        const Vec3 x = oracle::shell_point(rng);
        const auto r = oracle::numeric_forcing(l, p, 0.0, x);
        double div = 0;
        for (int a = 0; a < 3; ++a) div += oracle::d1([&](const Vec3& y) { return l.velocity(0, y)[a]; }, x, a);
        worst = std::max({worst, std::abs(r.f[0]), std::abs(r.f[1]), std::abs(r.f[2]), std::abs(div)});
      }
    }
    o.detail << " landau=" << worst;
    o.check(worst <= 1e-8, "Landau steady residual <= 1e-8");
  }
  // pressure-update identity, every step of a single-chart run
  {
    const MacGrid g = build_domain({1, 2, 0.1}, {6, 18, 36, {}}).yang;
    const ManufacturedSolution m;
    ACParams ac;
    ac.chi = 2.0;
    const double tau = 0.02;
    FlowState s;
    s.u1_n = make_vector(g);
    sample(g, s.u1_n, [&](const Vec3& x) { return m.velocity(0, x); });
    s.u1_nm1 = make_vector(g);
    sample(g, s.u1_nm1, [&](const Vec3& x) { return m.velocity(-tau, x); });
    s.u2_n = s.u1_n;
    s.u2_nm1 = s.u1_nm1;
    s.p1_n = make_scalar(g);
    sample(g, s.p1_n, [&](const Vec3& x) { return m.pressure(0, x); });
    s.p2_n = s.p1_n;
    s.tau = tau;
    double worst = 0;
    for (int n = 0; n < 20; ++n) {
      Field Ts = make_scalar(g);
      sample(g, Ts, [&](const Vec3& x) { return m.temperature(s.t + 0.5 * tau, x); });
      const FlowState next = ns_time_step(
          g, s, ac, Ts, [&](double t, const Vec3& x) { return m.velocity(t, x); },
          [&](double t, const Vec3& x) { return m.momentum_forcing(t, x); });
      Field r1 = next.p1_n - s.p1_n;
      r1 *= ac.chi;
      r1 += divergence(g, average(next.u1_n, s.u1_n));
      Field r2 = (next.p2_n - s.p2_n) - (next.p1_n - s.p1_n);
      r2 *= ac.chi;
      r2 += divergence(g, average(next.u2_n, s.u2_n));
      const double scale = ac.chi * std::max({1.0, max_abs(next.p1_n), max_abs(next.p2_n)});
      worst = std::max({worst, max_abs_interior(r1) / scale, max_abs_interior(r2) / scale});
      s = next;
    }
    o.detail << " pressure-identity=" << worst;
    o.check(worst <= 1e-13, "pressure identity to machine precision every step");
  }
  return o;
}

// ------------------------------------------------------------------ 6
Outcome criterion6(WorkerPool* pool) {
  Outcome o;
  RunConfig c = criterion1_config();
  c.t_final = 0.3;  // three steps at tau = 0.1
  c.schwarz.max_iters = 1000;  // both modes must reach their fixed point at tau = 0.1
  const RunOutput with = run_simulation(c, pool, progress);
  c.schwarz.pressure_exchange = false;
  const RunOutput without = run_simulation(c, pool, progress);
  auto mean = [](const std::vector<int>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); };
  o.detail << " iterations with exchange:";
  for (int i : with.iterations) o.detail << " " << i;
  o.detail << "; without:";
  for (int i : without.iterations) o.detail << " " << i;
  o.check(mean(without.iterations) > mean(with.iterations), "disabling the pressure exchange costs iterations");

  const YinYangDomain dom = build_domain(c.extents, c.grid);
  const auto maps = build_exchange_maps(dom, c.schwarz.interp_order);
  const auto pb = make_problem(c);
  const PhysicsConfig ph = make_physics(c, *pb);
  SchwarzConfig sc = c.schwarz;
  sc.pressure_exchange = true;
  GlobalState m = initial_state(c, dom, *pb), a = m;
  sc.mode = SchwarzMode::Multiplicative;
  const auto rm = schwarz_time_step(dom, maps, m, ph, sc, pool);
  sc.mode = SchwarzMode::Additive;
  const auto ra = schwarz_time_step(dom, maps, a, ph, sc, pool);
  const ErrorReport d = state_difference(dom, a, m, false);
  o.detail << "; additive-vs-multiplicative (iters " << ra.iterations << "/" << rm.iterations << "):";
  double worst = 0;
  for (int q = 0; q < kQuantityCount; ++q) {
    o.detail << " " << quantity_name(q) << "=" << d.combined(q);
    worst = std::max(worst, d.combined(q));
  }
  o.check(rm.converged && ra.converged, "both modes converge");
  o.check(worst <= 10 * sc.tol, "fixed points agree within 10*tol");
  return o;
}

// ------------------------------------------------------------------ 7
Outcome criterion7() {
  Outcome o;
  const MacGrid g = build_domain({1, 2, 0.1}, {32, 96, 192, {}}).yin;
  ThermalState s;
  s.T_n = make_scalar(g);
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> U(-1, 1);
  for_interior(s.T_n.dims(), [&](int i, int j, int k) { s.T_n(i, j, k) = U(rng); });
  s.T_nm1 = s.T_n;
  s.tau = 1e-3;
  HeatConfig hc;
  hc.boundary = [](double, const Vec3&) { return 0.0; };

  auto timed = [&](WorkerPool* pool, Field& result) {
    double best = INFINITY;
    for (int rep = 0; rep < 3; ++rep) {
      const auto t0 = std::chrono::steady_clock::now();
      ThermalState n = douglas_step(g, s, hc, nullptr, pool);
      best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
      result = std::move(n.T_n);
    }
    return best;
  };
  Field r1, r2, r4;
  WorkerPool p1(1), p2(2), p4(4);
  const double t1 = timed(&p1, r1);
  timed(&p2, r2);
  const double t4 = timed(&p4, r4);
  const bool same = r1.size() == r4.size() && r1.size() == r2.size() &&
                    std::memcmp(r1.data(), r2.data(), r1.size() * sizeof(double)) == 0 &&
                    std::memcmp(r1.data(), r4.data(), r1.size() * sizeof(double)) == 0;
  o.detail << " hardware threads=" << WorkerPool::hardware_workers() << " t1=" << t1 << "s t4=" << t4
           << "s speedup=" << t1 / t4 << " bitwise-identical=" << (same ? "yes" : "no");
  o.check(same, "bitwise-identical results for 1, 2, 4 workers");
  o.check(t1 / t4 >= 1.5, "speedup >= 1.5 on 4 workers");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::vector<int> only;
  bool verbose = false;
  app.add_option("--only", only, "criteria to run (default: all)")->check(CLI::Range(1, 7));
  app.add_flag("-v,--verbose", verbose, "progress on stderr");
  CLI11_PARSE(app, argc, argv);
  if (only.empty()) only = {1, 2, 3, 4, 5, 6, 7};
  if (verbose) progress = &std::cerr;

  WorkerPool pool(1);
  const std::function<Outcome()> criteria[] = {
      [&] { return criterion1(&pool); }, [&] { return criterion2(&pool); }, [&] { return criterion3(&pool); },
      [&] { return criterion4(&pool); }, [] { return criterion5(); },      [&] { return criterion6(&pool); },
      [] { return criterion7(); }};
  bool all = true;
  for (int n : only) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[n - 1]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << "  (" << secs << " s)" << o.detail.str()
              << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
