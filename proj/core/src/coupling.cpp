#include "yinyang/coupling.hpp"

#include <cmath>
#include <exception>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>

#include "yinyang/error.hpp"
#include "yinyang/operators.hpp"
#include "yinyang/parallel.hpp"

namespace yy {

double InterpolationStencil::apply(const Field& f) const {
  double v = 0;
  for (int a = 0; a < k; ++a) {
    double va = 0;
    for (int b = 0; b < k; ++b) {
      const std::size_t base = f.index(start[0] + a, start[1] + b, start[2]);
      double vb = 0;
      for (int c = 0; c < k; ++c) vb += w[2][c] * f[base + c];
      va += w[1][b] * vb;
    }
    v += w[0][a] * va;
  }
  return v;
}

std::array<double, 4> lagrange_weights(const std::vector<double>& x, int start, int k, double t) {
  std::array<double, 4> w{};
  for (int a = 0; a < k; ++a) {
    double num = 1, den = 1;
    const double xa = x[start + a];
    for (int b = 0; b < k; ++b) {
      if (b == a) continue;
      num *= t - x[start + b];
      den *= xa - x[start + b];
    }
    w[a] = num / den;
  }
  return w;
}

namespace {

constexpr double kTwoPi = 6.283185307179586;

// donor node range [lo, hi] per direction
using Range = std::array<std::array<int, 2>, 3>;

struct Builder {
  const YinYangDomain& dom;
  int k;
  double overshoot = 0;  // worst distance beyond an admissible hull (radians)

  // Returns false (recording the overshoot) when the point cannot be served.
  bool place(const MacGrid& donor, const Layout& l, const Range& range, Spherical p, InterpolationStencil& st) {
    st.donor = donor.chart();
    st.k = k;
    double pos[3] = {p.r, p.theta, p.phi};
    bool ok = true;
    for (int d = 0; d < 3; ++d) {
      const auto& x = donor.axis(l, d).x;
      const int lo = range[d][0], hi = range[d][1];
      if (hi - lo + 1 < k) fail(ErrorKind::OverlapTooSmall, "grid too coarse for the interpolation order");
      double t = pos[d];
      if (d == 2 && t < donor.lo(Dir::Phi) - 1e-12) t += kTwoPi;
      const double hl = x[lo + 1] - x[lo], hh = x[hi] - x[hi - 1];
      const double under = x[lo] - 0.5 * hl - t, over = t - x[hi] - 0.5 * hh;
      // the radial coordinate is shared and always lies on donor nodes
      const double tol = 1e-12 * (1 + std::abs(t));
      if (under > tol || over > tol) {
        overshoot = std::max(overshoot, std::max(under, over));
        ok = false;
      }
      int cell = lo;
      while (cell + 1 < hi && x[cell + 1] <= t) ++cell;
      int s;
      if (k % 2 == 1) {
        const int nearest = (cell + 1 <= hi && std::abs(x[cell + 1] - t) < std::abs(t - x[cell])) ? cell + 1 : cell;
        s = nearest - (k - 1) / 2;
      } else {
        s = cell - k / 2 + 1;
      }
      s = std::clamp(s, lo, hi - k + 1);
      st.start[d] = s;
      st.w[d] = lagrange_weights(x, s, k, t);
    }
    return ok;
  }
};

Range interior_range(const std::array<int, 3>& n, bool pressure) {
  if (pressure) return Range{{{1, n[0] - 2}, {2, n[1] - 3}, {2, n[2] - 3}}};
  return Range{{{0, n[0] - 1}, {1, n[1] - 2}, {1, n[2] - 2}}};
}

bool lateral_target(const std::array<int, 3>& n, int i, int j, int k) {
  if (i == 0 || i == n[0] - 1) return false;
  return j == 0 || k == 0 || j == n[1] - 1 || k == n[2] - 1;
}

bool ring_target(const std::array<int, 3>& n, int i, int j, int k) {
  if (i < 1 || i > n[0] - 2 || j < 1 || j > n[1] - 2 || k < 1 || k > n[2] - 2) return false;
  return j == 1 || k == 1 || j == n[1] - 2 || k == n[2] - 2;
}

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

}  // namespace

std::array<ExchangeMap, 2> build_exchange_maps(const YinYangDomain& dom, int order) {
  if (order < 2 || order > 4) fail(ErrorKind::InvalidArgument, "interpolation order must be 2, 3 or 4");
  std::array<ExchangeMap, 2> maps;
  Builder b{dom, order, 0.0};
  for (Chart tc : {Chart::Yin, Chart::Yang}) {
    const MacGrid& tg = dom.grid(tc);
    const MacGrid& dg = dom.grid(other(tc));
    ExchangeMap& m = maps[static_cast<int>(tc)];
    m.target = tc;
    m.order = order;
    // scalars and the pressure ring
    {
      const auto n = tg.dims(kCellLayout);
      const Field probe(kCellLayout, n);
      const auto dn = dg.dims(kCellLayout);
      for (int i = 0; i < n[0]; ++i)
        for (int j = 0; j < n[1]; ++j)
          for (int k = 0; k < n[2]; ++k) {
            const bool lat = lateral_target(n, i, j, k), ring = ring_target(n, i, j, k);
            if (!lat && !ring) continue;
            const Spherical s = sibling_coords(tc, tg.node(kCellLayout, i, j, k));
            InterpolationStencil st;
            st.target = probe.index(i, j, k);
            if (lat && b.place(dg, kCellLayout, interior_range(dn, false), s, st)) m.scalar.push_back(st);
            if (ring && b.place(dg, kCellLayout, interior_range(dn, true), s, st)) m.pressure_ring.push_back(st);
          }
    }
    // velocity components
    for (int c = 0; c < 3; ++c) {
      const Layout l = component_layout(c);
      const auto n = tg.dims(l);
      const Field probe(l, n);
      for (int i = 1; i < n[0] - 1; ++i)
        for (int j = 0; j < n[1]; ++j)
          for (int k = 0; k < n[2]; ++k) {
            if (!lateral_target(n, i, j, k)) continue;
            const Spherical pt = tg.node(l, i, j, k);
            const Spherical s = sibling_coords(tc, pt);
            VectorStencil vs;
            vs.target = probe.index(i, j, k);
            bool ok;
            if (c == 0) {
              vs.ma = vs.mb = 0;
              vs.ca = 1;
              vs.cb = 0;
              ok = b.place(dg, l, interior_range(dg.dims(l), false), s, vs.sa);
              vs.sb = vs.sa;
            } else {
              const auto et = spherical_basis(tc, pt);
              const auto ed = spherical_basis(other(tc), s);
              vs.ma = 1;
              vs.mb = 2;
              vs.ca = dot(et[c], ed[1]);
              vs.cb = dot(et[c], ed[2]);
              const Layout la = component_layout(1), lb = component_layout(2);
              ok = b.place(dg, la, interior_range(dg.dims(la), false), s, vs.sa);
              ok = b.place(dg, lb, interior_range(dg.dims(lb), false), s, vs.sb) && ok;
            }
            if (ok) m.velocity[c].push_back(vs);
          }
    }
  }
  if (b.overshoot > 0) {
    std::ostringstream os;
    os << "overlap too small for order-" << order << " exchange: boundary data falls " << b.overshoot
       << " rad outside the donor's admissible block; increase epsilon to at least about "
       << dom.extents.epsilon + 0.5 * b.overshoot + 1e-3;
    fail(ErrorKind::OverlapTooSmall, os.str());
  }
  return maps;
}

void exchange_scalar(const ExchangeMap& m, const Field& donor, Field& target) {
  for (const auto& st : m.scalar) target[st.target] = st.apply(donor);
}

void exchange_pressure(const ExchangeMap& m, const Field& donor, Field& target) {
  for (const auto& st : m.pressure_ring) target[st.target] = st.apply(donor);
}

void exchange_velocity(const ExchangeMap& m, const VectorField& donor, VectorField& target) {
  for (int c = 0; c < 3; ++c)
    for (const auto& vs : m.velocity[c]) {
      double v = vs.ca * vs.sa.apply(donor[vs.ma]);
      if (vs.cb != 0.0) v += vs.cb * vs.sb.apply(donor[vs.mb]);
      target[c][vs.target] = v;
    }
}

// ---------------------------------------------------------------- flux fix

namespace {

struct NormalUnknown {
  int c;
  std::size_t n;
  double area;  // outward-signed face area
};

double cell_width(const MacGrid& g, Dir d, int q) {  // extended centred index q in [1, n]
  const auto& f = g.faces(d);
  return f[q] - f[q - 1];
}

std::vector<NormalUnknown> lateral_unknowns(const MacGrid& g, const VectorField& u) {
  std::vector<NormalUnknown> out;
  const auto& rc = g.axis(Dir::R, Stagger::Center).x;
  const auto& tf = g.axis(Dir::Theta, Stagger::Face).x;
  {
    const Field& f = u[1];
    const auto& n = f.dims();
    for (int i = 1; i < n[0] - 1; ++i)
      for (int j : {0, n[1] - 1})
        for (int k = 1; k < n[2] - 1; ++k) {
          const double a = rc[i] * std::sin(tf[j]) * cell_width(g, Dir::R, i) * cell_width(g, Dir::Phi, k);
          out.push_back({1, f.index(i, j, k), j == 0 ? -a : a});
        }
  }
  {
    const Field& f = u[2];
    const auto& n = f.dims();
    for (int i = 1; i < n[0] - 1; ++i)
      for (int j = 1; j < n[1] - 1; ++j)
        for (int k : {0, n[2] - 1}) {
          const double a = rc[i] * cell_width(g, Dir::R, i) * cell_width(g, Dir::Theta, j);
          out.push_back({2, f.index(i, j, k), k == 0 ? -a : a});
        }
  }
  return out;
}

}  // namespace

BoundaryFlux boundary_flux(const MacGrid& g, const VectorField& u) {
  BoundaryFlux bf;
  for (const auto& q : lateral_unknowns(g, u)) {
    bf.lateral += q.area * u[q.c][q.n];
    bf.area += std::abs(q.area);
  }
  const Field& ur = u[0];
  const auto& n = ur.dims();
  const auto& rf = g.axis(Dir::R, Stagger::Face).x;
  const auto& tc = g.axis(Dir::Theta, Stagger::Center).x;
  for (int i : {0, n[0] - 1})
    for (int j = 1; j < n[1] - 1; ++j)
      for (int k = 1; k < n[2] - 1; ++k) {
        const double a =
            rf[i] * rf[i] * std::sin(tc[j]) * cell_width(g, Dir::Theta, j) * cell_width(g, Dir::Phi, k);
        bf.walls += (i == 0 ? -a : a) * ur(i, j, k);
        bf.area += a;
      }
  return bf;
}

FluxFixReport flux_fix(const MacGrid& g, VectorField& u, double tol, double penalty, int max_iters) {
  if (!(tol > 0)) fail(ErrorKind::InvalidArgument, "flux fix tolerance must be positive");
  if (!(penalty > 0)) fail(ErrorKind::InvalidArgument, "flux penalty must be positive");
  FluxFixReport rep;
  const BoundaryFlux bf = boundary_flux(g, u);
  rep.flux_before = rep.flux_after = bf.total();
  if (std::abs(bf.total()) < tol) return rep;
  rep.applied = true;
  const auto q = lateral_unknowns(g, u);
  const std::size_t m = q.size();
  std::vector<double> ubd(m), a(m), s(m);
  for (std::size_t n = 0; n < m; ++n) {
    ubd[n] = u[q[n].c][q[n].n];
    a[n] = std::abs(q[n].area);
    s[n] = q[n].area;
  }
  const double beta = 1.0 / (2.0 * penalty * bf.area * bf.area);
  auto flux_of = [&](const std::vector<double>& v) {
    double f = bf.walls;
    for (std::size_t n = 0; n < m; ++n) f += s[n] * v[n];
    return f;
  };
  auto J = [&](const std::vector<double>& v) {
    double e = 0;
    for (std::size_t n = 0; n < m; ++n) e += 0.5 * a[n] * (v[n] - ubd[n]) * (v[n] - ubd[n]);
    const double f = flux_of(v);
    return e + beta * f * f;
  };
  // H x = a (x) + 2 beta s (s.x)
  auto hess = [&](const std::vector<double>& x, std::vector<double>& y) {
    double sx = 0;
    for (std::size_t n = 0; n < m; ++n) sx += s[n] * x[n];
    for (std::size_t n = 0; n < m; ++n) y[n] = a[n] * x[n] + 2.0 * beta * s[n] * sx;
  };
  std::vector<double> v = ubd, r(m), z(m), p(m), hp(m);
  // r = -grad J(v)
  {
    const double f = flux_of(v);
    for (std::size_t n = 0; n < m; ++n) r[n] = -(a[n] * (v[n] - ubd[n]) + 2.0 * beta * f * s[n]);
  }
  double r0 = 0;
  for (std::size_t n = 0; n < m; ++n) r0 += r[n] * r[n] / a[n];
  r0 = std::sqrt(r0);
  for (std::size_t n = 0; n < m; ++n) z[n] = r[n] / a[n];
  p = z;
  double rz = 0;
  for (std::size_t n = 0; n < m; ++n) rz += r[n] * z[n];
  double best = J(v);
  int since_best = 0;
  int it = 0;
  for (; it < max_iters; ++it) {
    if (std::sqrt(std::max(rz, 0.0)) <= 1e-13 * r0) break;
    hess(p, hp);
    double php = 0;
    for (std::size_t n = 0; n < m; ++n) php += p[n] * hp[n];
    if (!(php > 0)) break;
    const double alpha = rz / php;
    for (std::size_t n = 0; n < m; ++n) {
      v[n] += alpha * p[n];
      r[n] -= alpha * hp[n];
      z[n] = r[n] / a[n];
    }
    double rz_new = 0;
    for (std::size_t n = 0; n < m; ++n) rz_new += r[n] * z[n];
    for (std::size_t n = 0; n < m; ++n) p[n] = z[n] + (rz_new / rz) * p[n];
    rz = rz_new;
    const double j = J(v);
    if (j < best) {
      best = j;
      since_best = 0;
    } else if (++since_best >= 50) {
      fail(ErrorKind::NonConvergence, "flux fix: conjugate gradients stagnated");
    }
  }
  if (it == max_iters && std::sqrt(std::max(rz, 0.0)) > 1e-13 * r0)
    fail(ErrorKind::NonConvergence, "flux fix: conjugate gradients did not converge");
  for (std::size_t n = 0; n < m; ++n) u[q[n].c][q[n].n] = v[n];
  rep.iterations = it;
  rep.J = J(v);
  rep.flux_after = flux_of(v);
  return rep;
}

// ---------------------------------------------------------------- Schwarz

void SchwarzConfig::validate() const {
  if (!(tol > 0)) fail(ErrorKind::InvalidArgument, "schwarz tol must be positive");
  if (max_iters < 1) fail(ErrorKind::InvalidArgument, "schwarz max_iters must be >= 1");
  if (interp_order < 2 || interp_order > 4) fail(ErrorKind::InvalidArgument, "interpolation order must be 2, 3 or 4");
  if (!(flux_penalty > 0)) fail(ErrorKind::InvalidArgument, "flux penalty must be positive");
}

void PhysicsConfig::validate() const {
  ac.validate();
  if (!(kappa > 0)) fail(ErrorKind::InvalidArgument, "kappa must be positive");
  if (!problem) fail(ErrorKind::Config, "physics config needs a problem");
}

GlobalState initialize_state(const YinYangDomain& dom, const FlowProblem& pb, double tau, double t0) {
  if (!(tau > 0)) fail(ErrorKind::InvalidArgument, "time step tau must be positive");
  GlobalState s;
  s.t = t0;
  s.tau = tau;
  for (Chart c : {Chart::Yin, Chart::Yang}) {
    const MacGrid& g = dom.grid(c);
    ChartState& cs = s.charts[static_cast<int>(c)];
    auto T_at = [&](double t) {
      Field f = make_scalar(g);
      sample(g, f, [&](const Vec3& x) { return pb.temperature(t, x); });
      return f;
    };
    auto u_at = [&](double t) {
      VectorField u = make_vector(g);
      sample(g, u, [&](const Vec3& x) { return pb.velocity(t, x); });
      return u;
    };
    cs.thermal.T_n = T_at(t0);
    cs.thermal.T_nm1 = T_at(t0 - tau);
    cs.thermal.t = t0;
    cs.thermal.tau = tau;
    FlowState& f = cs.flow;
    f.u1_n = f.u2_n = u_at(t0);
    f.u1_nm1 = f.u2_nm1 = u_at(t0 - tau);
    f.p1_n = make_scalar(g);
    sample(g, f.p1_n, [&](const Vec3& x) { return pb.pressure(t0, x); });
    f.p2_n = f.p1_n;
    f.t = t0;
    f.tau = tau;
  }
  return s;
}

namespace {

// Everything a chart needs during one step.
struct ChartWork {
  const MacGrid* g = nullptr;
  std::optional<FactorSet> heat_F;
  Field heat_G;  // tau * explicit heat rhs
  std::unique_ptr<MomentumStep> mom;
  // iterates
  Field T;
  std::array<VectorField, 2> u;
  std::array<Field, 2> p;
};

struct Snapshot {
  Field T;
  std::array<VectorField, 2> u;
  std::array<Field, 2> p;
};

Snapshot snap(const ChartWork& w) { return {w.T, w.u, w.p}; }

double vec_norm(const MacGrid& g, const VectorField& a, const VectorField& b) {
  double s = 0;
  for (int c = 0; c < 3; ++c) {
    const double v = weighted_norm(g, a[c] - b[c], WeightKind::Omega);
    s += v * v;
  }
  return std::sqrt(s);
}

}  // namespace

StepReport schwarz_time_step(const YinYangDomain& dom, const std::array<ExchangeMap, 2>& maps, GlobalState& s,
                             const PhysicsConfig& phys, const SchwarzConfig& cfg, WorkerPool* pool) {
  cfg.validate();
  phys.validate();
  const FlowProblem& pb = *phys.problem;
  const double tau = s.tau;
  const double t1 = s.t + tau;
  const bool threaded = cfg.mode == SchwarzMode::Additive && pool && pool->size() >= 2;

  std::array<ChartWork, 2> W;
  for (int ci = 0; ci < 2; ++ci) {
    ChartWork& w = W[ci];
    const MacGrid& g = dom.grid(static_cast<Chart>(ci));
    w.g = &g;
    ChartState& cs = s.charts[ci];
    cs.thermal.t = cs.flow.t = s.t;
    cs.thermal.tau = cs.flow.tau = tau;
    const VectorField a = extrapolate_half(cs.flow.u2_n, cs.flow.u2_nm1);
    WorkerPool* cpool = (threaded && ci == 1) ? nullptr : pool;
    w.T = cs.thermal.T_n;
    if (phys.solve_heat) {
      HeatConfig hc;
      hc.kappa = phys.kappa;
      hc.order = phys.heat_order;
      hc.source = [&pb](double t, const Vec3& x) { return pb.heat_source(t, x); };
      const VectorField* adv = phys.solve_flow ? &a : nullptr;
      w.heat_F = assemble_heat_factors(g, tau, phys.kappa, adv, phys.heat_order);
      require_dominance(*w.heat_F, "heat step");
      w.heat_G = heat_rhs(g, cs.thermal, hc, adv);
      w.heat_G *= tau;
      sample(g, w.T, [&](const Vec3& x) { return pb.temperature(t1, x); }, NodeSet::Walls);
    }
    w.u = {cs.flow.u1_n, cs.flow.u2_n};
    w.p = {cs.flow.p1_n, cs.flow.p2_n};
    if (phys.solve_flow) {
      const Field T_star = extrapolate_half(cs.thermal.T_n, cs.thermal.T_nm1);
      const VectorSource forcing = [&pb](double t, const Vec3& x) { return pb.momentum_forcing(t, x); };
      w.mom = std::make_unique<MomentumStep>(g, phys.ac, cs.flow, T_star, forcing, cpool);
      for (auto& u : w.u) sample(g, u, [&](const Vec3& x) { return pb.velocity(t1, x); }, NodeSet::Walls);
    }
  }

  auto pass = [&](int ci, const ChartWork& donor, const Snapshot& prev, int k, WorkerPool* cpool) {
    ChartWork& w = W[ci];
    const MacGrid& g = *w.g;
    const ExchangeMap& m = maps[ci];
    const ChartState& cs = s.charts[ci];
    const bool er = cfg.error_reduction && k > 1;
    if (phys.solve_heat) {
      exchange_scalar(m, donor.T, w.T);
      const Field bd = w.T - cs.thermal.T_n;
      const Field pv = prev.T - cs.thermal.T_n;
      w.T = cs.thermal.T_n + split_update(*w.heat_F, w.heat_G, pv, bd, er, cpool);
    }
    if (phys.solve_flow) {
      for (int q = 0; q < 2; ++q) {
        exchange_velocity(m, donor.u[q], w.u[q]);
        if (cfg.flux_fix) flux_fix(g, w.u[q], cfg.tol, cfg.flux_penalty);
      }
      w.mom->begin_pass();
      for (int sys = 1; sys <= 2; ++sys)
        for (int c : phys.ac.component_order) w.mom->solve_component(sys, c, w.u[sys - 1], prev.u[sys - 1][c], er);
      w.p[0] = w.mom->pressure_update(1, w.u[0]);
      w.p[1] = w.mom->pressure_update(2, w.u[1], &w.p[0]);
      if (cfg.pressure_exchange) {
        exchange_pressure(m, donor.p[0], w.p[0]);
        exchange_pressure(m, donor.p[1], w.p[1]);
      }
    }
  };

  StepReport rep;
  for (int k = 1; k <= cfg.max_iters; ++k) {
    const std::array<Snapshot, 2> prev{snap(W[0]), snap(W[1])};
    if (cfg.mode == SchwarzMode::Multiplicative) {
      pass(0, W[1], prev[0], k, pool);
      pass(1, W[0], prev[1], k, pool);
    } else {
      // donors are the previous iterates, read-only during the pass
      ChartWork d0, d1;
      d0.T = prev[0].T, d0.u = prev[0].u, d0.p = prev[0].p;
      d1.T = prev[1].T, d1.u = prev[1].u, d1.p = prev[1].p;
      if (threaded) {
        std::exception_ptr err;
        std::thread th([&] {
          try {
            pass(1, d0, prev[1], k, nullptr);
          } catch (...) {
            err = std::current_exception();
          }
        });
        try {
          pass(0, d1, prev[0], k, pool);
        } catch (...) {
          th.join();
          throw;
        }
        th.join();
        if (err) std::rethrow_exception(err);
      } else {
        pass(0, d1, prev[0], k, pool);
        pass(1, d0, prev[1], k, pool);
      }
    }
    std::array<double, 5> res{};
    for (int ci = 0; ci < 2; ++ci) {
      const MacGrid& g = *W[ci].g;
      const std::array<double, 5> r{vec_norm(g, W[ci].u[0], prev[ci].u[0]),
                                    weighted_norm(g, W[ci].p[0] - prev[ci].p[0], WeightKind::Omega),
                                    vec_norm(g, W[ci].u[1], prev[ci].u[1]),
                                    weighted_norm(g, W[ci].p[1] - prev[ci].p[1], WeightKind::Omega),
                                    weighted_norm(g, W[ci].T - prev[ci].T, WeightKind::Omega)};
      for (int q = 0; q < 5; ++q) res[q] = std::max(res[q], r[q]);
    }
    rep.iterations = k;
    rep.residuals = res;
    double worst = 0;
    for (double r : res) worst = std::max(worst, r);
    if (worst < cfg.tol) {
      rep.converged = true;
      break;
    }
  }

  for (int ci = 0; ci < 2; ++ci) {
    ChartState& cs = s.charts[ci];
    ChartWork& w = W[ci];
    w.mom.reset();  // holds a reference to cs.flow
    cs.thermal.T_nm1 = std::move(cs.thermal.T_n);
    cs.thermal.T_n = std::move(w.T);
    FlowState& f = cs.flow;
    f.u1_nm1 = std::move(f.u1_n);
    f.u2_nm1 = std::move(f.u2_n);
    f.u1_n = std::move(w.u[0]);
    f.u2_n = std::move(w.u[1]);
    f.p1_n = std::move(w.p[0]);
    f.p2_n = std::move(w.p[1]);
    cs.thermal.t = f.t = t1;
  }
  s.t = t1;
  ++s.steps;
  s.last_iterations = rep.iterations;
  s.residuals = rep.residuals;
  return rep;
}

}  // namespace yy
