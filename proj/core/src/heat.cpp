#include "yinyang/heat.hpp"

#include <cmath>

#include "yinyang/error.hpp"
#include "yinyang/operators.hpp"

namespace yy {

void ThermalState::validate() const {
  T_n.require_same_shape(T_nm1, "thermal state levels");
  if (!(tau > 0)) fail(ErrorKind::InvalidArgument, "time step tau must be positive");
}

void HeatConfig::validate() const {
  if (!(kappa > 0)) fail(ErrorKind::InvalidArgument, "kappa must be positive");
}

FactorSet assemble_heat_factors(const MacGrid& g, double tau, double kappa, const VectorField* a,
                                const std::array<Dir, 3>& order) {
  const Layout l = kCellLayout;
  const auto n = g.dims(l);
  FactorSet F;
  F.tau = tau;
  F.order = order;
  const auto& xr = g.axis(l, 0).x;
  const auto& xt = g.axis(l, 1).x;
  std::array<Field, 3> ac;
  if (a)
    for (int c = 0; c < 3; ++c) ac[c] = transfer(g, (*a)[c], l);
  for (Dir d : {Dir::R, Dir::Theta, Dir::Phi}) {
    Stencil s(d, l, n);
    const NodeAxis& ax = g.axis(l, idx(d));
    std::vector<double> d2di(ax.size());
    for (int q = 0; q < ax.size(); ++q) d2di[q] = -(ax.d2lo[q] + ax.d2up[q]);
    const double mult = kappa * directional_multiplier(g, d, true, g.r_hat(), g.theta1());
    add_line_table(s, ax.d2lo, d2di, ax.d2up, [&](int, int, int) { return mult; });
    if (a) {
      const Field& v = ac[idx(d)];
      add_line_table(s, ax.d1lo, ax.d1di, ax.d1up, [&](int i, int j, int k) {
        double metric = 1.0;
        if (d == Dir::Theta) metric = 1.0 / xr[i];
        if (d == Dir::Phi) metric = 1.0 / (xr[i] * std::sin(xt[j]));
        return -v(i, j, k) * metric;
      });
    }
    F.ops[idx(d)] = std::move(s);
  }
  return F;
}

Field heat_rhs(const MacGrid& g, const ThermalState& s, const HeatConfig& cfg, const VectorField* u_half) {
  s.validate();
  cfg.validate();
  Field star = s.T_n;
  star *= 1.5;
  star.axpy(-0.5, s.T_nm1);
  Field dT = s.T_n - s.T_nm1;
  Field R = apply_laplacian(g, star, false);
  R.axpy(-0.5, apply_laplacian(g, dT, true));
  R *= cfg.kappa;
  if (u_half) R -= advect_scalar(g, *u_half, s.T_n);
  if (cfg.source) {
    const double th = s.t + 0.5 * s.tau;
    for_interior(R.dims(), [&](int i, int j, int k) {
      R(i, j, k) += cfg.source(th, chart_to_cartesian(g.chart(), g.node(R.layout(), i, j, k)));
    });
  }
  return R;
}

ThermalState douglas_step(const MacGrid& g, const ThermalState& s, const HeatConfig& cfg,
                          const VectorField* u_half, WorkerPool* pool) {
  if (!cfg.boundary) fail(ErrorKind::Config, "heat step needs boundary data");
  Field g_tau = heat_rhs(g, s, cfg, u_half);
  g_tau *= s.tau;
  const FactorSet F = assemble_heat_factors(g, s.tau, cfg.kappa, u_half, cfg.order);
  require_dominance(F, "heat step");
  Field next = s.T_n;
  sample(g, next, [&](const Vec3& x) { return cfg.boundary(s.t + s.tau, x); }, NodeSet::Boundary);
  Field bd = next - s.T_n;
  const Field zero(s.T_n.layout(), s.T_n.dims());
  const Field delta = split_update(F, g_tau, zero, bd, false, pool);
  ThermalState out;
  out.T_nm1 = s.T_n;
  out.T_n = s.T_n + delta;
  out.t = s.t + s.tau;
  out.tau = s.tau;
  return out;
}

namespace {
// Sum over links along direction d of weight * (f_{q+1} - f_q)^2 / h, the
// weight combining the quadrature widths of the other two directions.
template <class W>
double link_sum(const MacGrid& g, const Field& f, int d, W&& weight) {
  const auto& n = f.dims();
  const NodeAxis& ad = g.axis(f.layout(), d);
  const std::size_t s = f.stride(d);
  double sum = 0;
  for (int i = (d == 0 ? 0 : 1); i < n[0] - 1; ++i)
    for (int j = (d == 1 ? 0 : 1); j < n[1] - 1; ++j)
      for (int k = (d == 2 ? 0 : 1); k < n[2] - 1; ++k) {
        const int q = d == 0 ? i : d == 1 ? j : k;
        const std::size_t m = f.index(i, j, k);
        const double df = f[m + s] - f[m];
        sum += weight(i, j, k) * df * df / (ad.x[q + 1] - ad.x[q]);
      }
  return sum;
}
}  // namespace

double gradient_energy(const MacGrid& g, const Field& T) {
  const Layout& l = T.layout();
  const NodeAxis &ar = g.axis(l, 0), &at = g.axis(l, 1), &ap = g.axis(l, 2);
  const double er = link_sum(g, T, 0, [&](int i, int j, int k) {
    return ar.dual[i] * ar.dual[i] * std::sin(at.x[j]) * at.width[j] * ap.width[k];
  });
  const double et = link_sum(g, T, 1, [&](int i, int j, int k) {
    return std::sin(at.dual[j]) * ar.width[i] * ap.width[k];
  });
  const double ep = link_sum(g, T, 2, [&](int i, int j, int) {
    return ar.width[i] * at.width[j] / std::sin(at.x[j]);
  });
  return er + et + ep;
}

std::array<double, 2> hat_defect_energy(const MacGrid& g, const Field& D) {
  const Layout& l = D.layout();
  const NodeAxis &ar = g.axis(l, 0), &at = g.axis(l, 1), &ap = g.axis(l, 2);
  const double r1 = g.r_hat();
  const double s1 = std::sin(g.theta1());
  const double q1 = link_sum(g, D, 1, [&](int i, int j, int k) {
    return (ar.x[i] * ar.x[i] / (r1 * r1) - 1.0) * std::sin(at.dual[j]) * ar.width[i] * ap.width[k];
  });
  const double q2 = link_sum(g, D, 2, [&](int i, int j, int) {
    const double st = std::sin(at.x[j]);
    return (ar.x[i] * ar.x[i] * st / (r1 * r1 * s1 * s1) - 1.0 / st) * ar.width[i] * at.width[j];
  });
  return {q1, q2};
}

double discrete_energy(const MacGrid& g, const ThermalState& s) {
  const Field d = s.T_n - s.T_nm1;
  const auto q = hat_defect_energy(g, d);
  return 0.5 * gradient_energy(g, s.T_n) + 0.25 * (q[0] + q[1]);
}

}  // namespace yy
