#include "yinyang/momentum.hpp"

#include <cmath>
#include <string>

#include "yinyang/error.hpp"
#include "yinyang/operators.hpp"

namespace yy {

Vec3 radial_inward_gravity(const Vec3& x) {
  const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
  return {-x[0] / r, -x[1] / r, -x[2] / r};
}

void ACParams::validate() const {
  if (!(chi > 0)) fail(ErrorKind::InvalidArgument, "chi must be positive");
  if (!(nu > 0)) fail(ErrorKind::InvalidArgument, "nu must be positive");
  for (const auto& o : factor_order) {
    bool seen[3] = {false, false, false};
    for (Dir d : o) seen[idx(d)] = true;
    if (!(seen[0] && seen[1] && seen[2])) fail(ErrorKind::InvalidArgument, "factor order must be a permutation");
  }
  bool seen[3] = {false, false, false};
  for (int c : component_order) {
    if (c < 0 || c > 2) fail(ErrorKind::InvalidArgument, "component order entries must be 0, 1, 2");
    seen[c] = true;
  }
  if (!(seen[0] && seen[1] && seen[2])) fail(ErrorKind::InvalidArgument, "component order must be a permutation");
}

void FlowState::validate() const {
  if (!(tau > 0)) fail(ErrorKind::InvalidArgument, "time step tau must be positive");
  for (int c = 0; c < 3; ++c) {
    u1_n[c].require_same_shape(u1_nm1[c], "flow state");
    u1_n[c].require_same_shape(u2_n[c], "flow state");
    u1_n[c].require_same_shape(u2_nm1[c], "flow state");
  }
  p1_n.require_same_shape(p2_n, "flow state pressure");
}

Field extrapolate_half(const Field& w_n, const Field& w_nm1) {
  Field out = w_n;
  out *= 1.5;
  out.axpy(-0.5, w_nm1);
  return out;
}

VectorField extrapolate_half(const VectorField& w_n, const VectorField& w_nm1) {
  VectorField out;
  for (int c = 0; c < 3; ++c) out[c] = extrapolate_half(w_n[c], w_nm1[c]);
  return out;
}

VectorField average(const VectorField& a, const VectorField& b) {
  VectorField out;
  for (int c = 0; c < 3; ++c) {
    out[c] = a[c] + b[c];
    out[c] *= 0.5;
  }
  return out;
}

namespace {

using Trio = std::array<Field, 3>;

Trio at_layout(const MacGrid& g, const VectorField& a, const Layout& l) {
  Trio t;
  for (int d = 0; d < 3; ++d) t[d] = transfer(g, a[d], l);
  return t;
}

double metric(int d, double r, double th) {
  return d == 0 ? 1.0 : d == 1 ? 1.0 / r : 1.0 / (r * std::sin(th));
}

// a . grad f with a already at f's nodes
Field advect_at(const MacGrid& g, const Trio& a, const Field& f) {
  Field out(f.layout(), f.dims());
  const auto& xr = g.axis(f.layout(), 0).x;
  const auto& xt = g.axis(f.layout(), 1).x;
  for (int d = 0; d < 3; ++d) {
    const Field df = partial(g, static_cast<Dir>(d), f);
    for_interior(f.dims(), [&](int i, int j, int k) {
      out(i, j, k) += a[d](i, j, k) * metric(d, xr[i], xt[j]) * df(i, j, k);
    });
  }
  return out;
}

// Adds per-node three-point coefficients along the stencil direction.
template <class Fn>
void add_custom(Stencil& s, Fn&& fn) {
  const int d = idx(s.dir);
  const auto& n = s.dims;
  for (int i = 0; i < n[0]; ++i)
    for (int j = 0; j < n[1]; ++j)
      for (int k = 0; k < n[2]; ++k) {
        const int q = d == 0 ? i : d == 1 ? j : k;
        if (q == 0 || q == n[d] - 1) continue;
        const std::size_t m = (static_cast<std::size_t>(i) * n[1] + j) * n[2] + k;
        double lo = 0, di = 0, up = 0;
        fn(i, j, k, q, lo, di, up);
        s.lo[m] += lo;
        s.di[m] += di;
        s.up[m] += up;
      }
}

FactorSet assemble_component(const MacGrid& g, const ACParams& p, int c, const Trio& a, double tau) {
  const Layout l = component_layout(c);
  const auto n = g.dims(l);
  FactorSet F;
  F.tau = tau;
  F.order = p.factor_order[c];
  const auto& xr = g.axis(l, 0).x;
  const auto& xt = g.axis(l, 1).x;
  const double nu = p.nu;
  const double gd = 0.5 / p.chi;
  for (int d = 0; d < 3; ++d) {
    Stencil s(static_cast<Dir>(d), l, n);
    const NodeAxis& ax = g.axis(l, d);
    const double mult = nu * directional_multiplier(g, static_cast<Dir>(d), true, g.r_hat(), g.theta1());
    add_custom(s, [&](int i, int j, int k, int q, double& lo, double& di, double& up) {
      const double r = xr[i], th = xt[j];
      // hat diffusion
      lo += mult * ax.d2lo[q];
      up += mult * ax.d2up[q];
      di -= mult * (ax.d2lo[q] + ax.d2up[q]);
      // advection by a
      const double av = -a[d](i, j, k) * metric(d, r, th);
      lo += av * ax.d1lo[q];
      di += av * ax.d1di[q];
      up += av * ax.d1up[q];
      if (d != c) return;
      // own-direction curvature terms and grad-div
      if (c == 0) {
        const double f = 2.0 * nu / (r * r * r);
        lo += f * ax.d1lo[q] * ax.x[q - 1] * ax.x[q - 1];
        di += f * ax.d1di[q] * r * r - 2.0 * nu / (r * r);
        up += f * ax.d1up[q] * ax.x[q + 1] * ax.x[q + 1];
        lo += gd * ax.gdlo[q];
        di += gd * ax.gddi[q];
        up += gd * ax.gdup[q];
      } else if (c == 1) {
        const double st = std::sin(th);
        const double q2 = 1.0 / (r * r * st * st);
        const double f = 2.0 * nu * std::cos(th) * q2;
        lo += f * ax.d1lo[q] * std::sin(ax.x[q - 1]);
        di += f * ax.d1di[q] * st - nu * q2;
        up += f * ax.d1up[q] * std::sin(ax.x[q + 1]);
        const double m = gd / (r * r);
        lo += m * ax.gdlo[q];
        di += m * ax.gddi[q];
        up += m * ax.gdup[q];
      } else {
        const double st = std::sin(th);
        const double q2 = 1.0 / (r * r * st * st);
        di -= nu * q2;
        const double m = gd * q2;
        lo += m * ax.gdlo[q];
        di += m * ax.gddi[q];
        up += m * ax.gdup[q];
      }
    });
    F.ops[d] = std::move(s);
  }
  return F;
}

// explicit advective curvature terms of component c (right-hand-side sign)
Field curvature(const MacGrid& g, int c, const Trio& a, const Trio& u) {
  const Layout l = component_layout(c);
  Field out(l, g.dims(l));
  const auto& xr = g.axis(l, 0).x;
  const auto& xt = g.axis(l, 1).x;
  for_interior(out.dims(), [&](int i, int j, int k) {
    const double r = xr[i];
    const double cot = std::cos(xt[j]) / std::sin(xt[j]);
    double v;
    if (c == 0) {
      v = (a[1](i, j, k) * u[1](i, j, k) + a[2](i, j, k) * u[2](i, j, k)) / r;
    } else if (c == 1) {
      v = -(a[0](i, j, k) * u[1](i, j, k) - a[2](i, j, k) * u[2](i, j, k) * cot) / r;
    } else {
      v = -(a[0](i, j, k) * u[2](i, j, k) + a[1](i, j, k) * u[2](i, j, k) * cot) / r;
    }
    out(i, j, k) = v;
  });
  return out;
}

}  // namespace

MomentumStep::MomentumStep(const MacGrid& g, const ACParams& p, const FlowState& s, const Field& T_star,
                           const VectorSource& forcing, WorkerPool* pool)
    : g_(g), p_(p), s_(s), pool_(pool) {
  p.validate();
  s.validate();
  const VectorField a = extrapolate_half(s.u2_n, s.u2_nm1);
  ustar_[0] = extrapolate_half(s.u1_n, s.u1_nm1);
  ustar_[1] = a;
  const double nu = p.nu;
  const double gd = 0.5 / p.chi;
  const double th = s.t + 0.5 * s.tau;
  for (int c = 0; c < 3; ++c) {
    const Layout l = component_layout(c);
    const Trio aL = at_layout(g, a, l);
    F_[c] = assemble_component(g, p, c, aL, s.tau);
    static const char* names[3] = {"momentum r", "momentum theta", "momentum phi"};
    require_dominance(F_[c], names[c]);
    const Field TL = transfer(g, T_star, l);
    // body force terms shared by both systems
    Field body(l, g.dims(l));
    const double buoy = p.Pr * p.Ra;
    for_interior(body.dims(), [&](int i, int j, int k) {
      const Spherical pt = g.node(l, i, j, k);
      const Vec3 x = chart_to_cartesian(g.chart(), pt);
      const Vec3 e = spherical_basis(g.chart(), pt)[c];
      double v = 0;
      if (buoy != 0.0 && p.gravity) {
        const Vec3 gv = p.gravity(x);
        v += buoy * (gv[0] * e[0] + gv[1] * e[1] + gv[2] * e[2]) * TL(i, j, k);
      }
      if (forcing) {
        const Vec3 f = forcing(th, x);
        v += f[0] * e[0] + f[1] * e[1] + f[2] * e[2];
      }
      body(i, j, k) = v;
    });
    for (int sys = 1; sys <= 2; ++sys) {
      const VectorField& un = s.u_n(sys);
      const VectorField& us = ustar_[sys - 1];
      Field R = apply_laplacian(g, us[c], false);
      R += own_extras(g, c, us[c]);
      R *= nu;
      if (p.correction == CorrectionForm::Consistent) {
        const Field dn = un[c] - s.u_nm1(sys)[c];
        Field corr = apply_laplacian(g, dn, true);
        corr += own_extras(g, c, dn);
        R.axpy(-0.5 * nu, corr);
        R -= advect_at(g, aL, un[c]);
        R.axpy(gd, grad_div_term(g, c, c, un[c]));
      } else {
        R -= advect_at(g, aL, us[c]);
        R.axpy(gd, grad_div_term(g, c, c, us[c]));
        Field half = un[c] + s.u_nm1(sys)[c];
        half *= 0.5;
        R += apply_laplacian(g, half, true);
      }
      R += curvature(g, c, aL, at_layout(g, us, l));
      R -= grad_component(g, c, s.p_n(sys));
      R += body;
      fixed_[sys - 1][c] = std::move(R);
    }
  }
}

void MomentumStep::begin_pass() {
  for (auto& s : solved_) s.fill(false);
}

Field MomentumStep::cross_terms(int sys, int c, const VectorField& u_iter) const {
  const VectorField& un = s_.u_n(sys);
  const VectorField& us = ustar_[sys - 1];
  VectorField w;
  int pos_c = 0;
  for (int q = 0; q < 3; ++q)
    if (p_.component_order[q] == c) pos_c = q;
  for (int q = 0; q < 3; ++q) {
    const int j = p_.component_order[q];
    if (q < pos_c) {
      w[j] = u_iter[j] + un[j];
      w[j] *= 0.5;
    } else {
      w[j] = us[j];
    }
  }
  Field out = cross_extras(g_, c, w);
  out *= p_.nu;
  const double gd = 0.5 / p_.chi;
  for (int j = 0; j < 3; ++j)
    if (j != c) out.axpy(gd, grad_div_term(g_, c, j, w[j]));
  return out;
}

Field MomentumStep::rhs(int sys, int c, const VectorField& u_iter) const {
  Field R = fixed_[sys - 1][c];
  R += cross_terms(sys, c, u_iter);
  return R;
}

void MomentumStep::solve_component(int sys, int c, VectorField& u_iter, const Field& prev_c, bool error_reduction) {
  if (sys != 1 && sys != 2) fail(ErrorKind::InvalidArgument, "system must be 1 or 2");
  if (c < 0 || c > 2) fail(ErrorKind::InvalidArgument, "component must be 0, 1 or 2");
  for (int q = 0; q < 3 && p_.component_order[q] != c; ++q) {
    const int j = p_.component_order[q];
    if (!solved_[sys - 1][j])
      fail(ErrorKind::Sequencing, std::string("component ") + dir_name(static_cast<Dir>(c)) + " of system " +
                                      std::to_string(sys) + " solved before its predecessor " +
                                      dir_name(static_cast<Dir>(j)));
  }
  const Field& un = s_.u_n(sys)[c];
  Field g = rhs(sys, c, u_iter);
  g *= s_.tau;
  const Field prev = prev_c - un;
  const Field bd = u_iter[c] - un;
  const Field delta = split_update(F_[c], g, prev, bd, error_reduction, pool_);
  u_iter[c] = un + delta;
  solved_[sys - 1][c] = true;
}

Field MomentumStep::pressure_update(int sys, const VectorField& u_iter, const Field* p1_new) const {
  if (sys == 2 && !p1_new) fail(ErrorKind::Sequencing, "system-2 pressure update needs p1^{n+1}");
  return yy::pressure_update(g_, p_, s_.p_n(sys), s_.u_n(sys), u_iter, sys == 2 ? &s_.p1_n : nullptr,
                             sys == 2 ? p1_new : nullptr);
}

Field pressure_update(const MacGrid& g, const ACParams& p, const Field& p_n, const VectorField& u_n,
                      const VectorField& u_new, const Field* p1_n, const Field* p1_new) {
  const Field d = divergence(g, average(u_new, u_n));
  Field out = p_n;
  const double inv = 1.0 / p.chi;
  for_interior(out.dims(), [&](int i, int j, int k) {
    double v = p_n(i, j, k) - inv * d(i, j, k);
    if (p1_n && p1_new) v += (*p1_new)(i, j, k) - (*p1_n)(i, j, k);
    out(i, j, k) = v;
  });
  return out;
}

FlowState ns_time_step(const MacGrid& g, const FlowState& s, const ACParams& p, const Field& T_star,
                       const VectorSource& boundary, const VectorSource& forcing, WorkerPool* pool) {
  if (!boundary) fail(ErrorKind::Config, "flow step needs boundary data");
  MomentumStep M(g, p, s, T_star, forcing, pool);
  std::array<VectorField, 2> u{s.u1_n, s.u2_n};
  const double t1 = s.t + s.tau;
  M.begin_pass();
  for (int sys = 1; sys <= 2; ++sys) {
    sample(g, u[sys - 1], [&](const Vec3& x) { return boundary(t1, x); }, NodeSet::Boundary);
    for (int c : p.component_order) {
      const Field prev = u[sys - 1][c];
      M.solve_component(sys, c, u[sys - 1], prev, false);
    }
  }
  FlowState out;
  out.p1_n = M.pressure_update(1, u[0]);
  out.p2_n = M.pressure_update(2, u[1], &out.p1_n);
  out.u1_nm1 = s.u1_n;
  out.u2_nm1 = s.u2_n;
  out.u1_n = std::move(u[0]);
  out.u2_n = std::move(u[1]);
  out.t = t1;
  out.tau = s.tau;
  return out;
}

}  // namespace yy
