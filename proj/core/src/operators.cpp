#include "yinyang/operators.hpp"

#include <cmath>
#include <string>

#include "yinyang/error.hpp"

namespace yy {

namespace {

void require_layout(const Field& f, const MacGrid& g, const char* what) {
  if (f.dims() != g.dims(f.layout())) fail(ErrorKind::Shape, std::string(what) + ": field does not match grid");
}

void require_layout(const Field& f, const MacGrid& g, const Layout& l, const char* what) {
  require_layout(f, g, what);
  if (!(f.layout() == l)) fail(ErrorKind::Shape, std::string(what) + ": wrong staggering");
}

// out(n) += mul(i,j,k) * D2_d f at interior nodes
template <class Mul>
void add_d2(const MacGrid& g, int d, const Field& f, Field& out, Mul mul) {
  const NodeAxis& a = g.axis(f.layout(), d);
  const std::size_t s = f.stride(d);
  const auto& n = f.dims();
  for_interior(n, [&](int i, int j, int k) {
    const int q = d == 0 ? i : d == 1 ? j : k;
    const std::size_t m = f.index(i, j, k);
    const double v = f[m];
    out[m] += mul(i, j, k) * (a.d2up[q] * (f[m + s] - v) + a.d2lo[q] * (f[m - s] - v));
  });
}

}  // namespace

double directional_multiplier(const MacGrid& g, Dir d, bool hat, double r, double theta) {
  switch (d) {
    case Dir::R: return 1.0;
    case Dir::Theta: return hat ? 1.0 / (g.r_hat() * g.r_hat()) : 1.0 / (r * r);
    case Dir::Phi: {
      if (hat) {
        const double s = std::sin(g.theta1());
        return 1.0 / (g.r_hat() * g.r_hat() * s * s);
      }
      const double s = std::sin(theta);
      return 1.0 / (r * r * s * s);
    }
  }
  return 0.0;
}

Field apply_directional(const MacGrid& g, const DirectionalOperator& op, const Field& f) {
  require_layout(f, g, "apply_directional");
  Field out(f.layout(), f.dims());
  const auto& xr = g.axis(f.layout(), 0).x;
  const auto& xt = g.axis(f.layout(), 1).x;
  add_d2(g, idx(op.dir), f, out,
         [&](int i, int j, int) { return directional_multiplier(g, op.dir, op.hat, xr[i], xt[j]); });
  return out;
}

Field apply_laplacian(const MacGrid& g, const Field& f, bool hat) {
  Field out = apply_directional(g, {Dir::R, hat}, f);
  out += apply_directional(g, {Dir::Theta, hat}, f);
  out += apply_directional(g, {Dir::Phi, hat}, f);
  return out;
}

Field partial(const MacGrid& g, Dir dir, const Field& f) {
  require_layout(f, g, "partial");
  const int d = idx(dir);
  const NodeAxis& a = g.axis(f.layout(), d);
  const std::size_t s = f.stride(d);
  Field out(f.layout(), f.dims());
  for_interior(f.dims(), [&](int i, int j, int k) {
    const int q = d == 0 ? i : d == 1 ? j : k;
    const std::size_t m = f.index(i, j, k);
    const double v = f[m];
    out[m] = a.d1up[q] * (f[m + s] - v) + a.d1lo[q] * (f[m - s] - v);
  });
  return out;
}

Field transfer(const MacGrid& g, const Field& f, const Layout& target) {
  require_layout(f, g, "transfer");
  if (f.layout() == target) return f;
  const Transfer1D& tr = g.transfer(Dir::R, f.layout()[0], target[0]);
  const Transfer1D& tt = g.transfer(Dir::Theta, f.layout()[1], target[1]);
  const Transfer1D& tp = g.transfer(Dir::Phi, f.layout()[2], target[2]);
  Field out(target, g.dims(target));
  const auto& n = out.dims();
  const std::size_t si = f.stride(0), sj = f.stride(1);
  for (int i = 0; i < n[0]; ++i) {
    const int i0 = tr.lo[i];
    const double wi = tr.w[i];
    for (int j = 0; j < n[1]; ++j) {
      const int j0 = tt.lo[j];
      const double wj = tt.w[j];
      double* o = &out(i, j, 0);
      const double* b = f.data() + f.index(i0, j0, 0);
      for (int k = 0; k < n[2]; ++k) {
        const int k0 = tp.lo[k];
        const double wk = tp.w[k];
        const double* c = b + k0;
        const double lo = (1 - wj) * ((1 - wk) * c[0] + wk * c[1]) + wj * ((1 - wk) * c[sj] + wk * c[sj + 1]);
        const double* c2 = c + si;
        const double hi =
            (1 - wj) * ((1 - wk) * c2[0] + wk * c2[1]) + wj * ((1 - wk) * c2[sj] + wk * c2[sj + 1]);
        o[k] = (1 - wi) * lo + wi * hi;
      }
    }
  }
  return out;
}

Field advect_scalar(const MacGrid& g, const VectorField& a, const Field& f) {
  require_layout(f, g, "advect_scalar");
  for (int c = 0; c < 3; ++c) require_layout(a[c], g, component_layout(c), "advect_scalar velocity");
  Field out(f.layout(), f.dims());
  const auto& xr = g.axis(f.layout(), 0).x;
  const auto& xt = g.axis(f.layout(), 1).x;
  for (int c = 0; c < 3; ++c) {
    const Field ac = transfer(g, a[c], f.layout());
    const Field df = partial(g, static_cast<Dir>(c), f);
    for_interior(f.dims(), [&](int i, int j, int k) {
      const std::size_t m = f.index(i, j, k);
      double metric = 1.0;
      if (c == 1) metric = 1.0 / xr[i];
      if (c == 2) metric = 1.0 / (xr[i] * std::sin(xt[j]));
      out[m] += ac[m] * metric * df[m];
    });
  }
  return out;
}

Field divergence_part(const MacGrid& g, int jd, const Field& uj) {
  require_layout(uj, g, component_layout(jd), "divergence_part");
  Field out = make_scalar(g);
  const NodeAxis& cr = g.axis(Dir::R, Stagger::Center);
  const NodeAxis& ct = g.axis(Dir::Theta, Stagger::Center);
  const auto& fr = g.faces(Dir::R);
  const auto& ft = g.faces(Dir::Theta);
  const auto& fp = g.faces(Dir::Phi);
  const std::size_t s = uj.stride(jd);
  for_interior(out.dims(), [&](int i, int j, int k) {
    const double r = cr.x[i], th = ct.x[j];
    double v = 0;
    if (jd == 0) {
      const std::size_t m = uj.index(i, j, k);  // face i of u_r is the upper face of cell ext i
      v = (fr[i] * fr[i] * uj[m] - fr[i - 1] * fr[i - 1] * uj[m - s]) / (r * r * (fr[i] - fr[i - 1]));
    } else if (jd == 1) {
      const std::size_t m = uj.index(i, j, k);
      v = (std::sin(ft[j]) * uj[m] - std::sin(ft[j - 1]) * uj[m - s]) / (r * std::sin(th) * (ft[j] - ft[j - 1]));
    } else {
      const std::size_t m = uj.index(i, j, k);
      v = (uj[m] - uj[m - s]) / (r * std::sin(th) * (fp[k] - fp[k - 1]));
    }
    out(i, j, k) = v;
  });
  return out;
}

Field divergence(const MacGrid& g, const VectorField& u) {
  Field out = divergence_part(g, 0, u[0]);
  out += divergence_part(g, 1, u[1]);
  out += divergence_part(g, 2, u[2]);
  return out;
}

Field grad_component(const MacGrid& g, int id, const Field& p) {
  require_layout(p, g, kCellLayout, "grad_component");
  const Layout l = component_layout(id);
  Field out(l, g.dims(l));
  const auto& xr = g.axis(l, 0).x;
  const auto& xt = g.axis(l, 1).x;
  const NodeAxis& cen = g.axis(static_cast<Dir>(id), Stagger::Center);
  const std::size_t s = p.stride(id);
  for_interior(out.dims(), [&](int i, int j, int k) {
    const int q = id == 0 ? i : id == 1 ? j : k;
    // face q sits between centred nodes q and q+1; other directions coincide
    const std::size_t m = p.index(i, j, k);
    double v = (p[m + s] - p[m]) / (cen.x[q + 1] - cen.x[q]);
    if (id == 1) v /= xr[i];
    if (id == 2) v /= xr[i] * std::sin(xt[j]);
    out(i, j, k) = v;
  });
  return out;
}

VectorField grad(const MacGrid& g, const Field& p) {
  VectorField u;
  for (int c = 0; c < 3; ++c) u[c] = grad_component(g, c, p);
  return u;
}

Field grad_div_term(const MacGrid& g, int i, int j, const Field& uj) {
  return grad_component(g, i, divergence_part(g, j, uj));
}

Field own_extras(const MacGrid& g, int c, const Field& u) {
  const Layout l = component_layout(c);
  require_layout(u, g, l, "own_extras");
  const auto& xr = g.axis(l, 0).x;
  const auto& xt = g.axis(l, 1).x;
  Field out(l, u.dims());
  if (c == 0) {
    Field w = u;
    for (int i = 0; i < w.dim(0); ++i)
      for (int j = 0; j < w.dim(1); ++j)
        for (int k = 0; k < w.dim(2); ++k) w(i, j, k) *= xr[i] * xr[i];
    const Field dw = partial(g, Dir::R, w);
    for_interior(u.dims(), [&](int i, int j, int k) {
      const double r = xr[i];
      out(i, j, k) = -2.0 * u(i, j, k) / (r * r) + 2.0 / (r * r * r) * dw(i, j, k);
    });
  } else if (c == 1) {
    Field w = u;
    for (int i = 0; i < w.dim(0); ++i)
      for (int j = 0; j < w.dim(1); ++j)
        for (int k = 0; k < w.dim(2); ++k) w(i, j, k) *= std::sin(xt[j]);
    const Field dw = partial(g, Dir::Theta, w);
    for_interior(u.dims(), [&](int i, int j, int k) {
      const double r = xr[i], st = std::sin(xt[j]);
      const double q = 1.0 / (r * r * st * st);
      out(i, j, k) = -u(i, j, k) * q + 2.0 * std::cos(xt[j]) * q * dw(i, j, k);
    });
  } else {
    for_interior(u.dims(), [&](int i, int j, int k) {
      const double r = xr[i], st = std::sin(xt[j]);
      out(i, j, k) = -u(i, j, k) / (r * r * st * st);
    });
  }
  return out;
}

Field cross_extras(const MacGrid& g, int c, const VectorField& u) {
  for (int d = 0; d < 3; ++d) require_layout(u[d], g, component_layout(d), "cross_extras");
  const Layout l = component_layout(c);
  Field out(l, g.dims(l));
  if (c == 0) return out;
  const auto& fr = g.faces(Dir::R);
  const auto& xr = g.axis(l, 0).x;
  const auto& xt = g.axis(l, 1).x;
  const Transfer1D& r_fc = g.transfer(Dir::R, Stagger::Face, Stagger::Center);
  const Field& ur = u[0];
  // u_r averaged to the r-centre of node i, at (j,k) of u_r's own nodes
  auto ur_c = [&](int i, int j, int k) {
    const int a = r_fc.lo[i];
    const double w = r_fc.w[i];
    return (1 - w) * ur(a, j, k) + w * ur(a + 1, j, k);
  };
  auto dr_r2ur = [&](int i, int j, int k) {  // d_r(r^2 u_r) at r-centre i
    return (fr[i] * fr[i] * ur(i, j, k) - fr[i - 1] * fr[i - 1] * ur(i - 1, j, k)) / (fr[i] - fr[i - 1]);
  };
  if (c == 1) {
    const NodeAxis& tc = g.axis(Dir::Theta, Stagger::Center);
    const Transfer1D& t_cf = g.transfer(Dir::Theta, Stagger::Center, Stagger::Face);
    for_interior(out.dims(), [&](int i, int j, int k) {
      const double r = xr[i], th = xt[j];
      const double dth = (ur_c(i, j + 1, k) - ur_c(i, j, k)) / (tc.x[j + 1] - tc.x[j]);
      const int a = t_cf.lo[j];
      const double w = t_cf.w[j];
      const double drr = (1 - w) * dr_r2ur(i, a, k) + w * dr_r2ur(i, a + 1, k);
      out(i, j, k) = 2.0 / (r * r) * dth + 2.0 * std::cos(th) / (r * r * r * std::sin(th)) * drr;
    });
  } else {
    const NodeAxis& pc = g.axis(Dir::Phi, Stagger::Center);
    const Transfer1D& t_fc = g.transfer(Dir::Theta, Stagger::Face, Stagger::Center);
    const Field& ut = u[1];
    auto ut_c = [&](int i, int j, int k) {
      const int a = t_fc.lo[j];
      const double w = t_fc.w[j];
      return (1 - w) * ut(i, a, k) + w * ut(i, a + 1, k);
    };
    for_interior(out.dims(), [&](int i, int j, int k) {
      const double r = xr[i], st = std::sin(xt[j]), ct = std::cos(xt[j]);
      const double h = pc.x[k + 1] - pc.x[k];
      const double dpr = (ur_c(i, j, k + 1) - ur_c(i, j, k)) / h;
      const double dpt = (ut_c(i, j, k + 1) - ut_c(i, j, k)) / h;
      out(i, j, k) = 2.0 / (r * r * st) * dpr + 2.0 * ct / (r * r * st * st) * dpt;
    });
  }
  return out;
}

Field vector_laplacian_extras(const MacGrid& g, int c, const VectorField& u) {
  Field out = own_extras(g, c, u[c]);
  out += cross_extras(g, c, u);
  return out;
}

double weight_value(const MacGrid& g, WeightKind w, double r, double theta) {
  const double st = std::sin(theta);
  const double r1 = g.r_hat();
  switch (w) {
    case WeightKind::Omega: return r * r * st;
    case WeightKind::Omega1: return (r * r / (r1 * r1) - 1.0) * st;
    case WeightKind::Omega2: {
      const double s1 = std::sin(g.theta1());
      return r * r * st / (r1 * r1 * s1 * s1) - 1.0 / st;
    }
  }
  return 0.0;
}

double weighted_product(const MacGrid& g, const Field& f, const Field& h, WeightKind w) {
  require_layout(f, g, "weighted_product");
  f.require_same_shape(h, "weighted_product");
  const NodeAxis& ar = g.axis(f.layout(), 0);
  const NodeAxis& at = g.axis(f.layout(), 1);
  const NodeAxis& ap = g.axis(f.layout(), 2);
  double sum = 0;
  for (int i = 1; i < f.dim(0) - 1; ++i)
    for (int j = 1; j < f.dim(1) - 1; ++j) {
      const double wv = weight_value(g, w, ar.x[i], at.x[j]);
      if (wv < -1e-13)
        fail(ErrorKind::InvalidArgument, "negative quadrature weight encountered (chart inconsistent)");
      const double base = wv * ar.width[i] * at.width[j];
      const double* a = f.data() + f.index(i, j, 0);
      const double* b = h.data() + h.index(i, j, 0);
      double line = 0;
      for (int k = 1; k < f.dim(2) - 1; ++k) line += a[k] * b[k] * ap.width[k];
      sum += base * line;
    }
  return sum;
}

double weighted_norm(const MacGrid& g, const Field& f, WeightKind w) {
  return std::sqrt(std::max(0.0, weighted_product(g, f, f, w)));
}

}  // namespace yy
