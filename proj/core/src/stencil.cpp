#include "yinyang/stencil.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "yinyang/error.hpp"
#include "yinyang/tridiag.hpp"

namespace yy {

Stencil::Stencil(Dir d, const Layout& l, const std::array<int, 3>& n) : dir(d), layout(l), dims(n) {
  const std::size_t sz = static_cast<std::size_t>(n[0]) * n[1] * n[2];
  lo.assign(sz, 0.0);
  di.assign(sz, 0.0);
  up.assign(sz, 0.0);
}

void Stencil::apply_add(const Field& f, double scale, Field& out, bool interior_only) const {
  if (f.dims() != dims || !(f.layout() == layout)) fail(ErrorKind::Shape, "stencil applied to a foreign field");
  const int d = idx(dir);
  const std::size_t s = f.stride(d);
  const int b = interior_only ? 1 : 0;
  for (int i = (d == 0 ? 1 : b); i < dims[0] - (d == 0 ? 1 : b); ++i)
    for (int j = (d == 1 ? 1 : b); j < dims[1] - (d == 1 ? 1 : b); ++j) {
      const std::size_t row = f.index(i, j, 0);
      const int k0 = d == 2 ? 1 : b, k1 = dims[2] - (d == 2 ? 1 : b);
      for (int k = k0; k < k1; ++k) {
        const std::size_t m = row + k;
        out[m] += scale * (lo[m] * f[m - s] + di[m] * f[m] + up[m] * f[m + s]);
      }
    }
}

void solve_factors(const FactorSet& F, Field& rhs, WorkerPool* pool) {
  rhs.fill_boundary(0.0);
  for (Dir d : F.order) {
    const Stencil& s = F.op(d);
    if (s.dims != rhs.dims()) fail(ErrorKind::Shape, "factor dims differ from right-hand side");
    LineBatch b;
    b.dir = d;
    b.dims = rhs.dims();
    b.lower = s.lo.data();
    b.diag = s.di.data();
    b.upper = s.up.data();
    b.alpha = -0.5 * F.tau;
    b.beta = 1.0;
    b.rhs = rhs.data();
    batch_solve(b, pool);
  }
}

Field apply_factors(const FactorSet& F, const Field& x) {
  // F x = A_{o0} A_{o1} A_{o2} x, applied rightmost first. Each factor acts on
  // nodes interior in its own direction and copies its own-direction
  // boundary nodes, so other-direction boundary layers stay available.
  Field cur = x;
  for (int f = 2; f >= 0; --f) {
    const Stencil& s = F.op(F.order[f]);
    Field next = cur;
    s.apply_add(cur, -0.5 * F.tau, next, /*interior_only=*/false);
    cur = std::move(next);
  }
  Field out(x.layout(), x.dims());
  for_interior(x.dims(), [&](int i, int j, int k) { out(i, j, k) = cur(i, j, k); });
  return out;
}

Field apply_unsplit(const FactorSet& F, const Field& x) {
  Field out(x.layout(), x.dims());
  for_interior(x.dims(), [&](int i, int j, int k) { out(i, j, k) = x(i, j, k); });
  for (const Stencil& s : F.ops) s.apply_add(x, -0.5 * F.tau, out, true);
  return out;
}

double dominance_margin(const FactorSet& F) {
  double margin = 1e300;
  const double h = 0.5 * F.tau;
  for (const Stencil& s : F.ops) {
    const int d = idx(s.dir);
    const auto& n = s.dims;
    for (int i = 1; i < n[0] - 1; ++i)
      for (int j = 1; j < n[1] - 1; ++j)
        for (int k = 1; k < n[2] - 1; ++k) {
          const std::size_t m = (static_cast<std::size_t>(i) * n[1] + j) * n[2] + k;
          const int q = d == 0 ? i : d == 1 ? j : k;
          // couplings to boundary nodes are not part of the matrix
          const double lo = q == 1 ? 0.0 : std::abs(s.lo[m]);
          const double up = q == n[d] - 2 ? 0.0 : std::abs(s.up[m]);
          margin = std::min(margin, std::abs(1.0 - h * s.di[m]) - h * (lo + up));
        }
  }
  return margin;
}

void require_dominance(const FactorSet& F, const char* what) {
  const double m = dominance_margin(F);
  if (m < 0) {
    std::ostringstream os;
    os << what << ": factor matrices lose diagonal dominance (margin " << m << ", tau " << F.tau
       << "); reduce the time step";
    fail(ErrorKind::Singular, os.str());
  }
}

Field error_reduction_rhs(const FactorSet& F, const Field& G, const Field& increment, int k) {
  if (k <= 1) return G;
  Field out = G;
  out -= apply_unsplit(F, increment);
  return out;
}

Field split_update(const FactorSet& F, const Field& g, const Field& prev, const Field& boundary,
                   bool error_reduction, WorkerPool* pool) {
  g.require_same_shape(prev, "split_update");
  g.require_same_shape(boundary, "split_update");
  Field base(g.layout(), g.dims());  // previous iterate, or zero
  if (error_reduction) base = prev;
  Field rho = g;
  rho.fill_boundary(0.0);
  if (error_reduction) rho -= apply_unsplit(F, base);
  // boundary change relative to the base, lifted with zero interior
  Field lift(g.layout(), g.dims());
  bool any = false;
  for_boundary(g.dims(), [&](int i, int j, int k) {
    const double v = boundary(i, j, k) - base(i, j, k);
    lift(i, j, k) = v;
    any = any || v != 0.0;
  });
  if (any) rho -= apply_factors(F, lift);
  solve_factors(F, rho, pool);
  Field out = std::move(base);
  for_interior(out.dims(), [&](int i, int j, int k) { out(i, j, k) += rho(i, j, k); });
  for_boundary(out.dims(), [&](int i, int j, int k) { out(i, j, k) = boundary(i, j, k); });
  return out;
}

}  // namespace yy
