#include "yinyang/verify.hpp"

#include <cmath>
#include <limits>

#include "yinyang/coupling.hpp"
#include "yinyang/error.hpp"
#include "yinyang/operators.hpp"

namespace yy {

Vec3 ManufacturedSolution::velocity(double t, const Vec3& X) const {
  const double c = std::cos(t), x = X[0], y = X[1], z = X[2];
  return {c * 2 * x * x * y * z, -c * x * y * y * z, -c * x * y * z * z};
}

double ManufacturedSolution::pressure(double t, const Vec3& X) const {
  return std::cos(t) * X[0] * X[1] * X[2];
}

double ManufacturedSolution::temperature(double t, const Vec3& X) const {
  return 2 * std::cos(t) * X[0] * X[0] * X[1] * X[2];
}

Vec3 ManufacturedSolution::momentum_forcing(double t, const Vec3& X) const {
  const double c = std::cos(t), s = std::sin(t), x = X[0], y = X[1], z = X[2];
  const double c2 = c * c;
  // d_t u
  Vec3 f{-s * 2 * x * x * y * z, s * x * y * y * z, s * x * y * z * z};
  // (u.grad)u
  f[0] += c2 * 4 * x * x * x * y * y * z * z;
  f[1] += c2 * x * x * y * y * y * z * z;
  f[2] += c2 * x * x * y * y * z * z * z;
  // grad p
  f[0] += c * y * z;
  f[1] += c * x * z;
  f[2] += c * x * y;
  // -nu Lap u
  f[0] -= p_.nu * c * 4 * y * z;
  f[1] -= p_.nu * c * (-2) * x * z;
  f[2] -= p_.nu * c * (-2) * x * y;
  // -Pr Ra T g
  if (p_.gravity) {
    const Vec3 g = p_.gravity(X);
    const double b = p_.Pr * p_.Ra * temperature(t, X);
    for (int d = 0; d < 3; ++d) f[d] -= b * g[d];
  }
  return f;
}

double ManufacturedSolution::heat_source(double t, const Vec3& X) const {
  const double c = std::cos(t), s = std::sin(t), x = X[0], y = X[1], z = X[2];
  return -2 * s * x * x * y * z + 4 * c * c * x * x * x * y * y * z * z - p_.kappa * 4 * c * y * z;
}

namespace {
Vec3 project(const std::array<Vec3, 3>& e, const Vec3& v) {
  Vec3 out;
  for (int c = 0; c < 3; ++c) out[c] = e[c][0] * v[0] + e[c][1] * v[1] + e[c][2] * v[2];
  return out;
}
}  // namespace

PointValues manufactured_eval(const ManufacturedSolution& m, double t, Chart chart, const Spherical& pt) {
  const Vec3 x = chart_to_cartesian(chart, pt);
  PointValues v;
  v.u = project(spherical_basis(chart, pt), m.velocity(t, x));
  v.p = m.pressure(t, x);
  v.T = m.temperature(t, x);
  return v;
}

LandauSolution::LandauSolution(double reynolds, double a) : a_(a) {
  if (!(reynolds > 0)) fail(ErrorKind::InvalidArgument, "Landau Reynolds number must be positive");
  if (!(a > 1.0 + 1e-12))
    fail(ErrorKind::InvalidArgument, "Landau parameter a must exceed 1 (a -> 1 is the singular jet limit)");
  nu_ = 1.0 / reynolds;
}

PointValues LandauSolution::axis_frame(double r, double th) const {
  const double ct = std::cos(th), st = std::sin(th);
  const double q = a_ - ct;
  PointValues v;
  v.u = {2 * nu_ / r * ((a_ * a_ - 1) / (q * q) - 1), -2 * nu_ * st / (r * q), 0.0};
  v.p = 4 * nu_ * nu_ * (a_ * ct - 1) / (r * r * q * q);
  return v;
}

Vec3 LandauSolution::velocity(double, const Vec3& x) const {
  const Spherical s = cartesian_to_chart(Chart::Yin, x);
  const PointValues v = axis_frame(s.r, s.theta);
  const auto e = spherical_basis(Chart::Yin, s);
  Vec3 out;
  for (int d = 0; d < 3; ++d) out[d] = v.u[0] * e[0][d] + v.u[1] * e[1][d];
  return out;
}

double LandauSolution::pressure(double, const Vec3& x) const {
  const Spherical s = cartesian_to_chart(Chart::Yin, x);
  return axis_frame(s.r, s.theta).p;
}

PointValues landau_eval(const LandauSolution& l, Chart chart, const Spherical& pt) {
  const Vec3 x = chart_to_cartesian(chart, pt);
  PointValues v;
  v.u = project(spherical_basis(chart, pt), l.velocity(0.0, x));
  v.p = l.pressure(0.0, x);
  return v;
}

const char* quantity_name(int q) {
  static const char* names[kQuantityCount] = {"u1", "p1", "u2", "p2", "T"};
  return names[q];
}

double field_error(const MacGrid& g, const Field& f, const PointFn& fn, double shift) {
  Field e = f;
  sample(g, e, fn, NodeSet::All);
  for (std::size_t n = 0; n < e.size(); ++n) e[n] = f[n] - e[n] - shift;
  return weighted_norm(g, e, WeightKind::Omega);
}

double vector_error(const MacGrid& g, const VectorField& u, const VectorFn& fn) {
  double sum = 0;
  for (int c = 0; c < 3; ++c) {
    Field e = u[c];
    sample_component(g, c, e, fn, NodeSet::All);
    for (std::size_t n = 0; n < e.size(); ++n) e[n] = u[c][n] - e[n];
    const double v = weighted_norm(g, e, WeightKind::Omega);
    sum += v * v;
  }
  return std::sqrt(sum);
}

namespace {
double pressure_offset(const MacGrid& g, const Field& p, const FlowProblem& exact, double t) {
  Field e = p;
  sample(g, e, [&](const Vec3& x) { return exact.pressure(t, x); });
  for (std::size_t n = 0; n < e.size(); ++n) e[n] = p[n] - e[n];
  const Field one(p.layout(), p.dims(), 1.0);
  return weighted_product(g, e, one, WeightKind::Omega) / weighted_product(g, one, one, WeightKind::Omega);
}
}  // namespace

ErrorReport error_norms(const YinYangDomain& dom, const GlobalState& s, const FlowProblem& exact, double t,
                        const ErrorOptions& opt) {
  ErrorReport rep;
  rep.t = t;
  const VectorFn uf = [&](const Vec3& x) { return exact.velocity(t, x); };
  const PointFn pf = [&](const Vec3& x) { return exact.pressure(t, x); };
  const PointFn tf = [&](const Vec3& x) { return exact.temperature(t, x); };
  for (Chart c : {Chart::Yin, Chart::Yang}) {
    const int ci = static_cast<int>(c);
    const MacGrid& g = dom.grid(c);
    const ChartState& cs = s.charts[ci];
    if (exact.has_flow()) {
      rep.e[kU1][ci] = vector_error(g, cs.flow.u1_n, uf);
      rep.e[kU2][ci] = vector_error(g, cs.flow.u2_n, uf);
      const double s1 = opt.remove_pressure_mean ? pressure_offset(g, cs.flow.p1_n, exact, t) : 0.0;
      const double s2 = opt.remove_pressure_mean ? pressure_offset(g, cs.flow.p2_n, exact, t) : 0.0;
      rep.e[kP1][ci] = field_error(g, cs.flow.p1_n, pf, s1);
      rep.e[kP2][ci] = field_error(g, cs.flow.p2_n, pf, s2);
    }
    if (exact.has_heat()) rep.e[kT][ci] = field_error(g, cs.thermal.T_n, tf);
  }
  for (int q = 0; q < kQuantityCount; ++q) rep.e[q][2] = std::hypot(rep.e[q][0], rep.e[q][1]);
  return rep;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) fail(ErrorKind::DegenerateFit, "slope fit needs matching points (>= 2)");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0) || !std::isfinite(y[i]))
      fail(ErrorKind::DegenerateFit, "slope fit needs positive finite values");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (std::abs(den) < 1e-300) fail(ErrorKind::DegenerateFit, "slope fit needs distinct abscissae");
  return (n * sxy - sx * sy) / den;
}

std::array<double, kQuantityCount> convergence_slope(const ConvergenceTable& table) {
  if (table.rows.size() < 3 || table.x.size() != table.rows.size())
    fail(ErrorKind::DegenerateFit, "convergence table needs at least three rows");
  std::array<double, kQuantityCount> out;
  for (int q = 0; q < kQuantityCount; ++q) {
    std::vector<double> y;
    bool all_zero = true;
    for (const auto& r : table.rows) {
      y.push_back(r.combined(q));
      if (r.combined(q) != 0.0) all_zero = false;
    }
    out[q] = all_zero ? std::numeric_limits<double>::quiet_NaN() : fit_slope(table.x, y);
  }
  return out;
}

}  // namespace yy
