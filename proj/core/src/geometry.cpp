#include "yinyang/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "yinyang/error.hpp"

namespace yy {

namespace {
constexpr double kPi = std::numbers::pi;

double weight_fn(Dir d, double x) {
  switch (d) {
    case Dir::R: return x * x;
    case Dir::Theta: return std::sin(x);
    default: return 1.0;
  }
}

void build_tables(NodeAxis& a, Dir d) {
  const int n = a.size();
  a.width.assign(n, 0.0);
  a.d2lo.assign(n, 0.0);
  a.d2up.assign(n, 0.0);
  a.d1lo.assign(n, 0.0);
  a.d1di.assign(n, 0.0);
  a.d1up.assign(n, 0.0);
  a.gdlo.assign(n, 0.0);
  a.gddi.assign(n, 0.0);
  a.gdup.assign(n, 0.0);
  a.width[0] = a.dual[0] - a.x[0];
  a.width[n - 1] = a.x[n - 1] - a.dual[n - 2];
  for (int q = 1; q + 1 < n; ++q) {
    const double hm = a.x[q] - a.x[q - 1];
    const double hp = a.x[q + 1] - a.x[q];
    const double v = a.dual[q] - a.dual[q - 1];
    a.width[q] = v;
    const double wq = weight_fn(d, a.x[q]);
    a.d2lo[q] = weight_fn(d, a.dual[q - 1]) / (hm * v * wq);
    a.d2up[q] = weight_fn(d, a.dual[q]) / (hp * v * wq);
    a.d1lo[q] = -hp / (hm * (hm + hp));
    a.d1up[q] = hm / (hp * (hm + hp));
    a.d1di[q] = (hp - hm) / (hm * hp);
    const double wl = weight_fn(d, a.dual[q - 1]), wr = weight_fn(d, a.dual[q]);
    a.gdlo[q] = weight_fn(d, a.x[q - 1]) / (wl * hm * v);
    a.gdup[q] = weight_fn(d, a.x[q + 1]) / (wr * hp * v);
    a.gddi[q] = -wq * (1.0 / (wr * hp) + 1.0 / (wl * hm)) / v;
  }
}

Transfer1D build_transfer(const std::vector<double>& src, const std::vector<double>& dst) {
  Transfer1D t;
  t.lo.resize(dst.size());
  t.w.resize(dst.size());
  const int ns = static_cast<int>(src.size());
  for (std::size_t q = 0; q < dst.size(); ++q) {
    const double x = dst[q];
    int s = static_cast<int>(std::upper_bound(src.begin(), src.end(), x) - src.begin()) - 1;
    s = std::clamp(s, 0, ns - 2);
    double w = (x - src[s]) / (src[s + 1] - src[s]);
    if (w >= 1.0) {  // lands on the right node exactly
      if (s + 2 < ns) {
        ++s;
        w = 0.0;
      } else {
        w = 1.0;
      }
    }
    t.lo[q] = s;
    t.w[q] = w;
  }
  return t;
}
}  // namespace

const char* chart_name(Chart c) { return c == Chart::Yin ? "yin" : "yang"; }

const char* dir_name(Dir d) {
  switch (d) {
    case Dir::R: return "r";
    case Dir::Theta: return "theta";
    default: return "phi";
  }
}

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::Shape: return "shape";
    case ErrorKind::OutOfDomain: return "out-of-domain";
    case ErrorKind::PoleAmbiguity: return "pole-ambiguity";
    case ErrorKind::Singular: return "singular";
    case ErrorKind::OverlapTooSmall: return "overlap-too-small";
    case ErrorKind::NonConvergence: return "non-convergence";
    case ErrorKind::Sequencing: return "sequencing";
    case ErrorKind::DegenerateFit: return "degenerate-fit";
    case ErrorKind::Config: return "config";
    case ErrorKind::Format: return "format";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

Layout component_layout(int c) {
  switch (c) {
    case 0: return kFaceRLayout;
    case 1: return kFaceThetaLayout;
    case 2: return kFacePhiLayout;
  }
  fail(ErrorKind::InvalidArgument, "component index must be 0, 1 or 2");
}

void ShellExtents::validate() const {
  if (!(r_inner > 0)) fail(ErrorKind::InvalidArgument, "R1 must be positive");
  if (!(r_outer > r_inner)) fail(ErrorKind::InvalidArgument, "R2 must exceed R1");
  if (!(epsilon >= 0) || !(epsilon < kPi / 8))
    fail(ErrorKind::InvalidArgument, "epsilon must lie in [0, pi/8)");
}

void GridSpec::validate() const {
  for (Dir d : {Dir::R, Dir::Theta, Dir::Phi}) {
    if (count(d) < 2)
      fail(ErrorKind::InvalidArgument, std::string("n_") + dir_name(d) + " must be at least 2");
    const auto& s = stretching[idx(d)];
    if (s.empty()) continue;
    if (static_cast<int>(s.size()) != count(d) + 1)
      fail(ErrorKind::InvalidArgument, std::string("stretching for ") + dir_name(d) + " needs n+1 values");
    if (s.front() != 0.0 || s.back() != 1.0)
      fail(ErrorKind::InvalidArgument, std::string("stretching for ") + dir_name(d) + " must map onto [0,1]");
    for (std::size_t q = 1; q < s.size(); ++q)
      if (!(s[q] > s[q - 1]))
        fail(ErrorKind::InvalidArgument, std::string("stretching for ") + dir_name(d) + " must be strictly increasing");
  }
}

MacGrid::MacGrid(Chart chart, const Vec3& lo, const Vec3& hi, const GridSpec& spec,
                 double r_hat, double theta1)
    : chart_(chart), spec_(spec), lo_(lo), hi_(hi), r_hat_(r_hat), theta1_(theta1) {
  spec_.validate();
  if (!(lo[0] > 0)) fail(ErrorKind::InvalidArgument, "grid radius must be positive");
  if (!(lo[1] > 0) || !(hi[1] < kPi)) fail(ErrorKind::InvalidArgument, "theta range must lie inside (0, pi)");
  for (int d = 0; d < 3; ++d) {
    if (!(hi[d] > lo[d])) fail(ErrorKind::InvalidArgument, "grid box must have positive extent");
    const int n = spec_.count(static_cast<Dir>(d));
    auto& f = faces_[d];
    f.resize(n + 1);
    const auto& s = spec_.stretching[d];
    for (int q = 0; q <= n; ++q) {
      const double t = s.empty() ? static_cast<double>(q) / n : s[q];
      f[q] = lo[d] + (hi[d] - lo[d]) * t;
    }
    f[0] = lo[d];
    f[n] = hi[d];
    auto& c = centers_[d];
    c.resize(n);
    for (int q = 0; q < n; ++q) c[q] = 0.5 * (f[q] + f[q + 1]);

    NodeAxis& ac = axes_[d][0];
    ac.x.reserve(n + 2);
    ac.x.push_back(f[0]);
    ac.x.insert(ac.x.end(), c.begin(), c.end());
    ac.x.push_back(f[n]);
    ac.dual = f;
    NodeAxis& af = axes_[d][1];
    af.x = f;
    af.dual = c;
    build_tables(ac, static_cast<Dir>(d));
    build_tables(af, static_cast<Dir>(d));
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) transfers_[d][a][b] = build_transfer(axes_[d][a].x, axes_[d][b].x);
  }
}

std::array<int, 3> MacGrid::dims(const Layout& l) const {
  return {axis(l, 0).size(), axis(l, 1).size(), axis(l, 2).size()};
}

Spherical MacGrid::node(const Layout& l, int i, int j, int k) const {
  return {axis(l, 0).x[i], axis(l, 1).x[j], axis(l, 2).x[k]};
}

CellLocation locate_cell(const MacGrid& grid, const Spherical& p) {
  const std::array<double, 3> v{p.r, p.theta, p.phi};
  CellLocation loc;
  for (int d = 0; d < 3; ++d) {
    const auto& f = grid.faces(static_cast<Dir>(d));
    if (!(v[d] >= f.front() && v[d] <= f.back())) {
      std::ostringstream os;
      os.precision(17);
      os << "point outside grid box: " << dir_name(static_cast<Dir>(d)) << " = " << v[d]
         << " not in [" << f.front() << ", " << f.back() << "]";
      fail(ErrorKind::OutOfDomain, os.str());
    }
    const int m = static_cast<int>(std::lower_bound(f.begin(), f.end(), v[d]) - f.begin());
    const int c = m == 0 ? 0 : m - 1;
    loc.cell[d] = c;
    loc.offset[d] = (v[d] - f[c]) / (f[c + 1] - f[c]);
  }
  return loc;
}

Vec3 chart_to_cartesian(Chart chart, const Spherical& p) {
  const double st = std::sin(p.theta), ct = std::cos(p.theta);
  const double sp = std::sin(p.phi), cp = std::cos(p.phi);
  if (chart == Chart::Yin) return {p.r * st * cp, p.r * st * sp, p.r * ct};
  return {-p.r * st * cp, p.r * ct, p.r * st * sp};
}

Spherical cartesian_to_chart(Chart chart, const Vec3& x) {
  // Yang coordinates of (x,y,z) are the Yin coordinates of (-x, z, y).
  const Vec3 v = chart == Chart::Yin ? x : Vec3{-x[0], x[2], x[1]};
  Spherical s;
  s.r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  s.theta = std::atan2(std::hypot(v[0], v[1]), v[2]);
  double ph = std::atan2(v[1], v[0]);
  if (ph < 0) ph += 2 * kPi;
  if (ph >= 2 * kPi) ph = 0;
  s.phi = ph;
  return s;
}

Spherical sibling_coords(Chart chart, const Spherical& p) {
  Spherical s = cartesian_to_chart(other(chart), chart_to_cartesian(chart, p));
  if (s.theta < 1e-12 || s.theta > kPi - 1e-12) {
    std::ostringstream os;
    os << "sibling longitude undefined: point (" << p.r << ", " << p.theta << ", " << p.phi
       << ") maps onto the " << chart_name(other(chart)) << " pole";
    fail(ErrorKind::PoleAmbiguity, os.str());
  }
  s.r = p.r;
  return s;
}

std::array<Vec3, 3> spherical_basis(Chart chart, const Spherical& p) {
  const double st = std::sin(p.theta), ct = std::cos(p.theta);
  const double sp = std::sin(p.phi), cp = std::cos(p.phi);
  if (chart == Chart::Yin)
    return {Vec3{st * cp, st * sp, ct}, Vec3{ct * cp, ct * sp, -st}, Vec3{-sp, cp, 0.0}};
  return {Vec3{-st * cp, ct, st * sp}, Vec3{-ct * cp, -st, ct * sp}, Vec3{sp, 0.0, cp}};
}

YinYangDomain build_domain(const ShellExtents& extents, const GridSpec& spec) {
  extents.validate();
  spec.validate();
  const double e = extents.epsilon;
  const Vec3 lo{extents.r_inner, kPi / 4 - e, kPi / 4 - e};
  const Vec3 hi{extents.r_outer, 3 * kPi / 4 + e, 7 * kPi / 4 + e};
  YinYangDomain d;
  d.extents = extents;
  d.spec = spec;
  d.yin = MacGrid(Chart::Yin, lo, hi, spec, extents.r_inner, kPi / 4 - e);
  d.yang = MacGrid(Chart::Yang, lo, hi, spec, extents.r_inner, kPi / 4 - e);
  return d;
}

bool inside_box(const MacGrid& g, const Spherical& p, double tol) {
  return p.r >= g.lo(Dir::R) - tol && p.r <= g.hi(Dir::R) + tol && p.theta >= g.lo(Dir::Theta) - tol &&
         p.theta <= g.hi(Dir::Theta) + tol && p.phi >= g.lo(Dir::Phi) - tol && p.phi <= g.hi(Dir::Phi) + tol;
}

namespace {
double box_margin(const MacGrid& g, const Spherical& p) {
  return std::min({p.theta - g.lo(Dir::Theta), g.hi(Dir::Theta) - p.theta, p.phi - g.lo(Dir::Phi),
                   g.hi(Dir::Phi) - p.phi});
}
}  // namespace

CoverageReport check_coverage(const YinYangDomain& dom, int samples) {
  CoverageReport rep;
  rep.samples = samples;
  rep.covered = true;
  const double r0 = dom.extents.r_inner, r1 = dom.extents.r_outer;
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int s = 0; s < samples; ++s) {
    // Fibonacci sphere directions, van der Corput radii
    const double z = 1.0 - 2.0 * (s + 0.5) / samples;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double a = golden * s;
    double vdc = 0, base = 0.5;
    for (int n = s + 1; n > 0; n /= 2, base *= 0.5) vdc += base * (n & 1);
    const double r = r0 + (r1 - r0) * vdc;
    const Vec3 x{r * rho * std::cos(a), r * rho * std::sin(a), r * z};
    const bool in_yin = inside_box(dom.yin, cartesian_to_chart(Chart::Yin, x));
    const bool in_yang = inside_box(dom.yang, cartesian_to_chart(Chart::Yang, x));
    if (!in_yin && !in_yang) rep.covered = false;
  }
  // lateral boundary of each chart, mapped into the sibling
  double margin = 1e300;
  const int m = 400;
  for (Chart c : {Chart::Yin, Chart::Yang}) {
    const MacGrid& g = dom.grid(c);
    const MacGrid& o = dom.grid(other(c));
    const double t0 = g.lo(Dir::Theta), t1 = g.hi(Dir::Theta), p0 = g.lo(Dir::Phi), p1 = g.hi(Dir::Phi);
    for (int q = 0; q <= m; ++q) {
      const double tt = t0 + (t1 - t0) * q / m;
      const double pp = p0 + (p1 - p0) * q / m;
      for (const Spherical& p : {Spherical{r0, tt, p0}, Spherical{r0, tt, p1}, Spherical{r0, t0, pp},
                                 Spherical{r0, t1, pp}}) {
        const Spherical sp = cartesian_to_chart(other(c), chart_to_cartesian(c, p));
        margin = std::min(margin, box_margin(o, sp));
      }
    }
  }
  rep.min_margin = margin;
  rep.boundary_inside = margin > 1e-12;
  return rep;
}

namespace {
template <class Cmp>
double cell_diameter_extreme(const MacGrid& g, Cmp better, double init) {
  const auto &fr = g.faces(Dir::R), &ft = g.faces(Dir::Theta), &fp = g.faces(Dir::Phi);
  double best = init;
  for (int i = 0; i < g.cells(Dir::R); ++i)
    for (int j = 0; j < g.cells(Dir::Theta); ++j)
      for (int k = 0; k < g.cells(Dir::Phi); ++k) {
        double dmax = 0;
        for (int a = 0; a < 4; ++a) {
          const int dj = a & 1, dk = (a >> 1) & 1;
          const Vec3 p = chart_to_cartesian(g.chart(), {fr[i], ft[j + dj], fp[k + dk]});
          const Vec3 q = chart_to_cartesian(g.chart(), {fr[i + 1], ft[j + 1 - dj], fp[k + 1 - dk]});
          dmax = std::max(dmax, std::hypot(p[0] - q[0], p[1] - q[1], p[2] - q[2]));
        }
        if (better(dmax, best)) best = dmax;
      }
  return best;
}
}  // namespace

double max_cell_diameter(const MacGrid& g) {
  return cell_diameter_extreme(g, [](double a, double b) { return a > b; }, 0.0);
}
double min_cell_diameter(const MacGrid& g) {
  return cell_diameter_extreme(g, [](double a, double b) { return a < b; }, 1e300);
}

}  // namespace yy
