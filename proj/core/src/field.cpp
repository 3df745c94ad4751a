#include "yinyang/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "yinyang/error.hpp"

namespace yy {

Field::Field(const Layout& layout, const std::array<int, 3>& dims, double fill)
    : layout_(layout), dims_(dims) {
  for (int d = 0; d < 3; ++d)
    if (dims[d] < 2) fail(ErrorKind::Shape, "field needs at least two nodes per direction");
  v_.assign(static_cast<std::size_t>(dims[0]) * dims[1] * dims[2], fill);
}

void Field::fill(double v) { std::fill(v_.begin(), v_.end(), v); }

void Field::fill_interior(double v) {
  for_interior(dims_, [&](int i, int j, int k) { (*this)(i, j, k) = v; });
}

void Field::fill_boundary(double v) {
  for_boundary(dims_, [&](int i, int j, int k) { (*this)(i, j, k) = v; });
}

void Field::require_same_shape(const Field& o, const char* what) const {
  if (!(layout_ == o.layout_) || dims_ != o.dims_)
    fail(ErrorKind::Shape, std::string(what) + ": field shapes differ");
}

Field& Field::operator+=(const Field& o) {
  require_same_shape(o, "field +=");
  for (std::size_t n = 0; n < v_.size(); ++n) v_[n] += o.v_[n];
  return *this;
}

Field& Field::operator-=(const Field& o) {
  require_same_shape(o, "field -=");
  for (std::size_t n = 0; n < v_.size(); ++n) v_[n] -= o.v_[n];
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& x : v_) x *= s;
  return *this;
}

void Field::axpy(double a, const Field& x) {
  require_same_shape(x, "field axpy");
  for (std::size_t n = 0; n < v_.size(); ++n) v_[n] += a * x.v_[n];
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

Field make_field(const MacGrid& g, const Layout& l, double fill) { return Field(l, g.dims(l), fill); }
Field make_scalar(const MacGrid& g, double fill) { return make_field(g, kCellLayout, fill); }
VectorField make_vector(const MacGrid& g, double fill) {
  VectorField u;
  for (int c = 0; c < 3; ++c) u[c] = make_field(g, component_layout(c), fill);
  return u;
}

namespace {
template <class F>
void for_set(const std::array<int, 3>& n, NodeSet set, F&& fn) {
  switch (set) {
    case NodeSet::All:
      for (int i = 0; i < n[0]; ++i)
        for (int j = 0; j < n[1]; ++j)
          for (int k = 0; k < n[2]; ++k) fn(i, j, k);
      break;
    case NodeSet::Boundary: for_boundary(n, fn); break;
    case NodeSet::Walls:
      for (int i : {0, n[0] - 1})
        for (int j = 0; j < n[1]; ++j)
          for (int k = 0; k < n[2]; ++k) fn(i, j, k);
      break;
  }
}
}  // namespace

void sample(const MacGrid& g, Field& f, const PointFn& fn, NodeSet set) {
  if (f.dims() != g.dims(f.layout())) fail(ErrorKind::Shape, "sample: field does not match grid");
  for_set(f.dims(), set, [&](int i, int j, int k) {
    f(i, j, k) = fn(chart_to_cartesian(g.chart(), g.node(f.layout(), i, j, k)));
  });
}

void sample_component(const MacGrid& g, int c, Field& f, const VectorFn& fn, NodeSet set) {
  if (!(f.layout() == component_layout(c)) || f.dims() != g.dims(f.layout()))
    fail(ErrorKind::Shape, "sample: component field does not match grid");
  for_set(f.dims(), set, [&](int i, int j, int k) {
    const Spherical p = g.node(f.layout(), i, j, k);
    const Vec3 v = fn(chart_to_cartesian(g.chart(), p));
    const Vec3 e = spherical_basis(g.chart(), p)[c];
    f(i, j, k) = e[0] * v[0] + e[1] * v[1] + e[2] * v[2];
  });
}

void sample(const MacGrid& g, VectorField& u, const VectorFn& fn, NodeSet set) {
  for (int c = 0; c < 3; ++c) sample_component(g, c, u[c], fn, set);
}

double max_abs(const Field& f) {
  double m = 0;
  for (double x : f.values()) m = std::max(m, std::abs(x));
  return m;
}

double max_abs_interior(const Field& f) {
  double m = 0;
  for_interior(f.dims(), [&](int i, int j, int k) { m = std::max(m, std::abs(f(i, j, k))); });
  return m;
}

double max_abs_diff(const Field& a, const Field& b) {
  a.require_same_shape(b, "max_abs_diff");
  double m = 0;
  for (std::size_t n = 0; n < a.size(); ++n) m = std::max(m, std::abs(a[n] - b[n]));
  return m;
}

}  // namespace yy
