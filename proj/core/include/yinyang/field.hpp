#pragma once
/// Node-valued arrays on one chart. Values are stored (i*Nt + j)*Np + k with
/// phi contiguous; the boundary layer (index 0 / N-1 in any direction) holds
/// Dirichlet data, interior nodes are 1..N-2.

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "yinyang/geometry.hpp"

namespace yy {

class Field {
 public:
  Field() = default;
  Field(const Layout& layout, const std::array<int, 3>& dims, double fill = 0.0);

  const Layout& layout() const { return layout_; }
  const std::array<int, 3>& dims() const { return dims_; }
  int dim(int d) const { return dims_[d]; }
  std::size_t size() const { return v_.size(); }
  bool empty() const { return v_.empty(); }

  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * dims_[1] + j) * dims_[2] + k;
  }
  std::size_t stride(int d) const {
    return d == 2 ? 1 : d == 1 ? static_cast<std::size_t>(dims_[2])
                               : static_cast<std::size_t>(dims_[1]) * dims_[2];
  }
  double& operator()(int i, int j, int k) { return v_[index(i, j, k)]; }
  double operator()(int i, int j, int k) const { return v_[index(i, j, k)]; }
  double& operator[](std::size_t n) { return v_[n]; }
  double operator[](std::size_t n) const { return v_[n]; }
  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  std::span<double> values() { return v_; }
  std::span<const double> values() const { return v_; }

  bool is_boundary(int i, int j, int k) const {
    return i == 0 || j == 0 || k == 0 || i == dims_[0] - 1 || j == dims_[1] - 1 || k == dims_[2] - 1;
  }
  void fill(double v);
  void fill_interior(double v);
  void fill_boundary(double v);
  /// Throws a shape error when layouts or dims differ.
  void require_same_shape(const Field& o, const char* what) const;

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(double s);
  /// this += a * x
  void axpy(double a, const Field& x);

 private:
  Layout layout_;
  std::array<int, 3> dims_{0, 0, 0};
  std::vector<double> v_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);

/// Staggered velocity: c[0] = u_r on r-faces, c[1] = u_theta, c[2] = u_phi.
struct VectorField {
  std::array<Field, 3> c;
  Field& operator[](int d) { return c[d]; }
  const Field& operator[](int d) const { return c[d]; }
};

Field make_field(const MacGrid& g, const Layout& l, double fill = 0.0);
Field make_scalar(const MacGrid& g, double fill = 0.0);
VectorField make_vector(const MacGrid& g, double fill = 0.0);

/// Max over all nodes / interior nodes of |f|.
double max_abs(const Field& f);
double max_abs_interior(const Field& f);
double max_abs_diff(const Field& a, const Field& b);

/// Which nodes a sampling call writes.
enum class NodeSet { All, Boundary, Walls };

using PointFn = std::function<double(const Vec3& x)>;   // Cartesian point
using VectorFn = std::function<Vec3(const Vec3& x)>;    // Cartesian components

/// f(node) = fn(cartesian(node)) on the selected nodes.
void sample(const MacGrid& g, Field& f, const PointFn& fn, NodeSet set = NodeSet::All);
/// u_c(node) = e_c(node) . fn(cartesian(node)) for each staggered component.
void sample(const MacGrid& g, VectorField& u, const VectorFn& fn, NodeSet set = NodeSet::All);
void sample_component(const MacGrid& g, int c, Field& f, const VectorFn& fn, NodeSet set = NodeSet::All);

/// Loop over the interior nodes (i,j,k in [1,N-2]).
template <class F>
void for_interior(const std::array<int, 3>& n, F&& fn) {
  for (int i = 1; i < n[0] - 1; ++i)
    for (int j = 1; j < n[1] - 1; ++j)
      for (int k = 1; k < n[2] - 1; ++k) fn(i, j, k);
}

/// Loop over every boundary-layer node.
template <class F>
void for_boundary(const std::array<int, 3>& n, F&& fn) {
  for (int i = 0; i < n[0]; ++i)
    for (int j = 0; j < n[1]; ++j) {
      const bool edge = i == 0 || j == 0 || i == n[0] - 1 || j == n[1] - 1;
      if (edge) {
        for (int k = 0; k < n[2]; ++k) fn(i, j, k);
      } else {
        fn(i, j, 0);
        fn(i, j, n[2] - 1);
      }
    }
}

}  // namespace yy
