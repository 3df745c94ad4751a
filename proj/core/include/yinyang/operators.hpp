#pragma once
/// Second-order finite-difference operators on one chart.
///
/// All operators write interior nodes only (boundary layer of the result is
/// zero) and read the boundary layer of their inputs as Dirichlet data.

#include "yinyang/field.hpp"
#include "yinyang/geometry.hpp"

namespace yy {

struct DirectionalOperator {
  Dir dir = Dir::R;
  bool hat = false;  // frozen 1/R1^2, 1/(R1^2 sin^2 theta1) coefficients
};

/// Outer multiplier of the directional Laplacian piece at (r, theta).
double directional_multiplier(const MacGrid& g, Dir d, bool hat, double r, double theta);

Field apply_directional(const MacGrid& g, const DirectionalOperator& op, const Field& f);
Field apply_laplacian(const MacGrid& g, const Field& f, bool hat);

/// Coordinate derivative d f / d x_d (no metric factor), interior nodes.
Field partial(const MacGrid& g, Dir d, const Field& f);

/// Linear interpolation of f onto every node of another layout.
Field transfer(const MacGrid& g, const Field& f, const Layout& target);

/// a . grad f at the interior nodes of f, a averaged to f's nodes.
Field advect_scalar(const MacGrid& g, const VectorField& a, const Field& f);

/// j-th contribution of the conservative divergence, at interior cells.
Field divergence_part(const MacGrid& g, int j, const Field& uj);
Field divergence(const MacGrid& g, const VectorField& u);

/// i-th gradient component at the interior i-faces.
Field grad_component(const MacGrid& g, int i, const Field& p);
VectorField grad(const MacGrid& g, const Field& p);

/// D_ij u_j: i-direction outer derivative of the j-th divergence part.
Field grad_div_term(const MacGrid& g, int i, int j, const Field& uj);

/// Curvature terms of the vector Laplacian for component c that involve
/// only u_c itself (r: -2u/r^2 + 2/r^3 d_r(r^2 u); theta: -u/(r^2 sin^2)
/// + 2cos/(r^2 sin^2) d_theta(sin u); phi: -u/(r^2 sin^2)).
Field own_extras(const MacGrid& g, int c, const Field& uc);
/// Coupling terms of the (divergence-substituted) vector Laplacian for
/// component c involving the other components (zero for c = r).
Field cross_extras(const MacGrid& g, int c, const VectorField& u);
/// own + cross; (vector Laplacian)_c = apply_laplacian(u_c) + extras.
Field vector_laplacian_extras(const MacGrid& g, int c, const VectorField& u);

enum class WeightKind { Omega, Omega1, Omega2 };
double weight_value(const MacGrid& g, WeightKind w, double r, double theta);

/// Mid-point quadrature sum f g w dV_r dV_theta dV_phi over interior nodes.
double weighted_product(const MacGrid& g, const Field& f, const Field& h, WeightKind w);
double weighted_norm(const MacGrid& g, const Field& f, WeightKind w);

}  // namespace yy
