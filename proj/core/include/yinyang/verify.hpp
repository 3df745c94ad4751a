#pragma once
/// Exact solutions, forcing, error norms and convergence-slope fitting.

#include <array>
#include <string>
#include <vector>

#include "yinyang/momentum.hpp"
#include "yinyang/problem.hpp"

namespace yy {

struct GlobalState;

struct PhysicalParams {
  double nu = 1.0;
  double Ra = 1.0;
  double Pr = 1.0;
  double kappa = 1.0;
  GravityFn gravity = radial_inward_gravity;
};

/// u = cos t (2x^2yz, -xy^2z, -xyz^2), p = cos t xyz, T = 2 cos t x^2yz.
class ManufacturedSolution : public FlowProblem {
 public:
  explicit ManufacturedSolution(PhysicalParams p = {}) : p_(std::move(p)) {}
  std::string name() const override { return "manufactured"; }
  Vec3 velocity(double t, const Vec3& x) const override;
  double pressure(double t, const Vec3& x) const override;
  double temperature(double t, const Vec3& x) const override;
  /// du/dt + (u.grad)u + grad p - nu Lap u - Pr Ra T g
  Vec3 momentum_forcing(double t, const Vec3& x) const override;
  /// dT/dt + u.grad T - kappa Lap T
  double heat_source(double t, const Vec3& x) const override;
  const PhysicalParams& params() const { return p_; }

 private:
  PhysicalParams p_;
};

/// Spherical components (u_r, u_theta, u_phi), p, T of the manufactured
/// solution at a node of the given chart.
struct PointValues {
  Vec3 u{};
  double p = 0, T = 0;
};
PointValues manufactured_eval(const ManufacturedSolution& m, double t, Chart chart, const Spherical& pt);

/// Landau's round jet: a steady axisymmetric Navier-Stokes solution about the
/// Cartesian z axis. With viscosity nu = 1/Re and shape parameter a > 1
/// (a -> 1 is the singular strong-jet limit):
///   u_r = (2nu/r) ((a^2-1)/(a - cos t)^2 - 1)
///   u_t = -2nu sin t / (r (a - cos t))
///   p   = 4 nu^2 (a cos t - 1) / (r^2 (a - cos t)^2)
/// so the velocity scales like 1/Re at fixed a.
class LandauSolution : public FlowProblem {
 public:
  LandauSolution(double reynolds, double a = 2.0);
  std::string name() const override { return "landau"; }
  bool has_heat() const override { return false; }
  Vec3 velocity(double t, const Vec3& x) const override;
  double pressure(double t, const Vec3& x) const override;
  double temperature(double, const Vec3&) const override { return 0.0; }
  double nu() const { return nu_; }
  double a() const { return a_; }
  /// Axis-frame components (u_r, u_theta_axis, u_phi = 0) and pressure.
  PointValues axis_frame(double r, double theta_axis) const;

 private:
  double nu_, a_;
};
PointValues landau_eval(const LandauSolution& l, Chart chart, const Spherical& pt);

/// Zero data everywhere (temperature-only runs start from user data).
class HeatOnlyProblem : public FlowProblem {
 public:
  std::string name() const override { return "heat_only"; }
  bool has_flow() const override { return false; }
  Vec3 velocity(double, const Vec3&) const override { return {0.0, 0.0, 0.0}; }
  double pressure(double, const Vec3&) const override { return 0.0; }
  double temperature(double, const Vec3&) const override { return 0.0; }
};

enum Quantity : int { kU1 = 0, kP1, kU2, kP2, kT, kQuantityCount };
const char* quantity_name(int q);

struct ErrorReport {
  double t = 0;
  // [quantity][0 = yin, 1 = yang, 2 = combined (both charts' quadrature)]
  std::array<std::array<double, 3>, kQuantityCount> e{};
  double combined(int q) const { return e[q][2]; }
};

struct ErrorOptions {
  bool remove_pressure_mean = false;  // compare pressures up to a constant
};

ErrorReport error_norms(const YinYangDomain& dom, const GlobalState& s, const FlowProblem& exact, double t,
                        const ErrorOptions& opt = {});
/// l2 (mid-point, omega-weighted) error of one chart field against fn.
double field_error(const MacGrid& g, const Field& f, const PointFn& fn, double shift = 0.0);
double vector_error(const MacGrid& g, const VectorField& u, const VectorFn& fn);

struct ConvergenceTable {
  std::string abscissa;  // "tau" or "h"
  std::vector<double> x;
  std::vector<ErrorReport> rows;
};

/// Least-squares slope of log(y) against log(x); needs >= 2 positive points.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);
/// Per-quantity slopes of the combined errors; NaN where a quantity is zero.
std::array<double, kQuantityCount> convergence_slope(const ConvergenceTable& table);

}  // namespace yy
