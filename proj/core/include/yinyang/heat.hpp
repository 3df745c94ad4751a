#pragma once
/// Douglas direction-split stepper for the heat and advection-diffusion
/// equations and the discrete energy of the stability estimate.

#include <array>
#include <functional>

#include "yinyang/field.hpp"
#include "yinyang/stencil.hpp"

namespace yy {

class WorkerPool;

/// Time-dependent scalar data at a Cartesian point.
using ScalarSource = std::function<double(double t, const Vec3& x)>;

struct ThermalState {
  Field T_n, T_nm1;  // boundary layers hold the Dirichlet data of their level
  double t = 0;
  double tau = 0;
  void validate() const;
};

struct HeatConfig {
  double kappa = 1.0;
  ScalarSource boundary;  // Dirichlet data; required by douglas_step
  ScalarSource source;    // optional volume source
  std::array<Dir, 3> order{Dir::R, Dir::Theta, Dir::Phi};
  void validate() const;
};

/// Factors kappa*Delta_rr - a_r d_r, kappa*hat(Delta)_tt - a_t d_t / r,
/// kappa*hat(Delta)_pp - a_p d_p / (r sin theta). a may be null.
FactorSet assemble_heat_factors(const MacGrid& g, double tau, double kappa, const VectorField* a,
                                const std::array<Dir, 3>& order);

/// kappa*Delta T* - kappa/2 hat(Delta) dT^n - a . grad T^n + s(t + tau/2),
/// with T* = (3T^n - T^{n-1})/2 and dT^n = T^n - T^{n-1}; interior nodes.
Field heat_rhs(const MacGrid& g, const ThermalState& s, const HeatConfig& cfg, const VectorField* u_half);

/// One factored step (r, then theta, then phi sweeps by default).
ThermalState douglas_step(const MacGrid& g, const ThermalState& s, const HeatConfig& cfg,
                          const VectorField* u_half = nullptr, WorkerPool* pool = nullptr);

/// Discrete gradient energy sum over node links: (-Delta_h T, T)_omega for
/// T vanishing on the boundary.
double gradient_energy(const MacGrid& g, const Field& T);
/// (||d_theta D||^2_omega1, ||d_phi D||^2_omega2) in the same link form.
std::array<double, 2> hat_defect_energy(const MacGrid& g, const Field& D);

/// 1/2 ||grad T^n||^2_omega + 1/4 (||d_theta dT||^2_omega1 + ||d_phi dT||^2_omega2).
double discrete_energy(const MacGrid& g, const ThermalState& s);

}  // namespace yy
