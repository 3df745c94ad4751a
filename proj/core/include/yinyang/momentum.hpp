#pragma once
/// Artificial-compressibility Navier-Stokes stepper with direction-split
/// component solves and the bootstrapped second-order system.
///
/// System s (1 or 2) advances (u_s, p_s); both use the advecting velocity
/// a = u2^{*,n+1/2}, so the factor matrices are assembled once per step.

#include <array>
#include <functional>
#include <optional>

#include "yinyang/field.hpp"
#include "yinyang/stencil.hpp"

namespace yy {

class WorkerPool;

using VectorSource = std::function<Vec3(double t, const Vec3& x)>;  // Cartesian components
using GravityFn = std::function<Vec3(const Vec3& x)>;

/// -x/|x|: radially inward gravity.
Vec3 radial_inward_gravity(const Vec3& x);

enum class CorrectionForm {
  Consistent,  // -1/2 hat(L) du^n, the heat-scheme pattern
  Literal,     // + hat(Delta) u^{n-1/2} as printed
};

struct ACParams {
  double chi = 1.0;
  double nu = 1.0;  // Pr in the Boussinesq form, 1/Re in the Navier-Stokes form
  double Ra = 1.0;
  double Pr = 1.0;
  GravityFn gravity = radial_inward_gravity;
  CorrectionForm correction = CorrectionForm::Consistent;
  /// Factor order per component equation, leftmost solved first.
  std::array<std::array<Dir, 3>, 3> factor_order{{{Dir::Theta, Dir::Phi, Dir::R},
                                                  {Dir::Phi, Dir::R, Dir::Theta},
                                                  {Dir::R, Dir::Theta, Dir::Phi}}};
  /// Gauss-Seidel order of the component solves.
  std::array<int, 3> component_order{0, 1, 2};
  void validate() const;
};

struct FlowState {
  VectorField u1_n, u1_nm1, u2_n, u2_nm1;
  Field p1_n, p2_n;
  double t = 0;
  double tau = 0;
  const VectorField& u_n(int sys) const { return sys == 1 ? u1_n : u2_n; }
  const VectorField& u_nm1(int sys) const { return sys == 1 ? u1_nm1 : u2_nm1; }
  const Field& p_n(int sys) const { return sys == 1 ? p1_n : p2_n; }
  void validate() const;
};

Field extrapolate_half(const Field& w_n, const Field& w_nm1);
VectorField extrapolate_half(const VectorField& w_n, const VectorField& w_nm1);
VectorField average(const VectorField& a, const VectorField& b);

/// Everything that stays fixed during one time step on one chart: advection
/// coefficients, factor matrices and the explicit right-hand-side parts.
class MomentumStep {
 public:
  MomentumStep(const MacGrid& g, const ACParams& p, const FlowState& s, const Field& T_star,
               const VectorSource& forcing, WorkerPool* pool = nullptr);

  /// Starts a new Gauss-Seidel pass (resets the sequencing check).
  void begin_pass();

  /// Solves component c of system sys. u_iter is the current iterate of
  /// u_sys^{n+1}; its boundary layer must already hold the new boundary data.
  /// prev_c is the previous iterate of that component (with the boundary it
  /// was computed with). Only the interior of u_iter[c] is written.
  void solve_component(int sys, int c, VectorField& u_iter, const Field& prev_c, bool error_reduction);

  /// Explicit right-hand side of component c for the given iterate.
  Field rhs(int sys, int c, const VectorField& u_iter) const;

  /// p_s^{n+1} from the current velocity iterate (interior cells).
  Field pressure_update(int sys, const VectorField& u_iter, const Field* p1_new = nullptr) const;

  const FactorSet& factors(int c) const { return F_[c]; }
  const ACParams& params() const { return p_; }

 private:
  Field cross_terms(int sys, int c, const VectorField& u_iter) const;

  const MacGrid& g_;
  ACParams p_;
  const FlowState& s_;
  WorkerPool* pool_;
  std::array<FactorSet, 3> F_;
  std::array<std::array<Field, 3>, 2> fixed_;  // [sys-1][c]
  std::array<VectorField, 2> ustar_;
  std::array<std::array<bool, 3>, 2> solved_{};
};

/// Explicit stand-alone pressure update (p1 when sys = 1; p2 needs p1 levels).
Field pressure_update(const MacGrid& g, const ACParams& p, const Field& p_n, const VectorField& u_n,
                      const VectorField& u_new, const Field* p1_n = nullptr, const Field* p1_new = nullptr);

/// One single-chart step with Dirichlet data on every boundary node.
FlowState ns_time_step(const MacGrid& g, const FlowState& s, const ACParams& p, const Field& T_star,
                       const VectorSource& boundary, const VectorSource& forcing, WorkerPool* pool = nullptr);

}  // namespace yy
