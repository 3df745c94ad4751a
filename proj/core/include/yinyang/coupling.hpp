#pragma once
/// Yin-Yang Schwarz iteration: Lagrange boundary exchange between the two
/// charts, the optional mass-flux correction and the per-step driver.

#include <array>
#include <cstddef>
#include <vector>

#include "yinyang/heat.hpp"
#include "yinyang/momentum.hpp"
#include "yinyang/problem.hpp"

namespace yy {

class WorkerPool;

/// k-point-per-direction Lagrange stencil on a donor chart.
struct InterpolationStencil {
  std::size_t target = 0;  // flat index in the target field
  Chart donor = Chart::Yang;
  int k = 3;
  std::array<int, 3> start{};                       // first donor node per direction
  std::array<std::array<double, 4>, 3> w{};         // weights per direction
  double apply(const Field& donor) const;
};

/// Target component c = ca * donor(ma) + cb * donor(mb); u_r passes through.
struct VectorStencil {
  std::size_t target = 0;
  int ma = 0, mb = 0;
  double ca = 1, cb = 0;
  InterpolationStencil sa, sb;
};

struct ExchangeMap {
  Chart target = Chart::Yin;
  int order = 3;
  std::vector<InterpolationStencil> scalar;            // T: theta/phi boundary layer
  std::vector<InterpolationStencil> pressure_ring;     // p: first interior ring
  std::array<std::vector<VectorStencil>, 3> velocity;  // per target component
};

/// Lagrange weights for the nodes x[start .. start+k-1] at position t.
std::array<double, 4> lagrange_weights(const std::vector<double>& x, int start, int k, double t);

/// Maps indexed by target chart. Throws OverlapTooSmall (with a suggested
/// epsilon) when a boundary unknown cannot be served by interior donor data.
std::array<ExchangeMap, 2> build_exchange_maps(const YinYangDomain& dom, int order = 3);

void exchange_scalar(const ExchangeMap& m, const Field& donor, Field& target);
void exchange_velocity(const ExchangeMap& m, const VectorField& donor, VectorField& target);
void exchange_pressure(const ExchangeMap& m, const Field& donor, Field& target);

// ---------------------------------------------------------------- flux fix

/// Net outward flux of u through the chart's theta/phi boundary and walls.
struct BoundaryFlux {
  double lateral = 0;  // theta/phi boundary faces
  double walls = 0;    // r = R1, R2
  double area = 0;     // total boundary area
  double total() const { return lateral + walls; }
};
BoundaryFlux boundary_flux(const MacGrid& g, const VectorField& u);

struct FluxFixReport {
  bool applied = false;
  int iterations = 0;
  double J = 0;
  double flux_before = 0, flux_after = 0;
};

/// Minimises J(v) = 1/2 |v - u_bd|^2 + 1/(2 eps |dOmega|^2) (flux_lateral(v) + flux_walls)^2
/// over the lateral normal boundary values (area-weighted l2) by
/// preconditioned CG; u's lateral normal components are overwritten.
FluxFixReport flux_fix(const MacGrid& g, VectorField& u, double tol, double penalty = 1e-6, int max_iters = 200);

// ---------------------------------------------------------------- Schwarz

struct ChartState {
  ThermalState thermal;
  FlowState flow;
};

struct GlobalState {
  std::array<ChartState, 2> charts;
  double t = 0;
  double tau = 0;
  long steps = 0;
  int last_iterations = 0;
  std::array<double, 5> residuals{};  // u1, p1, u2, p2, T
};

enum class SchwarzMode { Additive, Multiplicative };

struct SchwarzConfig {
  SchwarzMode mode = SchwarzMode::Multiplicative;
  double tol = 1e-6;
  int max_iters = 100;
  bool flux_fix = false;
  bool error_reduction = true;
  int interp_order = 3;
  bool pressure_exchange = true;  // Step 7
  double flux_penalty = 1e-6;
  void validate() const;
};

struct PhysicsConfig {
  ACParams ac;
  double kappa = 1.0;
  const FlowProblem* problem = nullptr;  // wall data, forcing, sources
  bool solve_heat = true;
  bool solve_flow = true;
  std::array<Dir, 3> heat_order{Dir::R, Dir::Theta, Dir::Phi};
  void validate() const;
};

struct StepReport {
  int iterations = 0;
  bool converged = false;
  std::array<double, 5> residuals{};
};

/// Both charts at t with levels n and n-1 taken from the problem's fields.
GlobalState initialize_state(const YinYangDomain& dom, const FlowProblem& problem, double tau, double t0 = 0.0);

/// One time step of Algorithm-1 style Schwarz iteration. The state is
/// advanced in place even when max_iters is reached (report.converged false).
StepReport schwarz_time_step(const YinYangDomain& dom, const std::array<ExchangeMap, 2>& maps, GlobalState& s,
                             const PhysicsConfig& phys, const SchwarzConfig& cfg, WorkerPool* pool = nullptr);

}  // namespace yy
