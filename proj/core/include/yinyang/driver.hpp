#pragma once
/// Experiment drivers behind the yyshell subcommands: single runs,
/// temporal/spatial convergence studies, the Landau study and the heat
/// stability study.

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "yinyang/config.hpp"
#include "yinyang/error.hpp"
#include "yinyang/coupling.hpp"
#include "yinyang/verify.hpp"

namespace yy {

class WorkerPool;

/// Conductive shell (T = 1 at R1, 0 at R2, fluid at rest): the "custom"
/// convection setup. No exact solution.
class ConductiveShell : public FlowProblem {
 public:
  ConductiveShell(double r1, double r2) : r1_(r1), r2_(r2) {}
  std::string name() const override { return "custom"; }
  bool has_exact() const override { return false; }
  Vec3 velocity(double, const Vec3&) const override { return {0.0, 0.0, 0.0}; }
  double pressure(double, const Vec3&) const override { return 0.0; }
  double temperature(double, const Vec3& x) const override;

 private:
  double r1_, r2_;
};

std::unique_ptr<FlowProblem> make_problem(const RunConfig& c);
PhysicsConfig make_physics(const RunConfig& c, const FlowProblem& problem);
GravityFn make_gravity(const std::string& name);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};
void write_csv(std::ostream& out, const Table& t);

struct RunOutput {
  Table table;
  long steps = 0;
  int nonconverged = 0;  // steps that hit max_iters
  std::vector<int> iterations;
  bool has_errors = false;
  ErrorReport final_errors;
  GlobalState state;
};

/// CSV column set of a problem kind.
std::vector<std::string> run_columns(ProblemKind p);

/// t = 0 .. t_final with schwarz_time_step; field dumps per dump_every.
RunOutput run_simulation(const RunConfig& c, WorkerPool* pool = nullptr, std::ostream* log = nullptr);

/// Initial state of a run (exact data, or zero/random for heat-only/custom).
GlobalState initial_state(const RunConfig& c, const YinYangDomain& dom, const FlowProblem& pb);

/// omega-weighted l2 differences of two states on the same domain
/// (pressures compared up to their means when remove_mean).
ErrorReport state_difference(const YinYangDomain& dom, const GlobalState& a, const GlobalState& b,
                             bool remove_mean);

enum class StudyKind { Time, Space };

struct StudyLevel {
  double x = 0;  // tau or max cell diameter
  bool ok = false;
  std::string failure;
  ErrorReport errors;
  int max_iterations = 0;
  int nonconverged = 0;
};

struct StudyResult {
  std::string abscissa;
  std::vector<StudyLevel> levels;
  std::array<double, kQuantityCount> slopes{};
  bool complete = false;  // every level succeeded and slopes were fitted
  Table table() const;
};

struct StudyOptions {
  int levels = 3;
  /// Time studies: measure errors against a run with tau_finest / 4 instead of
  /// the exact solution (removes the fixed spatial error).
  bool reference = false;
};

/// Halves tau (Time) or doubles every cell count (Space) per level,
/// starting from the base config.
StudyResult convergence_study(StudyKind kind, const RunConfig& base, const StudyOptions& opt,
                              WorkerPool* pool = nullptr, std::ostream* log = nullptr);

struct OverlapPoint {
  double epsilon = 0;
  bool ok = false;
  std::string failure;
  ErrorReport errors;
};

/// Final-time errors of one fixed-grid run per epsilon.
std::vector<OverlapPoint> overlap_study(const RunConfig& base, const std::vector<double>& epsilons,
                                        WorkerPool* pool = nullptr, std::ostream* log = nullptr);

struct StabilityRun {
  double tau = 0;
  int steps = 0;
  double initial_max = 0;
  double max_norm = 0;        // over all steps
  bool finite = true;
  bool energy_monotone = true;  // E^{n+1} <= E^n (1 + rel_tol) for n >= 1
  double worst_energy_growth = 0;  // max relative increase after the first step
  std::vector<double> energy;      // E^0 .. E^steps
};

/// Homogeneous Dirichlet heat problem on one Yin chart from random data.
std::vector<StabilityRun> stability_study(const ShellExtents& ext, const GridSpec& grid, const std::vector<double>& taus,
                                          int steps, std::uint64_t seed, double rel_tol = 1e-10,
                                          WorkerPool* pool = nullptr);

/// Exit-code mapping: 2 validation, 3 solver failure.
int exit_code_for(const Error& e);

}  // namespace yy
