#pragma once
/// Run configuration: a flat "key = value" file plus command-line overrides.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "yinyang/coupling.hpp"
#include "yinyang/geometry.hpp"

namespace yy {

enum class ProblemKind { Manufactured, Landau, HeatOnly, Custom };
const char* problem_name(ProblemKind p);

struct RunConfig {
  ShellExtents extents{1.0, 2.0, 0.1};
  GridSpec grid{6, 18, 36, {}};
  // physics
  double Ra = 1.0, Pr = 1.0;
  double nu = 0;  // 0: derived from Re if given, else nu = Pr
  double Re = 0;
  double chi = 1.0;
  double kappa = 1.0;
  std::string gravity = "radial_in";  // radial_in | radial_out | none
  std::string correction = "consistent";
  double landau_a = 2.0;
  // time
  double dt = 1e-2;
  double t_final = 0.1;
  // schwarz
  SchwarzConfig schwarz;
  ProblemKind problem = ProblemKind::Manufactured;
  // heat_only / custom initial data
  std::string initial = "zero";  // zero | random | exact
  double amplitude = 1.0;
  std::uint64_t seed = 1;
  // output
  std::string csv;        // empty: stdout
  int dump_every = 0;     // 0: no field dumps
  std::string dump_path = "dump";
  bool vtk = false;
  int threads = 0;  // 0: machine parallelism
  // studies
  int levels = 3;
  bool remove_pressure_mean = true;  // pressure errors up to a constant

  /// Effective viscosity nu (1/Re, nu, or Pr).
  double viscosity() const;
  /// Throws Config errors naming the offending key.
  void validate() const;
};

/// Applies one "key=value" assignment; unknown keys and bad values throw.
void apply_setting(RunConfig& c, const std::string& key, const std::string& value);
/// Reads a config file ('#' starts a comment, blank lines ignored).
RunConfig load_config(const std::string& path, RunConfig base = {});
RunConfig parse_config(const std::string& text, RunConfig base = {});
/// "key=value" override from the command line.
void apply_override(RunConfig& c, const std::string& assignment);
/// Canonical key = value dump (round-trips through parse_config).
std::string format_config(const RunConfig& c);
std::vector<std::string> config_keys();

}  // namespace yy
