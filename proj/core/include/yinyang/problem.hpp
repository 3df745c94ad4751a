#pragma once
/// Data a run needs from its problem: Dirichlet data on the walls (and for
/// initial fields), body forces and heat sources, all in Cartesian form.

#include <string>

#include "yinyang/geometry.hpp"

namespace yy {

class FlowProblem {
 public:
  virtual ~FlowProblem() = default;
  virtual std::string name() const = 0;
  /// True when velocity/pressure/temperature are exact solutions.
  virtual bool has_exact() const { return true; }
  virtual bool has_flow() const { return true; }
  virtual bool has_heat() const { return true; }
  virtual Vec3 velocity(double t, const Vec3& x) const = 0;
  virtual double pressure(double t, const Vec3& x) const = 0;
  virtual double temperature(double t, const Vec3& x) const = 0;
  virtual Vec3 momentum_forcing(double, const Vec3&) const { return {0.0, 0.0, 0.0}; }
  virtual double heat_source(double, const Vec3&) const { return 0.0; }
};

}  // namespace yy
