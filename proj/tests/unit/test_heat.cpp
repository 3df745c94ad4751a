#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "yinyang/driver.hpp"
#include "yinyang/heat.hpp"
#include "yinyang/operators.hpp"

using namespace yy;

namespace {

double exact_T(double t, const Vec3& x) { return 2 * std::cos(t) * x[0] * x[0] * x[1] * x[2]; }
double source_T(double t, const Vec3& x) {
  return -2 * std::sin(t) * x[0] * x[0] * x[1] * x[2] - 4 * std::cos(t) * x[1] * x[2];
}

ThermalState exact_state(const MacGrid& g, double tau) {
  ThermalState s;
  s.T_n = make_scalar(g);
  s.T_nm1 = make_scalar(g);
  sample(g, s.T_n, [](const Vec3& x) { return exact_T(0, x); });
  sample(g, s.T_nm1, [tau](const Vec3& x) { return exact_T(-tau, x); });
  s.tau = tau;
  return s;
}

HeatConfig manufactured_config() {
  HeatConfig c;
  c.boundary = exact_T;
  c.source = source_T;
  return c;
}

Field run_to(const MacGrid& g, double tau, double tf) {
  ThermalState s = exact_state(g, tau);
  const HeatConfig c = manufactured_config();
  const int n = static_cast<int>(std::lround(tf / tau));
  for (int q = 0; q < n; ++q) s = douglas_step(g, s, c);
  return s.T_n;
}

}  // namespace

TEST_CASE("heat right-hand side") {
  const MacGrid g = build_domain({1, 2, 0.1}, {4, 12, 24, {}}).yin;
  ThermalState s;
  s.T_n = make_scalar(g);
  s.T_nm1 = make_scalar(g);
  s.tau = 0.1;
  HeatConfig c;
  CHECK(max_abs(heat_rhs(g, s, c, nullptr)) == 0.0);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  for (std::size_t q = 0; q < s.T_n.size(); ++q) s.T_n[q] = u(rng), s.T_nm1[q] = u(rng);
  const VectorField zero = make_vector(g);
  const Field a = heat_rhs(g, s, c, nullptr);
  const Field b = heat_rhs(g, s, c, &zero);
  CHECK(max_abs_diff(a, b) == 0.0);

  s.tau = -1;
  CHECK_THROWS_AS(heat_rhs(g, s, c, nullptr), Error);
}

TEST_CASE("zero data stays zero") {
  const MacGrid g = build_domain({1, 2, 0.1}, {4, 12, 24, {}}).yang;
  ThermalState s;
  s.T_n = make_scalar(g);
  s.T_nm1 = make_scalar(g);
  s.tau = 0.5;
  HeatConfig c;
  c.boundary = [](double, const Vec3&) { return 0.0; };
  for (int n = 0; n < 20; ++n) s = douglas_step(g, s, c);
  CHECK(max_abs(s.T_n) == 0.0);
  CHECK(discrete_energy(g, s) == 0.0);
  HeatConfig nob;
  CHECK_THROWS_AS(douglas_step(g, s, nob), Error);
}

TEST_CASE("one-step consistency: T1 - T0 = tau Lap T0 + O(tau^2)") {
  const MacGrid g = build_domain({1, 2, 0.1}, {6, 18, 36, {}}).yin;
  auto f = [](const Vec3& x) { return std::sin(x[0]) * std::cos(x[1] + 0.5 * x[2]); };
  HeatConfig c;
  c.boundary = [&](double, const Vec3& x) { return f(x); };
  std::vector<double> taus, errs;
  for (double tau : {2e-4, 1e-4, 5e-5}) {
    ThermalState s;
    s.T_n = make_scalar(g);
    sample(g, s.T_n, f);
    s.T_nm1 = s.T_n;
    s.tau = tau;
    const ThermalState n1 = douglas_step(g, s, c);
    Field d = n1.T_n - s.T_n;
    d.axpy(-tau, apply_laplacian(g, s.T_n, false));
    taus.push_back(tau);
    errs.push_back(max_abs_interior(d));
  }
  CHECK(oracle::loglog_slope(taus, errs) >= 1.9);
}

TEST_CASE("temporal self-convergence on the manufactured temperature") {
  const MacGrid g = build_domain({1, 2, 0.1}, {12, 36, 72, {}}).yin;
  const double tf = 0.4;
  const Field ref = run_to(g, 0.003125, tf);
  std::vector<double> taus{0.1, 0.05, 0.025}, errs;
  for (double tau : taus) errs.push_back(weighted_norm(g, run_to(g, tau, tf) - ref, WeightKind::Omega));
  MESSAGE("errors " << errs[0] << " " << errs[1] << " " << errs[2]);
  CHECK(oracle::loglog_slope(taus, errs) >= 1.8);
}

TEST_CASE("discrete energy does not grow") {
  const auto runs = stability_study({1, 2, 0.1}, {8, 24, 48, {}}, {10.0}, 200, 42);
  REQUIRE(runs.size() == 1);
  const auto& r = runs[0];
  CHECK(r.finite);
  CHECK(r.energy.front() > 0);
  const double e1 = r.energy[1];
  for (std::size_t n = 2; n < r.energy.size(); ++n) CHECK(r.energy[n] <= r.energy[n - 1] + 1e-10 * e1);
  CHECK(r.max_norm <= 10 * r.initial_max);
}
