#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "yinyang/error.hpp"
#include "yinyang/momentum.hpp"
#include "yinyang/operators.hpp"
#include "yinyang/verify.hpp"

using namespace yy;

namespace {

VectorField sampled(const MacGrid& g, const VectorFn& fn) {
  VectorField u = make_vector(g);
  sample(g, u, fn);
  return u;
}

FlowState manufactured_state(const MacGrid& g, const ManufacturedSolution& m, double tau) {
  FlowState s;
  s.u1_n = s.u2_n = sampled(g, [&](const Vec3& x) { return m.velocity(0, x); });
  s.u1_nm1 = s.u2_nm1 = sampled(g, [&](const Vec3& x) { return m.velocity(-tau, x); });
  s.p1_n = make_scalar(g);
  sample(g, s.p1_n, [&](const Vec3& x) { return m.pressure(0, x); });
  s.p2_n = s.p1_n;
  s.tau = tau;
  return s;
}

FlowState step(const MacGrid& g, const ManufacturedSolution& m, const ACParams& ac, const FlowState& s) {
  Field Ts = make_scalar(g);
  sample(g, Ts, [&](const Vec3& x) { return m.temperature(s.t + 0.5 * s.tau, x); });
  return ns_time_step(
      g, s, ac, Ts, [&](double t, const Vec3& x) { return m.velocity(t, x); },
      [&](double t, const Vec3& x) { return m.momentum_forcing(t, x); });
}

double vnorm(const MacGrid& g, const VectorField& a, const VectorField& b) {
  double q = 0;
  for (int c = 0; c < 3; ++c) q += std::pow(weighted_norm(g, a[c] - b[c], WeightKind::Omega), 2);
  return std::sqrt(q);
}

}  // namespace

TEST_CASE("extrapolation to the half step") {
  const MacGrid g = build_domain({1, 2, 0.1}, {4, 12, 24, {}}).yin;
  const Field c = make_scalar(g, 2.5);
  CHECK(max_abs_diff(extrapolate_half(c, c), c) == 0.0);
  const Field a = make_scalar(g, 3.0), b = make_scalar(g, 1.0);
  CHECK(max_abs_diff(extrapolate_half(a, b), make_scalar(g, 4.0)) == 0.0);
  const VectorField u = make_vector(g, 1.0), w = make_vector(g, 3.0);
  const VectorField m = average(u, w);
  for (int q = 0; q < 3; ++q) CHECK(max_abs_diff(m[q], make_field(g, component_layout(q), 2.0)) == 0.0);
}

TEST_CASE("zero state stays zero") {
  const MacGrid g = build_domain({1, 2, 0.1}, {4, 12, 24, {}}).yin;
  FlowState s;
  s.u1_n = s.u1_nm1 = s.u2_n = s.u2_nm1 = make_vector(g);
  s.p1_n = s.p2_n = make_scalar(g);
  s.tau = 0.1;
  const ACParams ac;
  const Field T = make_scalar(g);
  auto zero = [](double, const Vec3&) { return Vec3{0, 0, 0}; };
  for (int n = 0; n < 5; ++n) s = ns_time_step(g, s, ac, T, zero, zero);
  for (int c = 0; c < 3; ++c) {
    CHECK(max_abs(s.u1_n[c]) == 0.0);
    CHECK(max_abs(s.u2_n[c]) == 0.0);
  }
  CHECK(max_abs(s.p1_n) == 0.0);
  CHECK(max_abs(s.p2_n) == 0.0);
}

TEST_CASE("pressure update leaves p unchanged for solenoidal velocity") {
  const MacGrid g = build_domain({1, 2, 0.1}, {4, 12, 24, {}}).yin;
  const VectorField rot = sampled(g, [](const Vec3& x) { return Vec3{-x[1], x[0], 0.0}; });
  Field p = make_scalar(g);
  sample(g, p, [](const Vec3& x) { return x[0] - x[2]; });
  const ACParams ac;
  CHECK(max_abs_diff(pressure_update(g, ac, p, rot, rot), p) <= 1e-12);
  CHECK(max_abs_diff(pressure_update(g, ac, p, rot, rot, &p, &p), p) <= 1e-12);
}

TEST_CASE("sequencing is enforced") {
  const MacGrid g = build_domain({1, 2, 0.1}, {4, 12, 24, {}}).yin;
  const ManufacturedSolution m;
  const FlowState s = manufactured_state(g, m, 0.1);
  const Field T = make_scalar(g);
  MomentumStep M(g, ACParams{}, s, T, nullptr);
  M.begin_pass();
  VectorField u = s.u1_n;
  try {
    M.solve_component(1, 2, u, u[2], false);
    FAIL("expected a sequencing error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Sequencing);
  }
  CHECK_THROWS_AS(M.pressure_update(2, u), Error);
}

TEST_CASE("pressure-update identity holds every step") {
  const MacGrid g = build_domain({1, 2, 0.1}, {4, 12, 24, {}}).yang;
  const ManufacturedSolution m;
  ACParams ac;
  ac.chi = 2.0;
  FlowState s = manufactured_state(g, m, 0.05);
  for (int n = 0; n < 10; ++n) {
    const FlowState next = step(g, m, ac, s);
    Field r1 = next.p1_n - s.p1_n;
    r1 *= ac.chi;
    r1 += divergence(g, average(next.u1_n, s.u1_n));
    Field r2 = (next.p2_n - s.p2_n) - (next.p1_n - s.p1_n);
    r2 *= ac.chi;
    r2 += divergence(g, average(next.u2_n, s.u2_n));
    const double scale = std::max({1.0, max_abs(next.p1_n), max_abs(next.p2_n)});
    CHECK(max_abs_interior(r1) <= 1e-13 * scale * ac.chi);
    CHECK(max_abs_interior(r2) <= 1e-13 * scale * ac.chi);
    s = next;
  }
}

TEST_CASE("single-chart temporal orders: system 1 first, system 2 second") {
  const MacGrid g = build_domain({1, 2, 0.1}, {4, 12, 24, {}}).yin;
  const ManufacturedSolution m;
  const ACParams ac;
  auto run = [&](double tau) {
    FlowState s = manufactured_state(g, m, tau);
    const int n = static_cast<int>(std::lround(1.0 / tau));
    for (int q = 0; q < n; ++q) s = step(g, m, ac, s);
    return s;
  };
  const FlowState ref = run(0.1 / 32);
  std::vector<double> taus{0.05, 0.025, 0.0125}, e1, e2;
  for (double tau : taus) {
    const FlowState s = run(tau);
    e1.push_back(vnorm(g, s.u1_n, ref.u1_n));
    e2.push_back(vnorm(g, s.u2_n, ref.u2_n));
  }
  const double s1 = oracle::loglog_slope(taus, e1), s2 = oracle::loglog_slope(taus, e2);
  MESSAGE("u1 slope " << s1 << ", u2 slope " << s2);
  CHECK(s1 >= 0.8);
  CHECK(s1 <= 1.2);
  CHECK(s2 >= 1.8);
}
