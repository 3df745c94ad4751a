#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "yinyang/coupling.hpp"
#include "yinyang/driver.hpp"
#include "yinyang/error.hpp"
#include "yinyang/operators.hpp"
#include "yinyang/parallel.hpp"

using namespace yy;

namespace {

Spherical node_of(const MacGrid& g, const Field& f, std::size_t n) {
  const auto& d = f.dims();
  const int k = static_cast<int>(n % d[2]);
  const int j = static_cast<int>((n / d[2]) % d[1]);
  const int i = static_cast<int>(n / (static_cast<std::size_t>(d[1]) * d[2]));
  return g.node(f.layout(), i, j, k);
}

// sin(theta) cos(phi) in Yin coordinates
double smooth(const Vec3& x) { return x[0] / std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]); }

std::array<Field, 2> sampled_scalar(const YinYangDomain& dom) {
  std::array<Field, 2> f{make_scalar(dom.yin), make_scalar(dom.yang)};
  for (int c = 0; c < 2; ++c) sample(dom.grid(Chart(c)), f[c], smooth);
  return f;
}

// max error of the exchanged scalar over the target chart's exchanged nodes
double scalar_exchange_error(int m, int order) {
  const auto dom = build_domain({1, 2, 0.1}, {6 * m, 18 * m, 36 * m, {}});
  const auto maps = build_exchange_maps(dom, order);
  auto f = sampled_scalar(dom);
  double e = 0;
  for (int t = 0; t < 2; ++t) {
    Field target = f[t];
    target.fill_boundary(0.0);
    exchange_scalar(maps[t], f[1 - t], target);
    for (const auto& st : maps[t].scalar)
      e = std::max(e, std::abs(target[st.target] - f[t][st.target]));
  }
  return e;
}

}  // namespace

TEST_CASE("Lagrange weights reproduce polynomials") {
  const std::vector<double> x{0.0, 0.3, 0.7, 1.2, 1.5};
  for (int k = 2; k <= 4; ++k)
    for (double t : {0.31, 0.9, 1.1}) {
      const auto w = lagrange_weights(x, 1, k, t);
      for (int p = 0; p < k; ++p) {
        double v = 0;
        for (int a = 0; a < k; ++a) v += w[a] * std::pow(x[1 + a], p);
        CHECK(v == doctest::Approx(std::pow(t, p)).epsilon(1e-13));
      }
    }
}

TEST_CASE("every lateral boundary unknown is served") {
  const auto dom = build_domain({1, 2, 0.1}, {6, 18, 36, {}});
  const auto maps = build_exchange_maps(dom, 3);
  for (int t = 0; t < 2; ++t) {
    const auto n = dom.yin.dims(kCellLayout);
    const std::size_t lateral = std::size_t(n[0] - 2) * (n[1] * n[2] - (n[1] - 2) * (n[2] - 2));
    CHECK(maps[t].scalar.size() == lateral);
    const std::size_t ring = std::size_t(n[0] - 2) * ((n[1] - 2) * (n[2] - 2) - (n[1] - 4) * (n[2] - 4));
    CHECK(maps[t].pressure_ring.size() == ring);
    for (int c = 0; c < 3; ++c) CHECK(!maps[t].velocity[c].empty());
  }
}

TEST_CASE("exchange: zero donor, idempotence, interpolation order") {
  const auto dom = build_domain({1, 2, 0.1}, {6, 18, 36, {}});
  const auto maps = build_exchange_maps(dom, 3);
  auto f = sampled_scalar(dom);
  Field t = f[0];
  exchange_scalar(maps[0], make_scalar(dom.yang), t);
  for (const auto& st : maps[0].scalar) CHECK(t[st.target] == 0.0);

  Field a = f[0], b;
  exchange_scalar(maps[0], f[1], a);
  b = a;
  exchange_scalar(maps[0], f[1], b);
  CHECK(max_abs_diff(a, b) == 0.0);

  for (int order : {2, 3}) {
    std::vector<double> h, e;
    for (int m : {1, 2, 4}) {
      h.push_back(1.0 / m);
      e.push_back(scalar_exchange_error(m, order));
    }
    const double s = oracle::loglog_slope(h, e);
    MESSAGE("order " << order << ": slope " << s);
    CHECK(s >= order - 0.2);
  }
}

TEST_CASE("exchange of a rigid Cartesian vector field") {
  const Vec3 V{0.3, -0.7, 0.5};
  std::vector<double> h, err;
  for (int m : {1, 2, 4}) {
    const auto dom = build_domain({1, 2, 0.1}, {6 * m, 18 * m, 36 * m, {}});
    const auto maps = build_exchange_maps(dom, 3);
    std::array<VectorField, 2> u{make_vector(dom.yin), make_vector(dom.yang)};
    for (int c = 0; c < 2; ++c) sample(dom.grid(Chart(c)), u[c], [&](const Vec3&) { return V; });
    double e = 0;
    for (int t = 0; t < 2; ++t) {
      VectorField w = u[t];
      for (int c = 0; c < 3; ++c) w[c].fill_boundary(0.0);
      exchange_velocity(maps[t], u[1 - t], w);
      for (int c = 0; c < 3; ++c)
        for (const auto& vs : maps[t].velocity[c]) e = std::max(e, std::abs(w[c][vs.target] - u[t][c][vs.target]));
    }
    h.push_back(1.0 / m);
    err.push_back(e);
  }
  CHECK(err.back() < 1e-3);
  CHECK(oracle::loglog_slope(h, err) >= 2.8);
}

TEST_CASE("pressure ring exchange reads only donor interior") {
  const auto dom = build_domain({1, 2, 0.1}, {6, 18, 36, {}});
  const auto maps = build_exchange_maps(dom, 3);
  auto f = sampled_scalar(dom);
  Field donor = f[1];
  donor.fill_boundary(1e6);  // garbage in the donor's boundary layer must not leak
  Field t = f[0];
  exchange_pressure(maps[0], donor, t);
  double e = 0;
  for (const auto& st : maps[0].pressure_ring) e = std::max(e, std::abs(t[st.target] - f[0][st.target]));
  CHECK(e < 1e-2);
}

TEST_CASE("overlap too small is reported with a suggestion") {
  const auto dom = build_domain({1, 2, 0.01}, {4, 12, 24, {}});
  try {
    build_exchange_maps(dom, 3);
    FAIL("expected OverlapTooSmall");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OverlapTooSmall);
    CHECK(std::string(e.what()).find("epsilon") != std::string::npos);
  }
  CHECK_THROWS_AS(build_exchange_maps(build_domain({1, 2, 0.1}, {4, 12, 24, {}}), 7), Error);
}

TEST_CASE("flux fix") {
  const auto dom = build_domain({1, 2, 0.1}, {4, 12, 24, {}});
  const MacGrid& g = dom.yin;
  // zero net flux: untouched
  VectorField rot = make_vector(g);
  sample(g, rot, [](const Vec3& x) { return Vec3{-x[1], x[0], 0.0}; });
  const VectorField before = rot;
  const auto r0 = flux_fix(g, rot, 1e-10);
  CHECK_FALSE(r0.applied);
  for (int c = 0; c < 3; ++c) CHECK(max_abs_diff(rot[c], before[c]) == 0.0);

  // uniform outward normal velocity on the lateral boundary, nothing through the walls
  VectorField u = make_vector(g);
  const double c0 = 0.4;
  const auto n1 = u[1].dims(), n2 = u[2].dims();
  for (int i = 1; i < n1[0] - 1; ++i)
    for (int k = 1; k < n1[2] - 1; ++k) u[1](i, 0, k) = -c0, u[1](i, n1[1] - 1, k) = c0;
  for (int i = 1; i < n2[0] - 1; ++i)
    for (int j = 1; j < n2[1] - 1; ++j) u[2](i, j, 0) = -c0, u[2](i, j, n2[2] - 1) = c0;
  const BoundaryFlux bf = boundary_flux(g, u);
  CHECK(bf.walls == 0.0);
  const double F0 = bf.lateral;
  double A = 0;  // lateral area
  {
    VectorField one = make_vector(g);
    for (int i = 1; i < n1[0] - 1; ++i)
      for (int k = 1; k < n1[2] - 1; ++k) one[1](i, 0, k) = -1, one[1](i, n1[1] - 1, k) = 1;
    for (int i = 1; i < n2[0] - 1; ++i)
      for (int j = 1; j < n2[1] - 1; ++j) one[2](i, j, 0) = -1, one[2](i, j, n2[2] - 1) = 1;
    A = boundary_flux(g, one).lateral;
  }
  CHECK(F0 == doctest::Approx(c0 * A));
  const double penalty = 1e-6;
  VectorField v = u;
  const auto rep = flux_fix(g, v, 1e-12, penalty);
  CHECK(rep.applied);
  // closed-form minimiser: outward normal component shifted by -2 beta F0 / (1 + 2 beta A),
  // leaving the flux F0 / (1 + 2 beta A)
  const double beta = 1.0 / (2 * penalty * bf.area * bf.area);
  const double shift = 2 * beta * F0 / (1 + 2 * beta * A);
  CHECK(rep.flux_after == doctest::Approx(F0 / (1 + 2 * beta * A)).epsilon(1e-6));
  CHECK(std::abs(rep.flux_after) <= 1e-3 * std::abs(F0));
  for (int i = 1; i < n1[0] - 1; ++i)
    for (int k = 1; k < n1[2] - 1; ++k) {
      CHECK(v[1](i, n1[1] - 1, k) == doctest::Approx(c0 - shift).epsilon(1e-9));
      CHECK(v[1](i, 0, k) == doctest::Approx(-(c0 - shift)).epsilon(1e-9));
    }
  for (int i = 1; i < n2[0] - 1; ++i)
    for (int j = 1; j < n2[1] - 1; ++j) CHECK(v[2](i, j, n2[2] - 1) == doctest::Approx(c0 - shift).epsilon(1e-9));
  // a stiffer penalty drives the net flux to zero
  VectorField w = u;
  const auto tight = flux_fix(g, w, 1e-12, 1e-12);
  CHECK(std::abs(tight.flux_after) <= 1e-8 * std::abs(F0));
  CHECK_THROWS_AS(flux_fix(g, v, -1.0), Error);
}

TEST_CASE("error reduction: linearity and fixed point") {
  const auto dom = build_domain({1, 2, 0.1}, {4, 12, 24, {}});
  const MacGrid& g = dom.yin;
  const FactorSet F = assemble_heat_factors(g, 0.01, 1.0, nullptr, {Dir::R, Dir::Theta, Dir::Phi});
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(-1, 1);
  auto rnd = [&] {
    Field f = make_scalar(g);
    for_interior(f.dims(), [&](int i, int j, int k) { f(i, j, k) = U(rng); });
    return f;
  };
  const Field G = rnd(), a = rnd(), b = rnd();
  CHECK(max_abs_diff(error_reduction_rhs(F, G, a, 1), G) == 0.0);
  const Field ra = error_reduction_rhs(F, G, a, 2) - G;
  const Field rb = error_reduction_rhs(F, G, b, 2) - G;
  const Field rab = error_reduction_rhs(F, G, a + b, 2) - G;
  CHECK(max_abs_diff(rab, ra + rb) <= 1e-13 * max_abs(rab));

  // iterating the corrected split solve converges to the unsplit implicit solution
  Field Gs = G;
  Gs *= 0.01;
  const Field zero = make_scalar(g);
  Field d = split_update(F, Gs, zero, zero, false);
  const double split_res = max_abs_interior(apply_unsplit(F, d) - Gs);
  for (int k = 2; k <= 60; ++k) d = split_update(F, Gs, d, zero, true);
  const double er_res = max_abs_interior(apply_unsplit(F, d) - Gs);
  MESSAGE("split residual " << split_res << ", after error reduction " << er_res);
  CHECK(er_res <= 1e-12 * max_abs(Gs));
  CHECK(er_res < split_res);
}

TEST_CASE("Schwarz step from the exact manufactured solution") {
  RunConfig c;
  c.grid = GridSpec{6, 18, 36, {}};
  c.dt = 1e-3;
  c.t_final = 1e-3;
  const auto dom = build_domain(c.extents, c.grid);
  const auto maps = build_exchange_maps(dom, 3);
  const auto pb = make_problem(c);
  const PhysicsConfig ph = make_physics(c, *pb);
  GlobalState s = initial_state(c, dom, *pb);
  SchwarzConfig sc = c.schwarz;
  const auto rep = schwarz_time_step(dom, maps, s, ph, sc);
  CHECK(rep.converged);
  for (double r : rep.residuals) CHECK(r < sc.tol);
  CHECK(s.steps == 1);
  CHECK(s.t == doctest::Approx(1e-3));
  // velocities and temperature stay at their (small) spatial error; the
  // pressures sit at the coarse grid's O(h^2) pressure error
  const ErrorReport e = error_norms(dom, s, *pb, s.t, {true});
  for (int q : {kU1, kU2, kT}) CHECK(e.combined(q) < 0.05);
  for (int q : {kP1, kP2}) CHECK(e.combined(q) < 0.5);
}

TEST_CASE("additive and multiplicative fixed points agree") {
  RunConfig c;
  c.grid = GridSpec{6, 18, 36, {}};
  c.dt = 0.01;
  const auto dom = build_domain(c.extents, c.grid);
  const auto maps = build_exchange_maps(dom, 3);
  const auto pb = make_problem(c);
  const PhysicsConfig ph = make_physics(c, *pb);
  SchwarzConfig sc;
  sc.tol = 1e-9;
  sc.max_iters = 400;
  GlobalState a = initial_state(c, dom, *pb), m = a;
  sc.mode = SchwarzMode::Multiplicative;
  const auto rm = schwarz_time_step(dom, maps, m, ph, sc);
  sc.mode = SchwarzMode::Additive;
  WorkerPool pool(2);
  const auto ra = schwarz_time_step(dom, maps, a, ph, sc, &pool);
  CHECK(rm.converged);
  CHECK(ra.converged);
  CHECK(ra.iterations >= rm.iterations);
  const ErrorReport d = state_difference(dom, a, m, false);
  for (int q = 0; q < kQuantityCount; ++q) CHECK(d.combined(q) <= 10 * sc.tol);
}
