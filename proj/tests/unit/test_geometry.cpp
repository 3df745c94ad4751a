#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "yinyang/error.hpp"
#include "yinyang/geometry.hpp"

using namespace yy;
using oracle::pi;

namespace {
double norm(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no exception");
  return ErrorKind::Io;
}
}  // namespace

TEST_CASE("chart boxes and uniform faces") {
  const auto dom = build_domain({1, 2, 0.1}, {4, 4, 4, {}});
  for (Chart c : {Chart::Yin, Chart::Yang}) {
    const MacGrid& g = dom.grid(c);
    CHECK(g.faces(Dir::Theta).front() == doctest::Approx(pi / 4 - 0.1).epsilon(1e-15));
    CHECK(g.faces(Dir::Theta).back() == doctest::Approx(3 * pi / 4 + 0.1).epsilon(1e-15));
    CHECK(g.faces(Dir::Phi).front() == doctest::Approx(pi / 4 - 0.1).epsilon(1e-15));
    CHECK(g.faces(Dir::Phi).back() == doctest::Approx(7 * pi / 4 + 0.1).epsilon(1e-15));
    const std::vector<double> rf{1, 1.25, 1.5, 1.75, 2};
    for (int i = 0; i < 5; ++i) CHECK(g.faces(Dir::R)[i] == doctest::Approx(rf[i]).epsilon(1e-15));
    CHECK(g.theta1() == pi / 4 - 0.1);
    CHECK(g.r_hat() == 1.0);
  }
  // congruence: identical coordinate arrays
  for (Dir d : {Dir::R, Dir::Theta, Dir::Phi}) {
    CHECK(dom.yin.faces(d) == dom.yang.faces(d));
    CHECK(dom.yin.centers(d) == dom.yang.centers(d));
  }
}

TEST_CASE("invalid extents and specs are rejected") {
  CHECK(kind_of([] { build_domain({2, 1, 0.1}, {4, 4, 4, {}}); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { build_domain({0, 1, 0.1}, {4, 4, 4, {}}); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { build_domain({1, 2, -0.1}, {4, 4, 4, {}}); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { build_domain({1, 2, 0.1}, {1, 4, 4, {}}); }) == ErrorKind::InvalidArgument);
  GridSpec bad{4, 4, 4, {}};
  bad.stretching[0] = {0, 0.5, 0.4, 0.8, 1};
  CHECK(kind_of([&] { build_domain({1, 2, 0.1}, bad); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("coverage and overlap") {
  const auto dom = build_domain({1, 2, 0.1}, {4, 12, 24, {}});
  const auto rep = check_coverage(dom, 10000);
  CHECK(rep.covered);
  CHECK(rep.boundary_inside);
  CHECK(rep.min_margin > 0);
  const auto abut = build_domain({1, 2, 0.0}, {4, 12, 24, {}});
  CHECK_FALSE(check_coverage(abut, 2000).boundary_inside);
}

TEST_CASE("quasi-uniform cells") {
  const auto dom = build_domain({1, 2, 0.1}, {6, 18, 36, {}});
  CHECK(max_cell_diameter(dom.yin) / min_cell_diameter(dom.yin) <= 4.0);
}

TEST_CASE("chart to cartesian") {
  Vec3 a = chart_to_cartesian(Chart::Yin, {1, pi / 2, 0});
  CHECK(std::abs(a[0] - 1) < 1e-15);
  CHECK(std::abs(a[1]) < 1e-15);
  CHECK(std::abs(a[2]) < 1e-15);
  Vec3 b = chart_to_cartesian(Chart::Yang, {1, pi / 2, pi / 2});
  CHECK(std::abs(b[0]) < 1e-15);
  CHECK(std::abs(b[1]) < 1e-15);
  CHECK(std::abs(b[2] - 1) < 1e-15);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0, 1);
  for (int n = 0; n < 1000; ++n) {
    const Spherical p{1 + u(rng), pi * u(rng), 2 * pi * u(rng)};
    for (Chart c : {Chart::Yin, Chart::Yang}) CHECK(std::abs(norm(chart_to_cartesian(c, p)) - p.r) < 1e-14);
  }
}

TEST_CASE("sibling coordinates") {
  const Spherical q = sibling_coords(Chart::Yin, {2, pi / 2, pi / 4});
  CHECK(q.r == doctest::Approx(2));
  CHECK(q.theta == doctest::Approx(pi / 4));
  CHECK(q.phi == doctest::Approx(pi));
  // round trip through Cartesian
  const Vec3 x0 = chart_to_cartesian(Chart::Yin, {2, pi / 2, pi / 4});
  const Vec3 x1 = chart_to_cartesian(Chart::Yang, q);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(x0[i] - x1[i]) < 1e-14);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0, 1);
  for (int n = 0; n < 1000; ++n) {
    const Spherical p{1 + u(rng), pi / 4 + pi / 2 * u(rng), pi / 4 + 1.5 * pi * u(rng)};
    for (Chart c : {Chart::Yin, Chart::Yang}) {
      const Spherical back = sibling_coords(other(c), sibling_coords(c, p));
      CHECK(std::abs(back.r - p.r) < 1e-12);
      CHECK(std::abs(back.theta - p.theta) < 1e-12);
      CHECK(std::abs(back.phi - p.phi) < 1e-12);
    }
  }
  // Yin point on the Yang axis: Cartesian (0, r, 0)
  CHECK(kind_of([] { sibling_coords(Chart::Yin, {1, pi / 2, pi / 2}); }) == ErrorKind::PoleAmbiguity);
}

TEST_CASE("basis is orthonormal") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int n = 0; n < 100; ++n) {
    const Spherical p{1.5, u(rng), 2 * u(rng)};
    for (Chart c : {Chart::Yin, Chart::Yang}) {
      const auto e = spherical_basis(c, p);
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          const double d = e[a][0] * e[b][0] + e[a][1] * e[b][1] + e[a][2] * e[b][2];
          CHECK(std::abs(d - (a == b ? 1.0 : 0.0)) < 1e-14);
        }
      // e_r points along the position
      const Vec3 x = chart_to_cartesian(c, p);
      for (int i = 0; i < 3; ++i) CHECK(std::abs(e[0][i] - x[i] / p.r) < 1e-14);
    }
  }
}

TEST_CASE("cell location") {
  const auto dom = build_domain({1, 2, 0.1}, {4, 12, 24, {}});
  const MacGrid& g = dom.yin;
  const Spherical c{g.centers(Dir::R)[1], g.centers(Dir::Theta)[5], g.centers(Dir::Phi)[7]};
  const auto loc = locate_cell(g, c);
  CHECK(loc.cell == std::array<int, 3>{1, 5, 7});
  for (double o : loc.offset) CHECK(o == doctest::Approx(0.5).epsilon(1e-12));

  const Spherical f{g.faces(Dir::R)[1], g.centers(Dir::Theta)[0], g.centers(Dir::Phi)[0]};
  const auto lf = locate_cell(g, f);
  CHECK(lf.cell[0] == 0);
  CHECK(lf.offset[0] == doctest::Approx(1.0));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  for (int n = 0; n < 1000; ++n) {
    const Spherical p{g.lo(Dir::R) + (g.hi(Dir::R) - g.lo(Dir::R)) * u(rng),
                      g.lo(Dir::Theta) + (g.hi(Dir::Theta) - g.lo(Dir::Theta)) * u(rng),
                      g.lo(Dir::Phi) + (g.hi(Dir::Phi) - g.lo(Dir::Phi)) * u(rng)};
    const auto l = locate_cell(g, p);
    const double v[3] = {p.r, p.theta, p.phi};
    for (Dir d : {Dir::R, Dir::Theta, Dir::Phi}) {
      const auto& fc = g.faces(d);
      const int q = l.cell[idx(d)];
      const double x = fc[q] + l.offset[idx(d)] * (fc[q + 1] - fc[q]);
      CHECK(std::abs(x - v[idx(d)]) < 1e-13);
    }
  }
  CHECK(kind_of([&] { locate_cell(g, {2.5, 1.0, 1.0}); }) == ErrorKind::OutOfDomain);
}
