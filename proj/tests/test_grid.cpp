#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <vector>

#include "ufd/errors.hpp"
#include "ufd/grid.hpp"

using namespace ufd;

TEST_SUITE_BEGIN("grid");

TEST_CASE("periodic unit domain: spacing and centers") {
  auto g = Grid::periodic_1d(4);
  CHECK(g->n_cells() == 4);
  CHECK(g->dim() == 1);
  CHECK(g->periodic());
  CHECK(g->spacing() == doctest::Approx(0.25).epsilon(1e-15));
  const double expected[] = {0.125, 0.375, 0.625, 0.875};
  for (int i = 0; i < 4; ++i)
    CHECK(g->x(i) == doctest::Approx(expected[i]).epsilon(1e-15));
  CHECK(g->domain_volume() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(g->cell_volume() == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("truncated box: spacing and symmetric centers") {
  auto g = Grid::truncated_1d(8, 2.0);
  CHECK(g->spacing() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(g->x(0) == doctest::Approx(-1.75).epsilon(1e-15));
  CHECK(g->x(7) == doctest::Approx(1.75).epsilon(1e-15));
  // centers mirror around 0
  for (int i = 0; i < 8; ++i)
    CHECK(g->x(i) == doctest::Approx(-g->x(7 - i)).epsilon(1e-14));
  CHECK(g->domain_volume() == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("tensor square: cell count and volumes") {
  auto g = Grid::tensor_2d(16, 3.0);
  CHECK(g->n_cells() == 256);
  CHECK(g->dim() == 2);
  const double h = 6.0 / 16.0;
  CHECK(g->spacing() == doctest::Approx(h).epsilon(1e-15));
  CHECK(g->cell_volume() == doctest::Approx(h * h).epsilon(1e-14));
  CHECK(g->domain_volume() == doctest::Approx(36.0).epsilon(1e-13));
  // first cell sits in the lower-left corner
  CHECK(g->x(0) == doctest::Approx(-3.0 + h / 2).epsilon(1e-14));
  CHECK(g->y(0) == doctest::Approx(-3.0 + h / 2).epsilon(1e-14));
}

TEST_CASE("cell volumes sum to the domain volume") {
  for (auto g : {Grid::periodic_1d(100), Grid::truncated_1d(250, 7.5),
                 Grid::tensor_2d(24, 3.0)}) {
    std::vector<double> ones(static_cast<std::size_t>(g->n_cells()), 1.0);
    const double total = g->integrate(ones);
    CHECK(std::abs(total - g->domain_volume()) <= 1e-12 * g->domain_volume());
  }
}

TEST_CASE("face lists: counts, symmetry, degrees") {
  SUBCASE("periodic wraps, every cell has two faces") {
    auto g = Grid::periodic_1d(10);
    CHECK(g->faces().size() == 10);
    std::vector<int> degree(10, 0);
    for (const auto& f : g->faces()) {
      CHECK(f.a != f.b);
      ++degree[static_cast<std::size_t>(f.a)];
      ++degree[static_cast<std::size_t>(f.b)];
    }
    for (int d : degree) CHECK(d == 2);
  }
  SUBCASE("truncated walls carry no face") {
    auto g = Grid::truncated_1d(8, 2.0);
    CHECK(g->faces().size() == 7);
    std::vector<int> degree(8, 0);
    for (const auto& f : g->faces()) {
      ++degree[static_cast<std::size_t>(f.a)];
      ++degree[static_cast<std::size_t>(f.b)];
    }
    CHECK(degree[0] == 1);
    CHECK(degree[7] == 1);
    for (int i = 1; i < 7; ++i) CHECK(degree[static_cast<std::size_t>(i)] == 2);
  }
  SUBCASE("tensor box: 2 N (N-1) interior faces, corner degree 2") {
    auto g = Grid::tensor_2d(16, 3.0);
    CHECK(g->faces().size() == 2u * 16u * 15u);
    std::vector<int> degree(256, 0);
    for (const auto& f : g->faces()) {
      ++degree[static_cast<std::size_t>(f.a)];
      ++degree[static_cast<std::size_t>(f.b)];
    }
    int corners = 0, edges = 0, interior = 0;
    for (int d : degree) {
      if (d == 2) ++corners;
      else if (d == 3) ++edges;
      else if (d == 4) ++interior;
    }
    CHECK(corners == 4);
    CHECK(edges == 4 * 14);
    CHECK(interior == 14 * 14);
  }
}

TEST_CASE("integrate: exact cases") {
  auto g = Grid::periodic_1d(128);  // dyadic h: the sums below are exact
  const auto n = static_cast<std::size_t>(g->n_cells());
  SUBCASE("constant integrates to the constant") {
    std::vector<double> v(n, 3.5);
    CHECK(g->integrate(v) == doctest::Approx(3.5).epsilon(1e-15));
  }
  SUBCASE("half-and-half step integrates to the mean") {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = (g->x(static_cast<int>(i)) < 0.5) ? 1.5 : 0.5;
    CHECK(g->integrate(v) == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("integrate is linear") {
  auto g = Grid::truncated_1d(333, 4.0);
  const auto n = static_cast<std::size_t>(g->n_cells());
  std::vector<double> u(n), v(n);
  // deterministic quasi-random data
  double s = 0.1234;
  for (std::size_t i = 0; i < n; ++i) {
    s = std::fmod(s * 997.0 + 0.317, 1.0);
    u[i] = 0.5 + s;
    v[i] = std::cos(7.0 * static_cast<double>(i));
  }
  std::vector<double> combo(n);
  const double a = 1.7, b = -0.3;
  for (std::size_t i = 0; i < n; ++i) combo[i] = a * u[i] + b * v[i];
  const double lhs = g->integrate(combo);
  const double rhs = a * g->integrate(u) + b * g->integrate(v);
  CHECK(std::abs(lhs - rhs) <= 1e-14 * (std::abs(lhs) + 1.0));
}

TEST_CASE("construction errors") {
  CHECK_THROWS_AS((void)Grid::periodic_1d(3), ConfigError);
  CHECK_THROWS_AS((void)Grid::truncated_1d(2, 1.0), ConfigError);
  CHECK_THROWS_AS((void)Grid::truncated_1d(16, 0.0), ConfigError);
  CHECK_THROWS_AS((void)Grid::truncated_1d(16, -2.0), ConfigError);
  CHECK_THROWS_AS((void)Grid::tensor_2d(3, 1.0), ConfigError);
  // build(): half-width is required for boxes, forbidden for the periodic domain
  CHECK_THROWS_AS((void)Grid::build(GridKind::truncated_1d, 16, std::nullopt), ConfigError);
  CHECK_THROWS_AS((void)Grid::build(GridKind::periodic_1d, 16, 1.0), ConfigError);
  CHECK_NOTHROW((void)Grid::build(GridKind::periodic_1d, 16, std::nullopt));
}

TEST_CASE("lattice nesting detection") {
  auto big = Grid::truncated_1d(600, 6.0);   // h = 0.02
  auto sub = Grid::truncated_1d(400, 4.0);   // h = 0.02, aligned
  auto off = Grid::truncated_1d(350, 3.5);   // h = 0.02, aligned as well
  auto bad = Grid::truncated_1d(300, 3.7);   // different spacing
  CHECK(big->nests(*sub));
  CHECK(big->nests(*off));
  CHECK_FALSE(big->nests(*bad));
  CHECK_FALSE(sub->nests(*big));  // wrong direction
}

TEST_SUITE_END();
