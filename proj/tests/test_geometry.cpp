#include <cmath>
#include <vector>

#include "doctest.h"
#include "ncvem/error.hpp"
#include "ncvem/geometry.hpp"
#include "ncvem/quadrature.hpp"
#include "test_support.hpp"

using namespace ncvem;
using ncvem_tests::green_monomial_integral;

namespace {

double integrate(const QuadratureRule& rule, int a, int b, Point2 shift = {}, double scale = 1.0) {
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i)
    s += rule.weights[i] * std::pow((rule.points[i].x - shift.x) / scale, a) *
         std::pow((rule.points[i].y - shift.y) / scale, b);
  return s;
}

const std::vector<Point2> kUnitSquare{{0, 0}, {1, 0}, {1, 1}, {0, 1}};

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("cell geometry of simple shapes") {
    const auto sq = CellGeometry::from_polygon(kUnitSquare);
    CHECK(sq.area == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(sq.centroid.x == doctest::Approx(0.5));
    CHECK(sq.centroid.y == doctest::Approx(0.5));
    CHECK(sq.diameter == doctest::Approx(std::sqrt(2.0)));

    const auto tri = CellGeometry::from_polygon({{0, 0}, {1, 0}, {0, 1}});
    CHECK(tri.area == doctest::Approx(0.5));
    CHECK(tri.centroid.x == doctest::Approx(1.0 / 3.0));
    CHECK(tri.centroid.y == doctest::Approx(1.0 / 3.0));
  }

  TEST_CASE("edge normals are the tangent rotated clockwise") {
    const auto sq = CellGeometry::from_polygon(kUnitSquare);
    for (const auto& e : sq.edges) {
      CHECK(std::abs(dot(e.normal, e.tangent)) < 1e-15);
      CHECK(norm(e.normal) == doctest::Approx(1.0));
      CHECK(e.normal.x == doctest::Approx(e.tangent.y));
      CHECK(e.normal.y == doctest::Approx(-e.tangent.x));
      // outward: the midpoint moved along n leaves the square
      const Point2 out = e.midpoint + 0.1 * e.normal;
      CHECK((out.x < 0 || out.x > 1 || out.y < 0 || out.y > 1));
    }
  }

  TEST_CASE("invalid cells are rejected") {
    CHECK_THROWS_AS(CellGeometry::from_polygon({{0, 0}, {1, 0}}), MeshError);
    CHECK_THROWS_AS(CellGeometry::from_polygon({{0, 0}, {0, 1}, {1, 0}}), MeshError);  // clockwise
    CHECK_THROWS_AS(CellGeometry::from_polygon({{0, 0}, {1, 0}, {2, 0}}), MeshError);  // zero area
  }

  TEST_CASE("star point lies in the kernel of a non-convex cell") {
    // arrow-shaped cell whose centroid is outside the kernel
    const std::vector<Point2> arrow{{0, 0}, {2, 0}, {2, 0.2}, {0.3, 0.2}, {0.3, 2}, {0, 2}};
    const auto cell = CellGeometry::from_polygon(arrow);
    CHECK(cell.kernel_radius > 0.0);
    CHECK(kernel_margin(arrow, cell.star_point) > 0.0);
  }

  TEST_CASE("Gauss-Legendre rules are exact to degree 2n-1") {
    for (int n = 1; n <= 12; ++n) {
      const auto gl = gauss_legendre(n);
      for (int d = 0; d <= 2 * n - 1; ++d) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += gl.weights[i] * std::pow(gl.nodes[i], d);
        const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
        CHECK(std::abs(s - exact) < 1e-14);
      }
    }
  }

  TEST_CASE("polygon quadrature on the unit square and a triangle") {
    const auto sq = CellGeometry::from_polygon(kUnitSquare);
    CHECK(std::abs(integrate(polygon_quadrature(sq, 4), 2, 2) - 1.0 / 9.0) < 1e-14);
    const auto tri = CellGeometry::from_polygon({{0, 0}, {1, 0}, {0, 1}});
    CHECK(std::abs(integrate(polygon_quadrature(tri, 0), 0, 0) - 0.5) < 1e-15);
  }

  TEST_CASE("polygon quadrature matches the divergence-theorem oracle") {
    // non-convex octagon of a notched unit cell
    const double d = 0.37;
    const std::vector<Point2> oct{{0, 0}, {0.5, d}, {1, 0}, {1 - d, 0.5}, {1, 1}, {0.5, 1 - d}, {0, 1}, {d, 0.5}};
    const auto cell = CellGeometry::from_polygon(oct);
    const auto rule = polygon_quadrature(cell, 6);
    const double s = 0.5 * cell.diameter;
    CHECK(std::abs(integrate(rule, 3, 3, cell.centroid, s) -
                   green_monomial_integral(oct, 3, 3, cell.centroid, s)) < 1e-13 * cell.area);

    ncvem::SplitMix64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
      const auto poly = ncvem_tests::random_polygon(rng);
      const auto g = CellGeometry::from_polygon(poly);
      for (int deg = 0; deg <= 10; ++deg) {
        const auto r = polygon_quadrature(g, deg);
        double wsum = 0.0;
        for (double w : r.weights) wsum += w;
        CHECK(std::abs(wsum - g.area) < 1e-14 * g.area);
        const double h = 0.5 * g.diameter;
        for (int a = 0; a <= deg; ++a) {
          const int b = deg - a;
          const double q = integrate(r, a, b, g.centroid, h);
          const double o = green_monomial_integral(poly, a, b, g.centroid, h);
          CHECK(std::abs(q - o) <= 1e-13 * g.area);
        }
      }
    }
  }

  TEST_CASE("edge quadrature") {
    const auto unit = edge_quadrature({0, 0}, {1, 0}, 0);
    double len = 0.0;
    for (double w : unit.weights) len += w;
    CHECK(len == doctest::Approx(1.0).epsilon(1e-15));

    const Point2 a{0.3, -0.2}, b{1.7, 0.9};
    const double L = distance(a, b);
    const auto rule = edge_quadrature(a, b, 4);
    double m1 = 0.0, m2 = 0.0, m4 = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double s = rule.params[i];
      m1 += rule.weights[i] * s;
      m2 += rule.weights[i] * s * s;
      m4 += rule.weights[i] * s * s * s * s;
      // parameter consistent with the physical point
      const Point2 expect = 0.5 * (a + b) + s * (b - a);
      CHECK(distance(expect, rule.points[i]) < 1e-14);
    }
    CHECK(std::abs(m1) < 1e-15);
    CHECK(m2 == doctest::Approx(L / 12.0).epsilon(1e-14));
    CHECK(m4 == doctest::Approx(L / 80.0).epsilon(1e-14));
  }
}
