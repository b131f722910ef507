#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "ncvem/geometry.hpp"
#include "ncvem/quadrature.hpp"
#include "ncvem/random.hpp"

namespace ncvem_tests {

using ncvem::Point2;

// Star-shaped polygon around a random center: 3..9 vertices at jittered
// angles and radii in [0.55, 1], scaled by a random size in [0.05, 1].
inline std::vector<Point2> random_polygon(ncvem::SplitMix64& rng) {
  const int n = 3 + static_cast<int>(rng.next() % 7);
  const double size = 0.05 + 0.95 * rng.uniform();
  const Point2 center{rng.uniform(), rng.uniform()};
  const double phase = 2.0 * std::numbers::pi * rng.uniform();
  std::vector<Point2> poly;
  for (int k = 0; k < n; ++k) {
    const double t = phase + 2.0 * std::numbers::pi * (k + 0.6 * rng.uniform()) / n;
    const double r = size * (0.55 + 0.45 * rng.uniform());
    poly.push_back({center.x + r * std::cos(t), center.y + r * std::sin(t)});
  }
  return poly;
}

// int_P x^a y^b dx dy by the divergence theorem,
//   int_P f = int_dP F n_x ds with F = x^(a+1) y^b / (a+1),
// each edge integrated with enough Gauss-Legendre points to be exact.
inline double green_monomial_integral(const std::vector<Point2>& poly, int a, int b, Point2 shift = {},
                                      double scale = 1.0) {
  const auto gl = ncvem::gauss_legendre((a + b + 3) / 2 + 1);
  double sum = 0.0;
  const int n = static_cast<int>(poly.size());
  for (int k = 0; k < n; ++k) {
    const Point2 p = poly[k], q = poly[(k + 1) % n];
    const double dy = q.y - p.y;  // n_x ds = dy
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double t = 0.5 * (gl.nodes[i] + 1.0);
      const double x = (p.x + t * (q.x - p.x) - shift.x) / scale;
      const double y = (p.y + t * (q.y - p.y) - shift.y) / scale;
      sum += 0.5 * gl.weights[i] * std::pow(x, a + 1) * std::pow(y, b) / (a + 1) * dy;
    }
  }
  return sum * scale;  // d(x/scale) = dx/scale, dA = scale^2 d(...), and dy carries one scale
}

}  // namespace ncvem_tests
