#include "ncvem/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "ncvem/error.hpp"

namespace ncvem {

GaussLegendre gauss_legendre(int num_points) {
  if (num_points < 1) throw ConfigError("Gauss-Legendre rule needs at least one point");
  const int n = num_points;
  GaussLegendre rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute the derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

QuadratureRule triangle_quadrature(Point2 a, Point2 b, Point2 c, int degree) {
  if (degree < 0) degree = 0;
  // the collapsed map adds one degree in the first coordinate
  const GaussLegendre gl = gauss_legendre((degree + 3) / 2);
  const double twice_area = cross(b - a, c - a);

  QuadratureRule rule;
  rule.degree = degree;
  rule.points.reserve(gl.nodes.size() * gl.nodes.size());
  rule.weights.reserve(gl.nodes.size() * gl.nodes.size());
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    const double u = 0.5 * (gl.nodes[i] + 1.0);
    const double wu = 0.5 * gl.weights[i];
    for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
      const double v = 0.5 * (gl.nodes[j] + 1.0);
      const double wv = 0.5 * gl.weights[j];
      // reference point (u, (1-u) v) with Jacobian (1-u)
      const double xi = u;
      const double eta = (1.0 - u) * v;
      rule.points.push_back(a + xi * (b - a) + eta * (c - a));
      rule.weights.push_back(twice_area * wu * wv * (1.0 - u));
    }
  }
  return rule;
}

QuadratureRule polygon_quadrature(const CellGeometry& cell, int degree) {
  QuadratureRule rule;
  rule.degree = degree;
  const Point2 xb = cell.star_point;
  for (const EdgeGeometry& e : cell.edges) {
    if (!(cross(e.a - xb, e.b - xb) > 0.0))
      throw MeshError("star point is not interior to the cell: fan triangle is not positive");
    QuadratureRule t = triangle_quadrature(xb, e.a, e.b, degree);
    rule.points.insert(rule.points.end(), t.points.begin(), t.points.end());
    rule.weights.insert(rule.weights.end(), t.weights.begin(), t.weights.end());
  }
  return rule;
}

EdgeQuadrature edge_quadrature(Point2 a, Point2 b, int degree) {
  if (degree < 0) degree = 0;
  const GaussLegendre gl = gauss_legendre((degree + 2) / 2);
  const double len = distance(a, b);
  EdgeQuadrature rule;
  rule.degree = degree;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    const double s = 0.5 * gl.nodes[i];
    rule.params.push_back(s);
    rule.points.push_back(0.5 * (a + b) + s * (b - a));
    rule.weights.push_back(0.5 * len * gl.weights[i]);
  }
  return rule;
}

}  // namespace ncvem
