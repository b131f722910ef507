#pragma once

#include <vector>

#include "ncvem/geometry.hpp"

namespace ncvem {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendre gauss_legendre(int num_points);

struct QuadratureRule {
  std::vector<Point2> points;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return points.size(); }
};

/// Rule for the triangle (a, b, c), exact for polynomials of total degree
/// `degree`. Built as a collapsed (Duffy) tensor product of Gauss-Legendre
/// rules; the weights sum to the triangle area.
QuadratureRule triangle_quadrature(Point2 a, Point2 b, Point2 c, int degree);

/// Fan sub-triangulation of the cell from its star point, one triangle rule
/// per edge. Exact to `degree` on the whole polygon.
QuadratureRule polygon_quadrature(const CellGeometry& cell, int degree);

/// Gauss-Legendre rule on a segment, exact to `degree`.
///
/// `params` holds the scaled edge coordinate s~ = (s - s_mid)/|e| in
/// [-1/2, 1/2] of every node, measured along the traversal a -> b.
struct EdgeQuadrature {
  std::vector<double> params;
  std::vector<Point2> points;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return points.size(); }
};

EdgeQuadrature edge_quadrature(Point2 a, Point2 b, int degree);

}  // namespace ncvem
