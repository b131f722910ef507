#include "ncvem/geometry.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "ncvem/error.hpp"

namespace ncvem {

double signed_area(std::span<const Point2> polygon) {
  const std::size_t n = polygon.size();
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) twice += cross(polygon[i], polygon[(i + 1) % n]);
  return 0.5 * twice;
}

namespace {

int orientation(Point2 a, Point2 b, Point2 c) {
  const double v = cross(b - a, c - a);
  const double scale = std::max({norm(b - a), norm(c - a), 1e-300});
  if (std::abs(v) <= 1e-14 * scale * scale) return 0;
  return v > 0 ? 1 : -1;
}

bool on_segment(Point2 a, Point2 b, Point2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segments_touch(Point2 p1, Point2 p2, Point2 q1, Point2 q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

}  // namespace

bool is_simple_polygon(std::span<const Point2> polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_touch(polygon[i], polygon[(i + 1) % n], polygon[j], polygon[(j + 1) % n]))
        return false;
    }
  }
  return true;
}

EdgeGeometry make_edge_geometry(Point2 a, Point2 b) {
  EdgeGeometry e;
  e.a = a;
  e.b = b;
  e.midpoint = 0.5 * (a + b);
  e.length = distance(a, b);
  e.tangent = (1.0 / e.length) * (b - a);
  e.normal = {e.tangent.y, -e.tangent.x};
  return e;
}

double kernel_margin(std::span<const Point2> polygon, Point2 p) {
  const std::size_t n = polygon.size();
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const EdgeGeometry e = make_edge_geometry(polygon[i], polygon[(i + 1) % n]);
    margin = std::min(margin, dot(e.normal, e.a - p));
  }
  return margin;
}

KernelDisc kernel_chebyshev_disc(std::span<const Point2> polygon) {
  // maximize r subject to n_k . x + r <= n_k . a_k for every edge k; the
  // optimum sits on a vertex of the (x, y, r) polytope, i.e. three active rows.
  struct Row {
    double nx, ny, rhs;
  };
  std::vector<Row> rows;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = polygon[i];
    const Point2 b = polygon[(i + 1) % n];
    if (distance(a, b) == 0.0) continue;
    const EdgeGeometry e = make_edge_geometry(a, b);
    rows.push_back({e.normal.x, e.normal.y, dot(e.normal, a)});
  }

  double scale = 0.0;
  for (const Point2& p : polygon) scale = std::max(scale, norm(p - polygon[0]));
  const double feas_tol = 1e-12 * std::max(scale, 1e-300);

  KernelDisc best{polygon.empty() ? Point2{} : polygon[0], -std::numeric_limits<double>::infinity()};
  const std::size_t m = rows.size();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      for (std::size_t k = j + 1; k < m; ++k) {
        const Row& r0 = rows[i];
        const Row& r1 = rows[j];
        const Row& r2 = rows[k];
        // Cramer's rule on [nx ny 1] [x y r]^T = rhs.
        const double det = r0.nx * (r1.ny - r2.ny) - r0.ny * (r1.nx - r2.nx) +
                           (r1.nx * r2.ny - r2.nx * r1.ny);
        if (std::abs(det) < 1e-12) continue;
        const double dx = r0.rhs * (r1.ny - r2.ny) - r0.ny * (r1.rhs - r2.rhs) +
                          (r1.rhs * r2.ny - r2.rhs * r1.ny);
        const double dy = r0.nx * (r1.rhs - r2.rhs) - r0.rhs * (r1.nx - r2.nx) +
                          (r1.nx * r2.rhs - r2.nx * r1.rhs);
        const double dr = r0.nx * (r1.ny * r2.rhs - r2.ny * r1.rhs) -
                          r0.ny * (r1.nx * r2.rhs - r2.nx * r1.rhs) +
                          r0.rhs * (r1.nx * r2.ny - r2.nx * r1.ny);
        const Point2 c{dx / det, dy / det};
        const double r = dr / det;
        if (r <= best.radius) continue;
        bool feasible = true;
        for (const Row& row : rows) {
          if (row.nx * c.x + row.ny * c.y + r > row.rhs + feas_tol) {
            feasible = false;
            break;
          }
        }
        if (feasible) best = {c, r};
      }
    }
  }
  return best;
}

CellGeometry CellGeometry::from_polygon(std::vector<Point2> vertices) {
  const std::size_t n = vertices.size();
  if (n < 3) throw MeshError("polygon needs at least three vertices");

  CellGeometry g;
  g.vertices = std::move(vertices);
  g.edges.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = g.vertices[i];
    const Point2 b = g.vertices[(i + 1) % n];
    if (!(distance(a, b) > 0.0)) throw MeshError("polygon has a zero-length edge");
    g.edges.push_back(make_edge_geometry(a, b));
  }

  g.area = signed_area(g.vertices);
  if (!(g.area > 0.0)) throw MeshError("polygon area is not positive (clockwise or degenerate)");

  // Centroid relative to the first vertex keeps the sums well scaled.
  const Point2 o = g.vertices[0];
  double cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 p = g.vertices[i] - o;
    const Point2 q = g.vertices[(i + 1) % n] - o;
    const double w = cross(p, q);
    cx += (p.x + q.x) * w;
    cy += (p.y + q.y) * w;
  }
  g.centroid = o + Point2{cx / (6.0 * g.area), cy / (6.0 * g.area)};

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      g.diameter = std::max(g.diameter, distance(g.vertices[i], g.vertices[j]));

  const KernelDisc disc = kernel_chebyshev_disc(g.vertices);
  if (!(disc.radius > 1e-12 * g.diameter))
    throw MeshError("polygon is not star-shaped with respect to any interior disc");
  g.kernel_radius = disc.radius;
  g.star_point = kernel_margin(g.vertices, g.centroid) > 1e-8 * g.diameter ? g.centroid : disc.center;
  return g;
}

}  // namespace ncvem
