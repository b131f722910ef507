#include "ncvem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "ncvem/error.hpp"

namespace ncvem {

namespace {

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

}  // namespace

int PolygonMesh::num_boundary_vertices() const {
  return static_cast<int>(std::count(boundary_vertex_.begin(), boundary_vertex_.end(), 1));
}

int PolygonMesh::num_boundary_edges() const {
  return static_cast<int>(
      std::count_if(edges_.begin(), edges_.end(), [](const Edge& e) { return e.boundary; }));
}

PolygonMesh derive_topology(std::vector<Point2> vertices, std::vector<std::vector<int>> cells) {
  if (cells.empty()) throw MeshError("mesh has no cells");
  const int nv = static_cast<int>(vertices.size());
  for (const Point2& p : vertices)
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw MeshError("non-finite vertex coordinate");

  PolygonMesh mesh;
  mesh.vertices_ = std::move(vertices);
  mesh.cells_.resize(cells.size());

  // first traversal direction seen for every edge: +1 if lower -> higher
  std::unordered_map<std::uint64_t, int> edge_ids;
  std::vector<int> first_direction;
  edge_ids.reserve(cells.size() * 4);

  for (std::size_t c = 0; c < cells.size(); ++c) {
    const std::vector<int>& ids = cells[c];
    const std::string where = "cell " + std::to_string(c) + ": ";
    if (ids.size() < 3) throw MeshError(where + "fewer than three vertices");
    std::unordered_set<int> seen;
    for (int v : ids) {
      if (v < 0 || v >= nv) throw MeshError(where + "vertex index " + std::to_string(v) + " out of range");
      if (!seen.insert(v).second) throw MeshError(where + "duplicate vertex " + std::to_string(v));
    }

    PolygonCell& cell = mesh.cells_[c];
    cell.vertices = ids;
    const std::size_t n = ids.size();
    for (std::size_t k = 0; k < n; ++k) {
      const int a = ids[k];
      const int b = ids[(k + 1) % n];
      const int dir = a < b ? 1 : -1;
      const std::uint64_t key = edge_key(a, b);
      auto it = edge_ids.find(key);
      int id;
      if (it == edge_ids.end()) {
        id = static_cast<int>(mesh.edges_.size());
        edge_ids.emplace(key, id);
        Edge e;
        e.vertices = {std::min(a, b), std::max(a, b)};
        e.cells = {static_cast<int>(c), -1};
        mesh.edges_.push_back(e);
        first_direction.push_back(dir);
      } else {
        id = it->second;
        Edge& e = mesh.edges_[id];
        if (e.cells[1] != -1)
          throw MeshError(where + "non-manifold edge (" + std::to_string(a) + ", " + std::to_string(b) + ")");
        if (first_direction[id] == dir)
          throw MeshError(where + "inconsistent orientation on edge (" + std::to_string(a) + ", " +
                          std::to_string(b) + ")");
        e.cells[1] = static_cast<int>(c);
      }
      cell.edges.push_back(id);
      cell.edge_orientation.push_back(static_cast<int8_t>(dir));
    }
  }

  mesh.boundary_vertex_.assign(nv, 0);
  for (Edge& e : mesh.edges_) {
    const EdgeGeometry g = make_edge_geometry(mesh.vertices_[e.vertices[0]], mesh.vertices_[e.vertices[1]]);
    e.length = g.length;
    e.tangent = g.tangent;
    e.normal = g.normal;
    e.boundary = e.cells[1] == -1;
    if (!(e.length > 0.0)) throw MeshError("zero-length edge");
    if (e.boundary) mesh.boundary_vertex_[e.vertices[0]] = mesh.boundary_vertex_[e.vertices[1]] = 1;
  }

  mesh.geometry_.reserve(mesh.cells_.size());
  for (std::size_t c = 0; c < mesh.cells_.size(); ++c) {
    PolygonCell& cell = mesh.cells_[c];
    std::vector<Point2> coords;
    coords.reserve(cell.vertices.size());
    for (int v : cell.vertices) coords.push_back(mesh.vertices_[v]);
    try {
      mesh.geometry_.push_back(CellGeometry::from_polygon(std::move(coords)));
    } catch (const MeshError& err) {
      throw MeshError("cell " + std::to_string(c) + ": " + err.what());
    }
    const CellGeometry& g = mesh.geometry_.back();
    cell.area = g.area;
    cell.centroid = g.centroid;
    cell.diameter = g.diameter;
    cell.star_point = g.star_point;
    mesh.mesh_size_ = std::max(mesh.mesh_size_, g.diameter);
  }
  return mesh;
}

RegularityReport validate_regularity(const PolygonMesh& mesh, double quality_floor) {
  RegularityReport r;
  r.quality_floor = quality_floor;
  r.min_subtriangle_quality = M_PI;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry& g = mesh.cell_geometry(c);
    r.min_star_radius_ratio = std::min(r.min_star_radius_ratio, g.kernel_radius / g.diameter);
    for (const EdgeGeometry& e : g.edges) {
      r.min_edge_to_diameter_ratio = std::min(r.min_edge_to_diameter_ratio, e.length / g.diameter);
      const Point2 p[3] = {g.star_point, e.a, e.b};
      for (int k = 0; k < 3; ++k) {
        const Point2 u = p[(k + 1) % 3] - p[k];
        const Point2 v = p[(k + 2) % 3] - p[k];
        const double angle = std::atan2(std::abs(cross(u, v)), dot(u, v));
        r.min_subtriangle_quality = std::min(r.min_subtriangle_quality, angle);
      }
    }
  }
  return r;
}

}  // namespace ncvem
