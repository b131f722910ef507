#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "ncvem/error.hpp"
#include "ncvem/mesh.hpp"
#include "ncvem/random.hpp"

namespace ncvem {

namespace {

void check_resolution(int resolution) {
  if (resolution < 1) throw ConfigError("grid resolution must be at least 1");
}

int grid_id(int r, int i, int j) { return j * (r + 1) + i; }

}  // namespace

int grid_resolution(int level) {
  if (level < 0) throw ConfigError("refinement level must be non-negative");
  return level == 0 ? 5 : 10 * level;
}

PolygonMesh criss_cross_mesh(int r) {
  check_resolution(r);
  const double s = 1.0 / r;
  std::vector<Point2> vertices;
  vertices.reserve((r + 1) * (r + 1) + r * r);
  for (int j = 0; j <= r; ++j)
    for (int i = 0; i <= r; ++i) vertices.push_back({i * s, j * s});
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < r; ++i) vertices.push_back({(i + 0.5) * s, (j + 0.5) * s});

  std::vector<std::vector<int>> cells;
  cells.reserve(4 * r * r);
  for (int j = 0; j < r; ++j) {
    for (int i = 0; i < r; ++i) {
      const int v00 = grid_id(r, i, j), v10 = grid_id(r, i + 1, j);
      const int v11 = grid_id(r, i + 1, j + 1), v01 = grid_id(r, i, j + 1);
      const int c = (r + 1) * (r + 1) + j * r + i;
      cells.push_back({v00, v10, c});
      cells.push_back({v10, v11, c});
      cells.push_back({v11, v01, c});
      cells.push_back({v01, v00, c});
    }
  }
  return derive_topology(std::move(vertices), std::move(cells));
}

PolygonMesh build_criss_cross(int level) { return criss_cross_mesh(grid_resolution(level)); }

PolygonMesh remapped_hexagonal_mesh(int r) {
  check_resolution(r);
  const double s = 1.0 / r;
  const double two_pi = 2.0 * std::numbers::pi;

  std::vector<Point2> primal;
  for (int j = 0; j <= r; ++j) {
    for (int i = 0; i <= r; ++i) {
      const double xh = i * s, yh = j * s;
      const double bump = 0.1 * std::sin(two_pi * xh) * std::sin(two_pi * yh);
      // boundary nodes stay exactly on the boundary
      const bool on_boundary = i == 0 || j == 0 || i == r || j == r;
      primal.push_back(on_boundary ? Point2{xh, yh} : Point2{xh + bump, yh + bump});
    }
  }

  // split every quad along the (i+1,j)-(i,j+1) diagonal (the one crossing the
  // stretch direction of the remap; gives the smaller cells)
  std::vector<std::array<int, 3>> triangles;
  for (int j = 0; j < r; ++j) {
    for (int i = 0; i < r; ++i) {
      const int v00 = grid_id(r, i, j), v10 = grid_id(r, i + 1, j);
      const int v11 = grid_id(r, i + 1, j + 1), v01 = grid_id(r, i, j + 1);
      triangles.push_back({v00, v10, v01});
      triangles.push_back({v10, v11, v01});
    }
  }

  const int np = static_cast<int>(primal.size());
  std::vector<std::vector<int>> incident(np);
  std::map<std::pair<int, int>, int> edge_count;
  for (int t = 0; t < static_cast<int>(triangles.size()); ++t) {
    for (int k = 0; k < 3; ++k) {
      const int a = triangles[t][k], b = triangles[t][(k + 1) % 3];
      incident[a].push_back(t);
      ++edge_count[{std::min(a, b), std::max(a, b)}];
    }
  }

  // dual vertices: barycenters, then boundary-edge midpoints, then boundary nodes
  std::vector<Point2> dual;
  for (const auto& t : triangles)
    dual.push_back((1.0 / 3.0) * (primal[t[0]] + primal[t[1]] + primal[t[2]]));

  std::vector<std::vector<int>> boundary_midpoints(np);
  for (const auto& [edge, count] : edge_count) {
    if (count != 1) continue;
    const int id = static_cast<int>(dual.size());
    dual.push_back(0.5 * (primal[edge.first] + primal[edge.second]));
    boundary_midpoints[edge.first].push_back(id);
    boundary_midpoints[edge.second].push_back(id);
  }
  std::vector<int> boundary_node(np, -1);
  for (int v = 0; v < np; ++v) {
    if (boundary_midpoints[v].empty()) continue;
    boundary_node[v] = static_cast<int>(dual.size());
    dual.push_back(primal[v]);
  }

  const Point2 center{0.5, 0.5};
  std::vector<std::vector<int>> cells;
  cells.reserve(np);
  for (int v = 0; v < np; ++v) {
    std::vector<int> items = incident[v];
    items.insert(items.end(), boundary_midpoints[v].begin(), boundary_midpoints[v].end());
    const Point2 p = primal[v];
    const Point2 ref = boundary_node[v] >= 0 ? center - p : Point2{1.0, 0.0};
    auto angle = [&](int id) {
      const Point2 d = dual[id] - p;
      return std::atan2(cross(ref, d), dot(ref, d));
    };
    std::sort(items.begin(), items.end(), [&](int a, int b) { return angle(a) < angle(b); });
    std::vector<int> cell;
    if (boundary_node[v] >= 0) cell.push_back(boundary_node[v]);
    cell.insert(cell.end(), items.begin(), items.end());
    cells.push_back(std::move(cell));
  }
  return derive_topology(std::move(dual), std::move(cells));
}

PolygonMesh build_remapped_hexagonal(int level) {
  return remapped_hexagonal_mesh(grid_resolution(level));
}

PolygonMesh nonconvex_octagonal_mesh(int r, double notch_ratio) {
  check_resolution(r);
  if (!(notch_ratio > 0.0 && notch_ratio < 0.5))
    throw ConfigError("notch ratio must lie in (0, 0.5), got " + std::to_string(notch_ratio));
  const double s = 1.0 / r;
  const double d = notch_ratio * s;
  const int n_grid = (r + 1) * (r + 1);
  const int n_horizontal = r * (r + 1);

  std::vector<Point2> vertices;
  vertices.reserve(n_grid + 2 * n_horizontal);
  for (int j = 0; j <= r; ++j)
    for (int i = 0; i <= r; ++i) vertices.push_back({i * s, j * s});
  // midpoints of horizontal edges, shifted in y; direction alternates by column
  for (int j = 0; j <= r; ++j) {
    for (int i = 0; i < r; ++i) {
      const double shift = (j == 0 || j == r) ? 0.0 : (i % 2 == 0 ? d : -d);
      vertices.push_back({(i + 0.5) * s, j * s + shift});
    }
  }
  // midpoints of vertical edges, shifted in x; direction alternates by row
  for (int j = 0; j < r; ++j) {
    for (int i = 0; i <= r; ++i) {
      const double shift = (i == 0 || i == r) ? 0.0 : (j % 2 == 0 ? d : -d);
      vertices.push_back({i * s + shift, (j + 0.5) * s});
    }
  }

  auto hmid = [&](int i, int j) { return n_grid + j * r + i; };
  auto vmid = [&](int i, int j) { return n_grid + n_horizontal + j * (r + 1) + i; };
  std::vector<std::vector<int>> cells;
  cells.reserve(r * r);
  for (int j = 0; j < r; ++j) {
    for (int i = 0; i < r; ++i) {
      cells.push_back({grid_id(r, i, j), hmid(i, j), grid_id(r, i + 1, j), vmid(i + 1, j),
                       grid_id(r, i + 1, j + 1), hmid(i, j + 1), grid_id(r, i, j + 1), vmid(i, j)});
    }
  }
  return derive_topology(std::move(vertices), std::move(cells));
}

PolygonMesh build_nonconvex_octagonal(int level, double notch_ratio) {
  return nonconvex_octagonal_mesh(grid_resolution(level), notch_ratio);
}

PolygonMesh randomized_quadrilateral_mesh(int r, std::uint64_t seed, double box_fraction) {
  check_resolution(r);
  if (!(box_fraction >= 0.0 && box_fraction < 1.0))
    throw ConfigError("perturbation box fraction must lie in [0, 1)");
  constexpr int kMaxAttempts = 32;
  const double s = 1.0 / r;
  const double half_box = 0.5 * box_fraction * s;

  std::vector<int> attempt((r + 1) * (r + 1), 0);
  std::vector<Point2> vertices((r + 1) * (r + 1));
  auto place = [&](int i, int j) {
    const int id = grid_id(r, i, j);
    Point2 p{i * s, j * s};
    const bool interior = i > 0 && j > 0 && i < r && j < r;
    if (interior && half_box > 0.0) {
      const auto key = static_cast<std::uint64_t>(id) * kMaxAttempts + attempt[id];
      SplitMix64 rng = SplitMix64::stream(seed, key);
      p.x += (2.0 * rng.uniform() - 1.0) * half_box;
      p.y += (2.0 * rng.uniform() - 1.0) * half_box;
    }
    vertices[id] = p;
  };
  for (int j = 0; j <= r; ++j)
    for (int i = 0; i <= r; ++i) place(i, j);

  std::vector<std::vector<int>> cells;
  cells.reserve(r * r);
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < r; ++i)
      cells.push_back({grid_id(r, i, j), grid_id(r, i + 1, j), grid_id(r, i + 1, j + 1), grid_id(r, i, j + 1)});

  // redraw the corners of any folded quad
  for (int pass = 0;; ++pass) {
    bool clean = true;
    for (const auto& cell : cells) {
      std::vector<Point2> quad;
      for (int v : cell) quad.push_back(vertices[v]);
      if (is_simple_polygon(quad) && signed_area(quad) > 0.0) continue;
      clean = false;
      for (int v : cell) {
        const int i = v % (r + 1), j = v / (r + 1);
        if (i == 0 || j == 0 || i == r || j == r) continue;
        if (++attempt[v] >= kMaxAttempts)
          throw MeshError("randomized quadrilateral: no valid perturbation after retries");
        place(i, j);
      }
    }
    if (clean) break;
    if (pass > kMaxAttempts) throw MeshError("randomized quadrilateral: retry budget exhausted");
  }
  return derive_topology(std::move(vertices), std::move(cells));
}

PolygonMesh build_randomized_quadrilateral(int level, std::uint64_t seed, double box_fraction) {
  return randomized_quadrilateral_mesh(grid_resolution(level), seed, box_fraction);
}

std::string family_name(MeshFamily family) {
  switch (family) {
    case MeshFamily::CrissCross: return "crisscross";
    case MeshFamily::Hexagonal: return "hexagonal";
    case MeshFamily::Octagonal: return "octagonal";
    case MeshFamily::RandomQuad: return "randomquad";
  }
  return "unknown";
}

MeshFamily parse_family(const std::string& name) {
  if (name == "crisscross") return MeshFamily::CrissCross;
  if (name == "hexagonal") return MeshFamily::Hexagonal;
  if (name == "octagonal") return MeshFamily::Octagonal;
  if (name == "randomquad") return MeshFamily::RandomQuad;
  throw ConfigError("unknown mesh family '" + name +
                    "' (expected crisscross, hexagonal, octagonal or randomquad)");
}

PolygonMesh build_family(MeshFamily family, int level, const FamilyOptions& options) {
  switch (family) {
    case MeshFamily::CrissCross: return build_criss_cross(level);
    case MeshFamily::Hexagonal: return build_remapped_hexagonal(level);
    case MeshFamily::Octagonal: return build_nonconvex_octagonal(level, options.notch_ratio);
    case MeshFamily::RandomQuad:
      return build_randomized_quadrilateral(level, options.seed, options.box_fraction);
  }
  throw ConfigError("unknown mesh family");
}

}  // namespace ncvem
