#include "bbm/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <string>

#include <Eigen/LU>

#include "bbm/errors.hpp"

namespace bbm {

bool Rectangle::on_boundary(const Vec2& p, double tol) const {
  const bool in_x = p.x() >= x0 - tol && p.x() <= x1 + tol;
  const bool in_y = p.y() >= y0 - tol && p.y() <= y1 + tol;
  if (!in_x || !in_y) return false;
  return std::abs(p.x() - x0) <= tol || std::abs(p.x() - x1) <= tol ||
         std::abs(p.y() - y0) <= tol || std::abs(p.y() - y1) <= tol;
}

Mesh::Mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> cells,
           const Rectangle& bounds)
    : vertices_(std::move(vertices)), cells_(std::move(cells)), bounds_(bounds) {
  const int nv = num_vertices();
  for (int c = 0; c < num_cells(); ++c) {
    for (int v : cells_[c]) {
      if (v < 0 || v >= nv) throw ConfigError("mesh: cell " + std::to_string(c) + " references invalid vertex");
    }
    if (cell_area(c) <= 0.0) {
      throw ConfigError("mesh: cell " + std::to_string(c) + " has non-positive signed area");
    }
  }
  build_edges();
}

void Mesh::build_edges() {
  std::map<std::pair<int, int>, int> index;
  std::vector<std::vector<std::pair<int, int>>> owners;  // (cell, local edge)
  cell_edges_.resize(cells_.size());
  for (int c = 0; c < num_cells(); ++c) {
    for (int k = 0; k < 3; ++k) {
      const int a = cells_[c][k];
      const int b = cells_[c][(k + 1) % 3];
      const auto key = std::minmax(a, b);
      auto [it, inserted] = index.try_emplace({key.first, key.second}, num_edges());
      if (inserted) {
        edges_.push_back({key.first, key.second});
        owners.emplace_back();
      }
      cell_edges_[c][k] = it->second;
      owners[it->second].emplace_back(c, k);
    }
  }

  h_max_ = 0.0;
  for (const auto& e : edges_) {
    h_max_ = std::max(h_max_, (vertices_[e[1]] - vertices_[e[0]]).norm());
  }

  for (int e = 0; e < num_edges(); ++e) {
    if (owners[e].size() > 2) throw ConfigError("mesh: edge shared by more than two cells");
    if (owners[e].size() != 1) continue;
    const auto [c, k] = owners[e][0];
    BoundaryEdge be;
    be.vertices = {cells_[c][k], cells_[c][(k + 1) % 3]};
    be.cell = c;
    be.local_edge = k;
    be.edge = e;
    const Vec2 d = vertices_[be.vertices[1]] - vertices_[be.vertices[0]];
    be.length = d.norm();
    // Counterclockwise cell: the outward normal is the tangent rotated clockwise.
    be.normal = Vec2(d.y(), -d.x()) / be.length;
    boundary_edges_.push_back(be);
  }
}

CellGeometry Mesh::geometry(int c) const {
  const auto& t = cells_[c];
  CellGeometry g;
  g.origin = vertices_[t[0]];
  g.jacobian.col(0) = vertices_[t[1]] - vertices_[t[0]];
  g.jacobian.col(1) = vertices_[t[2]] - vertices_[t[0]];
  g.det = g.jacobian.determinant();
  g.inv_jacobian = g.jacobian.inverse();
  return g;
}

double Mesh::cell_area(int c) const {
  const auto& t = cells_[c];
  const Vec2 a = vertices_[t[1]] - vertices_[t[0]];
  const Vec2 b = vertices_[t[2]] - vertices_[t[0]];
  return 0.5 * (a.x() * b.y() - a.y() * b.x());
}

Vec2 Mesh::centroid(int c) const {
  const auto& t = cells_[c];
  return (vertices_[t[0]] + vertices_[t[1]] + vertices_[t[2]]) / 3.0;
}

namespace {

bool contains(const CellGeometry& g, const Vec2& p, double tol) {
  const Vec2 ref = g.to_reference(p);
  return ref.x() >= -tol && ref.y() >= -tol && ref.x() + ref.y() <= 1.0 + tol;
}

}  // namespace

std::optional<int> Mesh::locate_brute_force(const Vec2& p, double tol) const {
  for (int c = 0; c < num_cells(); ++c) {
    if (contains(geometry(c), p, tol)) return c;
  }
  return std::nullopt;
}

std::optional<int> Mesh::locate(const Vec2& p, double tol) const {
  if (nx_ <= 0) return locate_brute_force(p, tol);
  const double dx = bounds_.width() / nx_;
  const double dy = bounds_.height() / ny_;
  const int i0 = static_cast<int>(std::floor((p.x() - bounds_.x0) / dx));
  const int j0 = static_cast<int>(std::floor((p.y() - bounds_.y0) / dy));
  // Points on square boundaries may belong to a neighbouring square.
  for (int j = j0 - 1; j <= j0 + 1; ++j) {
    for (int i = i0 - 1; i <= i0 + 1; ++i) {
      if (i < 0 || j < 0 || i >= nx_ || j >= ny_) continue;
      for (int half = 0; half < 2; ++half) {
        const int c = 2 * (j * nx_ + i) + half;
        if (contains(geometry(c), p, tol)) return c;
      }
    }
  }
  return std::nullopt;
}

void Mesh::write_text(std::ostream& os) const {
  const auto old_precision = os.precision(17);
  os << "vertices " << num_vertices() << " cells " << num_cells() << '\n';
  for (const auto& v : vertices_) os << v.x() << ' ' << v.y() << '\n';
  for (const auto& t : cells_) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  os.precision(old_precision);
}

Mesh structured_rect_mesh(int nx, int ny, const Rectangle& bounds) {
  if (nx < 1 || ny < 1) throw ConfigError("structured_rect_mesh: nx and ny must be >= 1");
  if (!(bounds.x1 > bounds.x0) || !(bounds.y1 > bounds.y0)) {
    throw ConfigError("structured_rect_mesh: empty or inverted bounds");
  }
  std::vector<Vec2> vertices;
  vertices.reserve(static_cast<size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    // Hit the far edges exactly rather than accumulating rounding.
    const double y = j == ny ? bounds.y1 : bounds.y0 + bounds.height() * j / ny;
    for (int i = 0; i <= nx; ++i) {
      const double x = i == nx ? bounds.x1 : bounds.x0 + bounds.width() * i / nx;
      vertices.emplace_back(x, y);
    }
  }
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  std::vector<std::array<int, 3>> cells;
  cells.reserve(static_cast<size_t>(2) * nx * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int v00 = id(i, j), v10 = id(i + 1, j), v01 = id(i, j + 1), v11 = id(i + 1, j + 1);
      cells.push_back({v00, v10, v11});
      cells.push_back({v00, v11, v01});
    }
  }
  Mesh mesh(std::move(vertices), std::move(cells), bounds);
  mesh.nx_ = nx;
  mesh.ny_ = ny;
  return mesh;
}

std::vector<BoundaryEdge> boundary_edges_of(const Mesh& mesh) { return mesh.boundary_edges(); }

}  // namespace bbm
