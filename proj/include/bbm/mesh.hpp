#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Core>

namespace bbm {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Axis-aligned rectangle [x0,x1] x [y0,y1].
struct Rectangle {
  double x0 = 0.0;
  double x1 = 1.0;
  double y0 = 0.0;
  double y1 = 1.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
  double perimeter() const { return 2.0 * (width() + height()); }
  bool on_boundary(const Vec2& p, double tol) const;
};

/// Affine map from the reference triangle (0,0),(1,0),(0,1) onto a cell.
struct CellGeometry {
  Vec2 origin;
  Mat2 jacobian;      // columns: v1 - v0, v2 - v0
  Mat2 inv_jacobian;
  double det = 0.0;   // twice the signed area

  Vec2 map(const Vec2& ref) const { return origin + jacobian * ref; }
  Vec2 to_reference(const Vec2& x) const { return inv_jacobian * (x - origin); }
  /// Physical gradient from a reference gradient: J^{-T} g.
  Vec2 gradient(const Vec2& ref_grad) const { return inv_jacobian.transpose() * ref_grad; }
};

struct BoundaryEdge {
  std::array<int, 2> vertices;  // counterclockwise with respect to the owning cell
  int cell = -1;
  int local_edge = -1;          // local edge k joins local vertices k and k+1
  int edge = -1;                // global edge index
  Vec2 normal;                  // outward unit normal
  double length = 0.0;
};

/// Conforming triangulation of a rectangle. Immutable after construction.
class Mesh {
 public:
  Mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> cells, const Rectangle& bounds);

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_cells() const { return static_cast<int>(cells_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const Vec2& vertex(int v) const { return vertices_[v]; }
  const std::array<int, 3>& cell(int c) const { return cells_[c]; }
  const std::array<int, 3>& cell_edges(int c) const { return cell_edges_[c]; }
  const std::array<int, 2>& edge(int e) const { return edges_[e]; }
  const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_edges_; }
  const Rectangle& bounds() const { return bounds_; }

  CellGeometry geometry(int c) const;
  double cell_area(int c) const;
  Vec2 centroid(int c) const;
  double h_max() const { return h_max_; }

  /// Cell containing p (barycentric tolerance tol), or nullopt.
  std::optional<int> locate(const Vec2& p, double tol = 1e-12) const;

  /// Text dump: "vertices N cells M", then N lines "x y", then M lines "i j k".
  void write_text(std::ostream& os) const;

  /// Grid size when built by structured_rect_mesh, otherwise {0, 0}.
  std::array<int, 2> structured_size() const { return {nx_, ny_}; }

 private:
  friend Mesh structured_rect_mesh(int nx, int ny, const Rectangle& bounds);

  void build_edges();
  std::optional<int> locate_brute_force(const Vec2& p, double tol) const;

  std::vector<Vec2> vertices_;
  std::vector<std::array<int, 3>> cells_;
  std::vector<std::array<int, 3>> cell_edges_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<BoundaryEdge> boundary_edges_;
  Rectangle bounds_;
  double h_max_ = 0.0;
  int nx_ = 0;
  int ny_ = 0;
};

/// Uniform triangulation: each of nx*ny subrectangles is cut along its
/// bottom-left to top-right diagonal.
Mesh structured_rect_mesh(int nx, int ny, const Rectangle& bounds);

std::vector<BoundaryEdge> boundary_edges_of(const Mesh& mesh);

}  // namespace bbm
