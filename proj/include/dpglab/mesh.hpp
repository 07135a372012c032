// Conforming triangulations of the unit square, uniform newest-vertex refinement and
// skeleton (edge) connectivity.

#ifndef DPGLAB_MESH_HPP
#define DPGLAB_MESH_HPP

#include <array>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

namespace dpglab
{

  using Point = Eigen::Vector2d;

  /// Affine map from the reference triangle conv{(0,0),(1,0),(0,1)} onto an element,
  /// x = jacobian * xhat + translation.
  struct AffineMap
  {
    Eigen::Matrix2d jacobian;
    Eigen::Matrix2d inverse_transpose;
    Eigen::Vector2d translation;
    double det;

    Point map(const Point & xhat) const { return jacobian * xhat + translation; }
    Point inverse(const Point & x) const { return inverse_transpose.transpose() * (x - translation); }
    /// Physical gradient from a reference gradient.
    Eigen::Vector2d gradient(const Eigen::Vector2d & ref_grad) const { return inverse_transpose * ref_grad; }
  };

  /// Edge connectivity of a mesh.
  ///
  /// Every edge stores its vertices with vertices[0] < vertices[1] (this fixes the edge
  /// parameterisation t in [0,1] from vertices[0] to vertices[1]). The global unit normal
  /// points out of the adjacent element with the lower index; on the boundary it is the
  /// outward normal of the domain. Local edge j of a triangle (v0,v1,v2) runs from v_j
  /// to v_{(j+1)%3}.
  struct Skeleton
  {
    std::vector<std::array<int, 2>> edge_vertices;
    /// Adjacent elements, lower index first; second entry is -1 on the boundary.
    std::vector<std::array<int, 2>> edge_elements;
    std::vector<Eigen::Vector2d> normals;
    std::vector<double> lengths;
    std::vector<bool> boundary_edge;
    std::vector<bool> boundary_vertex;

    std::vector<std::array<int, 3>> element_edges;
    /// s_{T,E} = n_T . n_E for local edge j of element T.
    std::vector<std::array<int, 3>> element_edge_signs;
    /// True when local edge j runs against the global edge parameterisation.
    std::vector<std::array<bool, 3>> element_edge_reversed;

    int num_edges() const { return static_cast<int>(edge_vertices.size()); }
    int num_boundary_edges() const;
  };

  Skeleton build_skeleton(const std::vector<Point> & vertices, const std::vector<std::array<int, 3>> & triangles);

  class Mesh
  {
  public:
    /// Triangles must be counterclockwise. `parents` maps each element to its parent on
    /// the previous level (empty for a root mesh).
    Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> triangles, int level = 1,
         std::vector<int> parents = {});

    int num_vertices() const { return static_cast<int>(m_vertices.size()); }
    int num_elements() const { return static_cast<int>(m_triangles.size()); }
    int num_edges() const { return m_skeleton.num_edges(); }
    int level() const { return m_level; }

    const std::vector<Point> & vertices() const { return m_vertices; }
    const std::vector<std::array<int, 3>> & triangles() const { return m_triangles; }
    const std::array<int, 3> & triangle(int t) const { return m_triangles[t]; }
    const Point & vertex(int v) const { return m_vertices[v]; }
    const std::vector<int> & parents() const { return m_parents; }
    const Skeleton & skeleton() const { return m_skeleton; }
    const AffineMap & geometry(int t) const { return m_maps[t]; }

    double area(int t) const { return 0.5 * m_maps[t].det; }
    double diameter(int t) const;
    /// max_T diam(T)^2 / |T|
    double shape_regularity() const;
    /// max_T diam(T)
    double mesh_size() const;

  private:
    std::vector<Point> m_vertices;
    std::vector<std::array<int, 3>> m_triangles;
    int m_level;
    std::vector<int> m_parents;
    Skeleton m_skeleton;
    std::vector<AffineMap> m_maps;
  };

  /// The 16-element criss-cross triangulation of (0,1)^2: each of the 2x2 subsquares is
  /// split into four triangles through its centre. Every triangle is stored as
  /// (a, b, c) with refinement edge a-b and newest vertex c = the subsquare centre.
  Mesh build_initial_mesh();

  /// Two newest-vertex bisections per triangle: (a, b, c) is cut at the midpoint m of
  /// a-b into (c, a, m) and (b, c, m), and both halves are cut once more. All edges of
  /// the parent are halved, so the result is conforming; the four children are
  /// congruent and similar to the parent. Child c of element t gets index 4t+c.
  Mesh refine_uniform(const Mesh & mesh);

  /// Initial mesh refined level-1 times.
  Mesh mesh_at_level(int level);

  AffineMap element_geometry(const std::vector<Point> & vertices, const std::array<int, 3> & triangle);
  inline const AffineMap & element_geometry(const Mesh & mesh, int t) { return mesh.geometry(t); }

  /// Plain-text dump: one "x y" line per vertex, one "i j k" line per triangle (0-based).
  void write_nodes(const Mesh & mesh, std::ostream & out);
  void write_elements(const Mesh & mesh, std::ostream & out);

} // namespace dpglab

#endif
