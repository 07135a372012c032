#include "dpglab/mesh.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace dpglab
{

  int Skeleton::num_boundary_edges() const
  {
    return static_cast<int>(std::count(boundary_edge.begin(), boundary_edge.end(), true));
  }

  AffineMap element_geometry(const std::vector<Point> & vertices, const std::array<int, 3> & triangle)
  {
    const Point & a = vertices[triangle[0]];
    const Point & b = vertices[triangle[1]];
    const Point & c = vertices[triangle[2]];
    AffineMap map;
    map.jacobian.col(0) = b - a;
    map.jacobian.col(1) = c - a;
    map.translation = a;
    map.det = map.jacobian.determinant();
    map.inverse_transpose = map.jacobian.inverse().transpose();
    return map;
  }

  Skeleton build_skeleton(const std::vector<Point> & vertices, const std::vector<std::array<int, 3>> & triangles)
  {
    Skeleton sk;
    const int n_elem = static_cast<int>(triangles.size());
    sk.element_edges.resize(n_elem);
    sk.element_edge_signs.resize(n_elem);
    sk.element_edge_reversed.resize(n_elem);

    std::map<std::pair<int, int>, int> lookup;
    for (int t = 0; t < n_elem; ++t) {
      for (int j = 0; j < 3; ++j) {
        const int a = triangles[t][j];
        const int b = triangles[t][(j + 1) % 3];
        const auto key = std::minmax(a, b);
        auto [it, inserted] = lookup.try_emplace(key, sk.num_edges());
        if (inserted) {
          sk.edge_vertices.push_back({key.first, key.second});
          sk.edge_elements.push_back({t, -1});
        } else {
          auto & adj = sk.edge_elements[it->second];
          if (adj[1] != -1) {
            throw std::invalid_argument("build_skeleton: edge shared by more than two triangles");
          }
          adj[1] = t;
        }
        sk.element_edges[t][j] = it->second;
        sk.element_edge_reversed[t][j] = a > b;
      }
    }

    const int n_edges = sk.num_edges();
    sk.normals.resize(n_edges);
    sk.lengths.resize(n_edges);
    sk.boundary_edge.resize(n_edges);
    sk.boundary_vertex.assign(vertices.size(), false);
    for (int e = 0; e < n_edges; ++e) {
      sk.boundary_edge[e] = sk.edge_elements[e][1] == -1;
      if (sk.boundary_edge[e]) {
        sk.boundary_vertex[sk.edge_vertices[e][0]] = true;
        sk.boundary_vertex[sk.edge_vertices[e][1]] = true;
      }
    }

    // Outward normal of the lower-index neighbour fixes the global normal.
    for (int t = 0; t < n_elem; ++t) {
      for (int j = 0; j < 3; ++j) {
        const Point d = vertices[triangles[t][(j + 1) % 3]] - vertices[triangles[t][j]];
        const Eigen::Vector2d n_out = Eigen::Vector2d(d.y(), -d.x()).normalized();
        const int e = sk.element_edges[t][j];
        if (sk.edge_elements[e][0] == t) {
          sk.normals[e] = n_out;
          sk.lengths[e] = d.norm();
          sk.element_edge_signs[t][j] = 1;
        } else {
          sk.element_edge_signs[t][j] = -1;
        }
      }
    }
    return sk;
  }

  Mesh::Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> triangles, int level, std::vector<int> parents)
      : m_vertices(std::move(vertices)), m_triangles(std::move(triangles)), m_level(level), m_parents(std::move(parents))
  {
    m_maps.reserve(m_triangles.size());
    for (std::size_t t = 0; t < m_triangles.size(); ++t) {
      m_maps.push_back(element_geometry(m_vertices, m_triangles[t]));
      if (!(m_maps.back().det > 0.0)) {
        throw std::invalid_argument("Mesh: triangle " + std::to_string(t) + " is not counterclockwise");
      }
    }
    m_skeleton = build_skeleton(m_vertices, m_triangles);
  }

  double Mesh::diameter(int t) const
  {
    const auto & tri = m_triangles[t];
    double d = 0.0;
    for (int j = 0; j < 3; ++j) {
      d = std::max(d, (m_vertices[tri[j]] - m_vertices[tri[(j + 1) % 3]]).norm());
    }
    return d;
  }

  double Mesh::shape_regularity() const
  {
    double kappa = 0.0;
    for (int t = 0; t < num_elements(); ++t) {
      const double d = diameter(t);
      kappa = std::max(kappa, d * d / area(t));
    }
    return kappa;
  }

  double Mesh::mesh_size() const
  {
    double h = 0.0;
    for (int t = 0; t < num_elements(); ++t) {
      h = std::max(h, diameter(t));
    }
    return h;
  }

  Mesh build_initial_mesh()
  {
    std::vector<Point> vertices;
    for (int j = 0; j < 3; ++j) {
      for (int i = 0; i < 3; ++i) {
        vertices.emplace_back(0.5 * i, 0.5 * j);
      }
    }
    std::vector<std::array<int, 3>> triangles;
    for (int sy = 0; sy < 2; ++sy) {
      for (int sx = 0; sx < 2; ++sx) {
        const int centre = static_cast<int>(vertices.size());
        vertices.emplace_back(0.25 + 0.5 * sx, 0.25 + 0.5 * sy);
        const int a = 3 * sy + sx;
        const std::array<int, 4> corners{a, a + 1, a + 4, a + 3};
        for (int k = 0; k < 4; ++k) {
          triangles.push_back({corners[k], corners[(k + 1) % 4], centre});
        }
      }
    }
    return Mesh(std::move(vertices), std::move(triangles), 1);
  }

  Mesh refine_uniform(const Mesh & mesh)
  {
    const Skeleton & sk = mesh.skeleton();
    std::vector<Point> vertices = mesh.vertices();
    const int n_vertices = mesh.num_vertices();
    for (int e = 0; e < sk.num_edges(); ++e) {
      vertices.push_back(0.5 * (mesh.vertex(sk.edge_vertices[e][0]) + mesh.vertex(sk.edge_vertices[e][1])));
    }

    std::vector<std::array<int, 3>> triangles;
    std::vector<int> parents;
    triangles.reserve(4 * mesh.num_elements());
    parents.reserve(4 * mesh.num_elements());
    for (int t = 0; t < mesh.num_elements(); ++t) {
      const auto & v = mesh.triangle(t);
      // m[j] is the midpoint of local edge j (v_j -> v_{j+1}); edge 0 is the refinement edge.
      std::array<int, 3> m;
      for (int j = 0; j < 3; ++j) {
        m[j] = n_vertices + sk.element_edges[t][j];
      }
      triangles.push_back({m[0], v[2], m[2]});
      triangles.push_back({v[0], m[0], m[2]});
      triangles.push_back({m[0], v[1], m[1]});
      triangles.push_back({v[2], m[0], m[1]});
      parents.insert(parents.end(), 4, t);
    }
    return Mesh(std::move(vertices), std::move(triangles), mesh.level() + 1, std::move(parents));
  }

  Mesh mesh_at_level(int level)
  {
    if (level < 1) {
      throw std::invalid_argument("mesh_at_level: level must be >= 1");
    }
    Mesh mesh = build_initial_mesh();
    while (mesh.level() < level) {
      mesh = refine_uniform(mesh);
    }
    return mesh;
  }

  void write_nodes(const Mesh & mesh, std::ostream & out)
  {
    const auto precision = out.precision(17);
    for (const auto & x : mesh.vertices()) {
      out << x.x() << ' ' << x.y() << '\n';
    }
    out.precision(precision);
  }

  void write_elements(const Mesh & mesh, std::ostream & out)
  {
    for (const auto & t : mesh.triangles()) {
      out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    }
  }

} // namespace dpglab
