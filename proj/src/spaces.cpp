#include "dpglab/spaces.hpp"

#include <cmath>
#include <stdexcept>

#include "dpglab/quadrature.hpp"

namespace dpglab
{

  std::string_view to_string(TrialVariant variant)
  {
    return variant == TrialVariant::Augmented ? "augmented" : "standard";
  }

  DofMap::DofMap(const Mesh & mesh, int degree, TrialVariant variant)
      : m_degree(degree), m_variant(variant), m_num_elements(mesh.num_elements()), m_num_edges(mesh.num_edges())
  {
    if (degree < 0) {
      throw std::invalid_argument("DofMap: negative degree");
    }
    const Skeleton & sk = mesh.skeleton();
    const int p = degree;

    m_vertex_dof.assign(mesh.num_vertices(), -1);
    int next = uhat_offset();
    for (int v = 0; v < mesh.num_vertices(); ++v) {
      if (!sk.boundary_vertex[v]) {
        m_vertex_dof[v] = next++;
      }
    }
    m_edge_dof_start.assign(m_num_edges, -1);
    for (int e = 0; e < m_num_edges; ++e) {
      if (!sk.boundary_edge[e]) {
        m_edge_dof_start[e] = next;
        next += p;
      }
    }
    m_num_uhat = next - uhat_offset();

    const int np = dim_polynomials(p);
    m_gather.resize(m_num_elements);
    for (int t = 0; t < m_num_elements; ++t) {
      auto & g = m_gather[t];
      g.reserve(local_size());
      for (int i = 0; i < local_u(); ++i) {
        g.push_back(u_offset() + t * local_u() + i);
      }
      for (int i = 0; i < 2 * np; ++i) {
        g.push_back(sigma_offset() + t * local_sigma() + i);
      }
      for (int j = 0; j < 3; ++j) {
        g.push_back(m_vertex_dof[mesh.triangle(t)[j]]);
      }
      for (int j = 0; j < 3; ++j) {
        const int e = sk.element_edges[t][j];
        const bool rev = sk.element_edge_reversed[t][j];
        for (int i = 0; i < p; ++i) {
          g.push_back(edge_node_dof(e, rev ? p - 1 - i : i));
        }
      }
      for (int j = 0; j < 3; ++j) {
        const int e = sk.element_edges[t][j];
        for (int m = 0; m <= p; ++m) {
          g.push_back(sigmahat_offset() + e * (p + 1) + m);
        }
      }
    }
  }

  int DofMap::edge_node_dof(int e, int i) const
  {
    const int start = m_edge_dof_start[e];
    return start < 0 ? -1 : start + i;
  }

  BrokenField make_broken_field(const Mesh & mesh, int degree, int components)
  {
    BrokenField f;
    f.degree = degree;
    f.components = components;
    f.values = Eigen::VectorXd::Zero(mesh.num_elements() * f.local_size());
    return f;
  }

  double evaluate(const BrokenField & field, const ScalarBasis & basis, int t, const Eigen::Vector2d & xhat, int c)
  {
    const int n = dim_polynomials(field.degree);
    return field.element(t).segment(c * n, n).dot(basis.values(xhat));
  }

  namespace
  {
    template <int Components, typename Function>
    BrokenField project(const Mesh & mesh, int degree, const Function & f, int exactness)
    {
      const ScalarBasis basis(degree);
      const QuadratureRule rule = triangle_quadrature(exactness < 0 ? 2 * degree + 6 : exactness);
      std::vector<Eigen::VectorXd> phi;
      for (const auto & x : rule.points) {
        phi.push_back(basis.values(x));
      }
      BrokenField field = make_broken_field(mesh, degree, Components);
      const int n = basis.size();
      for (int t = 0; t < mesh.num_elements(); ++t) {
        const AffineMap & map = mesh.geometry(t);
        auto local = field.element(t);
        for (int q = 0; q < rule.size(); ++q) {
          const auto value = f(map.map(rule.points[q]));
          if constexpr (Components == 1) {
            local += rule.weights[q] * value * phi[q];
          } else {
            for (int c = 0; c < Components; ++c) {
              local.segment(c * n, n) += rule.weights[q] * value(c) * phi[q];
            }
          }
        }
      }
      return field;
    }
  } // namespace

  BrokenField l2_project(const Mesh & mesh, int degree, const ScalarFunction & f, int exactness)
  {
    return project<1>(mesh, degree, f, exactness);
  }

  BrokenField l2_project(const Mesh & mesh, int degree, const VectorFunction & f, int exactness)
  {
    return project<2>(mesh, degree, f, exactness);
  }

  RtField rt_interpolate(const Mesh & mesh, int degree, const VectorFunction & tau, int exactness)
  {
    const int p = degree;
    const int rule_degree = exactness < 0 ? 2 * p + 8 : exactness;
    const Skeleton & sk = mesh.skeleton();
    RtField field;
    field.degree = p;
    field.edge_moments = Eigen::VectorXd::Zero(mesh.num_edges() * (p + 1));

    const EdgeRule er = edge_quadrature(rule_degree);
    for (int e = 0; e < mesh.num_edges(); ++e) {
      const Point & a = mesh.vertex(sk.edge_vertices[e][0]);
      const Point & b = mesh.vertex(sk.edge_vertices[e][1]);
      for (int q = 0; q < er.size(); ++q) {
        const double s = er.points[q];
        const double flux = tau((1.0 - s) * a + s * b).dot(sk.normals[e]);
        field.edge_moments.segment(e * (p + 1), p + 1) += er.weights[q] * sk.lengths[e] * flux * shifted_legendre(p, s);
      }
    }

    const int n_interior = dim_raviart_thomas(p) - 3 * (p + 1);
    field.interior_moments = Eigen::VectorXd::Zero(mesh.num_elements() * n_interior);
    if (p > 0) {
      const ScalarBasis inner(p - 1);
      const QuadratureRule tr = triangle_quadrature(rule_degree);
      for (int t = 0; t < mesh.num_elements(); ++t) {
        const AffineMap & map = mesh.geometry(t);
        const Eigen::Matrix2d pull = map.det * map.inverse_transpose.transpose();
        auto local = field.interior_moments.segment(t * n_interior, n_interior);
        for (int q = 0; q < tr.size(); ++q) {
          const Eigen::Vector2d v = pull * tau(map.map(tr.points[q]));
          const Eigen::VectorXd phi = inner.values(tr.points[q]);
          for (int l = 0; l < inner.size(); ++l) {
            local(2 * l) += tr.weights[q] * v.x() * phi(l);
            local(2 * l + 1) += tr.weights[q] * v.y() * phi(l);
          }
        }
      }
    }
    return field;
  }

  Eigen::VectorXd rt_local_coefficients(const Mesh & mesh, const RtField & field, int t)
  {
    const int p = field.degree;
    const Skeleton & sk = mesh.skeleton();
    const int n_interior = dim_raviart_thomas(p) - 3 * (p + 1);
    Eigen::VectorXd c(dim_raviart_thomas(p));
    for (int j = 0; j < 3; ++j) {
      const int e = sk.element_edges[t][j];
      const int sign = sk.element_edge_signs[t][j];
      const bool rev = sk.element_edge_reversed[t][j];
      for (int m = 0; m <= p; ++m) {
        const double parity = (rev && m % 2 == 1) ? -1.0 : 1.0;
        c(j * (p + 1) + m) = sign * parity * field.edge_moments(e * (p + 1) + m);
      }
    }
    c.tail(n_interior) = field.interior_moments.segment(t * n_interior, n_interior);
    return c;
  }

  RtValue rt_evaluate(const Mesh & mesh, const RTBasis & basis, const RtField & field, int t,
                      const Eigen::Vector2d & xhat)
  {
    const AffineMap & map = mesh.geometry(t);
    const Eigen::VectorXd c = rt_local_coefficients(mesh, field, t);
    const Eigen::Vector2d ref = basis.values(xhat).transpose() * c;
    return {map.jacobian * ref / map.det, basis.divergences(xhat).dot(c) / map.det};
  }

  Eigen::VectorXd trial_interpolant(const Mesh & mesh, const DofMap & dofs, const ScalarFunction & u,
                                    const VectorFunction & sigma)
  {
    const int p = dofs.degree();
    const Skeleton & sk = mesh.skeleton();
    const int exactness = 2 * (p + 1) + 6;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(dofs.size());
    x.segment(dofs.u_offset(), dofs.num_u()) = l2_project(mesh, dofs.u_degree(), u, exactness).values;
    x.segment(dofs.sigma_offset(), dofs.num_sigma()) = l2_project(mesh, p, sigma, exactness).values;

    for (int v = 0; v < mesh.num_vertices(); ++v) {
      if (dofs.vertex_dof(v) >= 0) {
        x(dofs.vertex_dof(v)) = u(mesh.vertex(v));
      }
    }
    const EdgeRule er = edge_quadrature(exactness);
    for (int e = 0; e < mesh.num_edges(); ++e) {
      const Point & a = mesh.vertex(sk.edge_vertices[e][0]);
      const Point & b = mesh.vertex(sk.edge_vertices[e][1]);
      for (int i = 0; i < p; ++i) {
        const int dof = dofs.edge_node_dof(e, i);
        if (dof >= 0) {
          const double s = static_cast<double>(i + 1) / (p + 1);
          x(dof) = u((1.0 - s) * a + s * b);
        }
      }
      const double length = sk.lengths[e];
      for (int q = 0; q < er.size(); ++q) {
        const double s = er.points[q];
        const double flux = sigma((1.0 - s) * a + s * b).dot(sk.normals[e]);
        const Eigen::VectorXd leg = shifted_legendre(p, s);
        for (int m = 0; m <= p; ++m) {
          x(dofs.sigmahat_offset() + e * (p + 1) + m) +=
            er.weights[q] * length * flux * std::sqrt((2.0 * m + 1.0) / length) * leg(m);
        }
      }
    }
    return x;
  }

  double uhat_trace_value(const Mesh & mesh, const DofMap & dofs, const Eigen::VectorXd & coefficients, int e,
                          double s)
  {
    const int m = dofs.degree() + 1;
    const Skeleton & sk = mesh.skeleton();
    // 1D Lagrange polynomials on the nodes i/m, i = 0..m.
    auto lagrange = [m, s](int i) {
      double l = 1.0;
      for (int k = 0; k <= m; ++k) {
        if (k != i) {
          l *= (s - static_cast<double>(k) / m) / (static_cast<double>(i - k) / m);
        }
      }
      return l;
    };
    auto coefficient = [&coefficients](int dof) { return dof < 0 ? 0.0 : coefficients(dof); };
    double value = coefficient(dofs.vertex_dof(sk.edge_vertices[e][0])) * lagrange(0) +
                   coefficient(dofs.vertex_dof(sk.edge_vertices[e][1])) * lagrange(m);
    for (int i = 1; i < m; ++i) {
      value += coefficient(dofs.edge_node_dof(e, i - 1)) * lagrange(i);
    }
    return value;
  }

} // namespace dpglab
