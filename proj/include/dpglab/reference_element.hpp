// Polynomial bases on the reference triangle conv{(0,0),(1,0),(0,1)}.
//
// Local vertex j of the reference triangle is (0,0), (1,0), (0,1) for j = 0, 1, 2 and
// local edge j runs from vertex j to vertex (j+1)%3, parameterised by t in [0,1].

#ifndef DPGLAB_REFERENCE_ELEMENT_HPP
#define DPGLAB_REFERENCE_ELEMENT_HPP

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "dpglab/quadrature.hpp"

namespace dpglab
{

  inline constexpr int dim_polynomials(int degree) { return degree < 0 ? 0 : (degree + 1) * (degree + 2) / 2; }
  inline constexpr int dim_raviart_thomas(int degree) { return (degree + 1) * (degree + 3); }

  namespace reference
  {
    Eigen::Vector2d vertex(int j);
    /// Point on local edge j at parameter t.
    Eigen::Vector2d edge_point(int j, double t);
    /// Outward unit normal of local edge j.
    Eigen::Vector2d edge_normal(int j);
    double edge_length(int j);
  } // namespace reference

  /// Legendre polynomials P_0..P_n evaluated at 2t-1, t in [0,1].
  Eigen::VectorXd shifted_legendre(int n, double t);

  /// L2-orthonormal (Dubiner) basis of P^p on the reference triangle, ordered by total
  /// degree: the first dim_polynomials(q) functions span P^q for every q <= p, and
  /// function 0 is the constant sqrt(2).
  class ScalarBasis
  {
  public:
    explicit ScalarBasis(int degree);

    int degree() const { return m_degree; }
    int size() const { return dim_polynomials(m_degree); }

    Eigen::VectorXd values(const Eigen::Vector2d & xhat) const;
    /// size() x 2 matrix of reference gradients.
    Eigen::MatrixX2d gradients(const Eigen::Vector2d & xhat) const;

  private:
    void evaluate(const Eigen::Vector2d & xhat, Eigen::VectorXd * values, Eigen::MatrixX2d * gradients) const;

    int m_degree;
    std::vector<std::array<int, 2>> m_indices;
    Eigen::VectorXd m_scaling;
  };

  /// Nodal Lagrange basis of P^m, m >= 1, on equispaced nodes: the three vertices, then
  /// m-1 nodes per local edge in the direction of the edge, then interior nodes.
  class LagrangeBasis
  {
  public:
    explicit LagrangeBasis(int degree);

    int degree() const { return m_degree; }
    int size() const { return dim_polynomials(m_degree); }
    /// Number of nodes on the element boundary, 3*m.
    int num_boundary_nodes() const { return 3 * m_degree; }
    /// Index of the i-th interior node (i = 0..m-2) of local edge j.
    int edge_node(int j, int i) const { return 3 + j * (m_degree - 1) + i; }

    const std::vector<Eigen::Vector2d> & nodes() const { return m_nodes; }
    Eigen::VectorXd values(const Eigen::Vector2d & xhat) const;
    Eigen::MatrixX2d gradients(const Eigen::Vector2d & xhat) const;

  private:
    int m_degree;
    ScalarBasis m_modal;
    std::vector<Eigen::Vector2d> m_nodes;
    Eigen::MatrixXd m_coefficients; // modal -> nodal
  };

  /// Raviart-Thomas space RT^p = P^p(T)^2 + x P~^p(T) with the nodal basis dual to
  ///   - edge moments  int_{e_j} (tau . n_j) P_m(2t-1) ds,  m = 0..p, per local edge j;
  ///   - interior moments int_T tau . (phi_l e_c), phi_l in P^{p-1} (orthonormal), c = x,y.
  /// Ordering: edge j moment m at index j*(p+1)+m, then interior moments at
  /// 3(p+1) + 2l + c.
  class RTBasis
  {
  public:
    explicit RTBasis(int degree);

    int degree() const { return m_degree; }
    int size() const { return dim_raviart_thomas(m_degree); }
    int num_edge_dofs() const { return 3 * (m_degree + 1); }
    int num_interior_dofs() const { return size() - num_edge_dofs(); }

    /// size() x 2 matrix of values.
    Eigen::MatrixX2d values(const Eigen::Vector2d & xhat) const;
    Eigen::VectorXd divergences(const Eigen::Vector2d & xhat) const;

    /// Degrees of freedom of a vector field given by its values on the reference element.
    template <typename VectorField>
    Eigen::VectorXd dofs(const VectorField & tau) const;

  private:
    // Spanning set (before the change of basis to the nodal basis).
    Eigen::MatrixX2d span_values(const Eigen::Vector2d & xhat) const;
    Eigen::VectorXd span_divergences(const Eigen::Vector2d & xhat) const;

    int m_degree;
    ScalarBasis m_scalar;
    Eigen::MatrixXd m_coefficients; // span -> nodal
  };

  template <typename VectorField>
  Eigen::VectorXd RTBasis::dofs(const VectorField & tau) const
  {
    const int p = m_degree;
    Eigen::VectorXd d(size());
    const EdgeRule er = edge_quadrature(2 * p + 8);
    for (int j = 0; j < 3; ++j) {
      for (int m = 0; m <= p; ++m) {
        d(j * (p + 1) + m) = 0.0;
      }
      for (int q = 0; q < er.size(); ++q) {
        const Eigen::Vector2d v = tau(reference::edge_point(j, er.points[q]));
        const Eigen::VectorXd leg = shifted_legendre(p, er.points[q]);
        const double w = er.weights[q] * reference::edge_length(j) * v.dot(reference::edge_normal(j));
        for (int m = 0; m <= p; ++m) {
          d(j * (p + 1) + m) += w * leg(m);
        }
      }
    }
    if (p > 0) {
      const ScalarBasis inner(p - 1);
      const QuadratureRule tr = triangle_quadrature(2 * p + 8);
      d.tail(num_interior_dofs()).setZero();
      for (int q = 0; q < tr.size(); ++q) {
        const Eigen::Vector2d v = tau(tr.points[q]);
        const Eigen::VectorXd phi = inner.values(tr.points[q]);
        for (int l = 0; l < inner.size(); ++l) {
          d(num_edge_dofs() + 2 * l) += tr.weights[q] * v.x() * phi(l);
          d(num_edge_dofs() + 2 * l + 1) += tr.weights[q] * v.y() * phi(l);
        }
      }
    }
    return d;
  }

} // namespace dpglab

#endif
