// Global numbering of the trial unknowns (u, sigma, u-hat, sigma-hat), broken polynomial
// fields, the L2 projection onto broken polynomials and the Raviart-Thomas interpolant.

#ifndef DPGLAB_SPACES_HPP
#define DPGLAB_SPACES_HPP

#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "dpglab/coefficients.hpp"
#include "dpglab/mesh.hpp"
#include "dpglab/reference_element.hpp"

namespace dpglab
{

  enum class TrialVariant
  {
    Standard,  ///< u in P^p
    Augmented  ///< u in P^{p+1}
  };

  std::string_view to_string(TrialVariant variant);

  /// Trial unknowns for degree p:
  ///   u         broken P^p (P^{p+1} for the augmented variant), orthonormal reference basis;
  ///   sigma     broken (P^p)^2;
  ///   u-hat     traces of continuous P^{p+1} vanishing on the boundary: one unknown per
  ///             interior vertex and p per interior edge (equispaced edge nodes);
  ///   sigma-hat p+1 per edge (all edges), coefficients of sigma.n_E in the L2(E)
  ///             orthonormal Legendre basis of the global edge parameter.
  ///
  /// Element-local ordering: u, sigma_x, sigma_y, u-hat (LagrangeBasis(p+1) boundary
  /// nodes), sigma-hat (local edge j, moment m at j*(p+1)+m).
  class DofMap
  {
  public:
    DofMap(const Mesh & mesh, int degree, TrialVariant variant);

    int degree() const { return m_degree; }
    TrialVariant variant() const { return m_variant; }
    int u_degree() const { return m_variant == TrialVariant::Augmented ? m_degree + 1 : m_degree; }

    int num_u() const { return m_num_elements * local_u(); }
    int num_sigma() const { return m_num_elements * local_sigma(); }
    int num_uhat() const { return m_num_uhat; }
    int num_sigmahat() const { return m_num_edges * (m_degree + 1); }
    int size() const { return num_u() + num_sigma() + num_uhat() + num_sigmahat(); }

    int u_offset() const { return 0; }
    int sigma_offset() const { return num_u(); }
    int uhat_offset() const { return num_u() + num_sigma(); }
    int sigmahat_offset() const { return uhat_offset() + num_uhat(); }

    int local_u() const { return dim_polynomials(u_degree()); }
    int local_sigma() const { return 2 * dim_polynomials(m_degree); }
    int local_fields() const { return local_u() + local_sigma(); }
    int local_uhat() const { return 3 * (m_degree + 1); }
    int local_sigmahat() const { return 3 * (m_degree + 1); }
    int local_traces() const { return local_uhat() + local_sigmahat(); }
    int local_size() const { return local_fields() + local_traces(); }

    /// Global index per local unknown; -1 for u-hat unknowns on the boundary.
    const std::vector<int> & gather(int t) const { return m_gather[t]; }
    /// u-hat unknown of a vertex (-1 on the boundary).
    int vertex_dof(int v) const { return m_vertex_dof[v]; }
    /// u-hat unknown of the i-th interior node of edge e in the global edge direction.
    int edge_node_dof(int e, int i) const;

  private:
    int m_degree;
    TrialVariant m_variant;
    int m_num_elements;
    int m_num_edges;
    int m_num_uhat = 0;
    std::vector<int> m_vertex_dof;
    std::vector<int> m_edge_dof_start;
    std::vector<std::vector<int>> m_gather;
  };

  /// Coefficients of a broken polynomial field in the mapped orthonormal reference basis,
  /// stored element by element, component by component.
  struct BrokenField
  {
    int degree = 0;
    int components = 1;
    Eigen::VectorXd values;

    int local_size() const { return components * dim_polynomials(degree); }
    auto element(int t) const { return values.segment(t * local_size(), local_size()); }
    auto element(int t) { return values.segment(t * local_size(), local_size()); }
  };

  BrokenField make_broken_field(const Mesh & mesh, int degree, int components);

  /// Value of component c of a broken field on element t at reference point xhat. `basis`
  /// must have the field's degree.
  double evaluate(const BrokenField & field, const ScalarBasis & basis, int t, const Eigen::Vector2d & xhat, int c = 0);

  /// Elementwise L2 projection; with the orthonormal basis the coefficients are the load
  /// integrals int_That f(F_T(xhat)) phi_i(xhat). A negative `exactness` selects 2*degree+6.
  BrokenField l2_project(const Mesh & mesh, int degree, const ScalarFunction & f, int exactness = -1);
  BrokenField l2_project(const Mesh & mesh, int degree, const VectorFunction & f, int exactness = -1);

  /// Global RT^p coefficients: per edge the moments int_E (tau.n_E) P_m(2t-1) ds in the
  /// global edge parameter, per element the interior moments of the Piola pull-back
  /// (see RTBasis).
  struct RtField
  {
    int degree = 0;
    Eigen::VectorXd edge_moments;
    Eigen::VectorXd interior_moments;
  };

  /// Raviart-Thomas interpolant. tau must have a single-valued normal trace on interior
  /// edges; it is evaluated at edge quadrature points for the edge moments. A negative
  /// `exactness` selects 2*degree+8.
  RtField rt_interpolate(const Mesh & mesh, int degree, const VectorFunction & tau, int exactness = -1);

  /// Coefficients of the element restriction in the nodal RTBasis of the reference element.
  Eigen::VectorXd rt_local_coefficients(const Mesh & mesh, const RtField & field, int t);

  struct RtValue
  {
    Eigen::Vector2d value;
    double divergence;
  };

  /// Piola-mapped value and divergence on element t at reference point xhat.
  RtValue rt_evaluate(const Mesh & mesh, const RTBasis & basis, const RtField & field, int t,
                      const Eigen::Vector2d & xhat);

  /// Trial coefficient vector of an exact tuple: u and sigma by L2 projection, u-hat by
  /// nodal interpolation of u at the trace nodes, sigma-hat by L2(E) projection of
  /// sigma.n_E. Reproduces the tuple exactly when it lies in the discrete space.
  Eigen::VectorXd trial_interpolant(const Mesh & mesh, const DofMap & dofs, const ScalarFunction & u,
                                    const VectorFunction & sigma);

  /// Value of the u-hat trace on edge e at global edge parameter s from a global
  /// coefficient vector.
  double uhat_trace_value(const Mesh & mesh, const DofMap & dofs, const Eigen::VectorXd & coefficients, int e,
                          double s);

} // namespace dpglab

#endif
