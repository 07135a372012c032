// Element matrices of the ultra-weak formulation
//
//   b(u, v) = (u, -div tau - beta.tau + gamma v) + (sigma, C tau - grad v)
//           + <u-hat, tau.n>_S + <sigma-hat, v>_S,
//   F(v)    = (f, v) + (f_vec, C tau),
//
// tested with broken v in P^{k1}(T), tau in P^{k2}(T)^2, and the element Gram matrices of
// the three test inner products.

#ifndef DPGLAB_FORMS_HPP
#define DPGLAB_FORMS_HPP

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "dpglab/coefficients.hpp"
#include "dpglab/mesh.hpp"
#include "dpglab/problems.hpp"
#include "dpglab/quadrature.hpp"
#include "dpglab/reference_element.hpp"
#include "dpglab/spaces.hpp"

namespace dpglab
{

  struct DiscretizationConfig
  {
    int degree = 0;
    TrialVariant variant = TrialVariant::Standard;
    TestNormKind norm = TestNormKind::QuasiOptimal;
    /// Test degrees for v and tau; negative means degree + 2.
    int test_degree_scalar = -1;
    int test_degree_vector = -1;
    /// Quadrature exactness overrides; negative selects the defaults 2(p+3)+2 on
    /// triangles and 2(p+3) on edges (raised if the test degrees demand more).
    int triangle_exactness = -1;
    int edge_exactness = -1;

    int k1() const { return test_degree_scalar < 0 ? degree + 2 : test_degree_scalar; }
    int k2() const { return test_degree_vector < 0 ? degree + 2 : test_degree_vector; }
  };

  struct ElementSystem
  {
    int element = -1;
    Eigen::MatrixXd B; ///< test x local trial
    Eigen::MatrixXd G; ///< test x test
    Eigen::VectorXd F; ///< test
    std::vector<int> gather;
  };

  /// Reference tabulations shared by all elements of one discretisation.
  ///
  /// Test ordering: v (dim P^{k1}), tau_x, tau_y (dim P^{k2} each). Trial ordering follows
  /// DofMap.
  class ElementAssembler
  {
  public:
    explicit ElementAssembler(const DiscretizationConfig & config);

    const DiscretizationConfig & config() const { return m_config; }
    int num_test() const { return m_n_v + 2 * m_n_tau; }
    int num_test_scalar() const { return m_n_v; }
    int num_test_vector() const { return m_n_tau; }
    int num_trial() const { return m_n_u + 2 * m_n_sigma + 2 * m_n_trace; }

    Eigen::MatrixXd b_matrix(const Mesh & mesh, int t, const Coefficients & coeffs) const;
    Eigen::MatrixXd gram(const Mesh & mesh, int t, const Coefficients & coeffs) const;
    Eigen::MatrixXd gram(const Mesh & mesh, int t, const Coefficients & coeffs, TestNormKind kind) const;
    Eigen::VectorXd load(const Mesh & mesh, int t, const Coefficients & coeffs, const ScalarFunction & f,
                         const VectorFunction & f_vec) const;

    ElementSystem system(const Mesh & mesh, const DofMap & dofs, int t, const ProblemSpec & problem) const;

    /// Test function values at reference point xhat: one row (v, tau_x, tau_y) per test
    /// function.
    Eigen::MatrixXd test_values(const Eigen::Vector2d & xhat) const;

  private:
    // The orthonormal basis is hierarchical, so one tabulation of degree
    // max(k1, k2, u degree) serves every scalar factor through its leading entries.
    struct PointData
    {
      Eigen::VectorXd phi;
      Eigen::MatrixX2d grad; // reference gradients
    };
    struct EdgePointData
    {
      double t;
      Eigen::VectorXd phi;
      Eigen::VectorXd lagrange; // boundary-node Lagrange functions of degree p+1
      Eigen::VectorXd legendre; // P_m(2t-1) in the local edge parameter
    };

    DiscretizationConfig m_config;
    int m_n_v, m_n_tau, m_n_u, m_n_sigma, m_n_trace;
    QuadratureRule m_rule;
    EdgeRule m_edge_rule;
    ScalarBasis m_basis;
    std::vector<PointData> m_points;
    std::array<std::vector<EdgePointData>, 3> m_edge_points;
  };

  /// Minimal triangle quadrature exactness for the polynomial integrands of b and the
  /// Gram matrix with piecewise constant coefficients.
  int required_triangle_exactness(const DiscretizationConfig & config);
  int required_edge_exactness(const DiscretizationConfig & config);

  Eigen::MatrixXd element_b_matrix(const Mesh & mesh, int t, const DiscretizationConfig & config,
                                   const Coefficients & coeffs);
  Eigen::MatrixXd element_gram(const Mesh & mesh, int t, const DiscretizationConfig & config,
                               const Coefficients & coeffs);
  Eigen::VectorXd element_load(const Mesh & mesh, int t, const DiscretizationConfig & config,
                               const Coefficients & coeffs, const ScalarFunction & f, const VectorFunction & f_vec);

} // namespace dpglab

#endif
