#include "dpglab/forms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dpglab
{

  int required_triangle_exactness(const DiscretizationConfig & config)
  {
    const int k = std::max(config.k1(), config.k2());
    const int u_degree = config.variant == TrialVariant::Augmented ? config.degree + 1 : config.degree;
    return std::max(2 * k, u_degree + k);
  }

  int required_edge_exactness(const DiscretizationConfig & config)
  {
    return std::max(config.degree + 1 + config.k2(), config.degree + config.k1());
  }

  namespace
  {
    int select_exactness(int requested, int fallback, int required, const char * where)
    {
      if (requested < 0) {
        return std::max(fallback, required);
      }
      if (requested < required) {
        throw std::invalid_argument(std::string(where) + " quadrature exactness " + std::to_string(requested) +
                                    " is below the required " + std::to_string(required));
      }
      return requested;
    }
  } // namespace

  ElementAssembler::ElementAssembler(const DiscretizationConfig & config)
      : m_config(config),
        m_n_v(dim_polynomials(config.k1())),
        m_n_tau(dim_polynomials(config.k2())),
        m_n_u(dim_polynomials(config.variant == TrialVariant::Augmented ? config.degree + 1 : config.degree)),
        m_n_sigma(dim_polynomials(config.degree)),
        m_n_trace(3 * (config.degree + 1)),
        m_rule(triangle_quadrature(select_exactness(config.triangle_exactness, 2 * (config.degree + 3) + 2,
                                                    required_triangle_exactness(config), "triangle"))),
        m_edge_rule(edge_quadrature(select_exactness(config.edge_exactness, 2 * (config.degree + 3),
                                                     required_edge_exactness(config), "edge"))),
        m_basis(std::max({config.k1(), config.k2(), config.variant == TrialVariant::Augmented ? config.degree + 1
                                                                                             : config.degree}))
  {
    if (config.degree < 0 || config.k1() < 1 || config.k2() < 1) {
      throw std::invalid_argument("ElementAssembler: need degree >= 0 and test degrees >= 1");
    }
    for (const auto & x : m_rule.points) {
      m_points.push_back({m_basis.values(x), m_basis.gradients(x)});
    }
    const LagrangeBasis lagrange(config.degree + 1);
    for (int j = 0; j < 3; ++j) {
      for (int q = 0; q < m_edge_rule.size(); ++q) {
        const double t = m_edge_rule.points[q];
        const Eigen::Vector2d xhat = reference::edge_point(j, t);
        m_edge_points[j].push_back({t, m_basis.values(xhat), lagrange.values(xhat).head(m_n_trace),
                                    shifted_legendre(config.degree, t)});
      }
    }
  }

  namespace
  {
    void check_interface(const Coefficients & coeffs, const Point & x, int t)
    {
      if (coeffs.on_interface && coeffs.on_interface(x)) {
        throw std::domain_error("coefficients evaluated on a discontinuity line in element " + std::to_string(t));
      }
    }
  } // namespace

  Eigen::MatrixXd ElementAssembler::b_matrix(const Mesh & mesh, int t, const Coefficients & coeffs) const
  {
    const int nt = num_test();
    const int nv = m_n_v;
    const int ntau = m_n_tau;
    const int c_sigma = m_n_u;
    const int c_uhat = m_n_u + 2 * m_n_sigma;
    const int c_sigmahat = c_uhat + m_n_trace;
    const AffineMap & map = mesh.geometry(t);
    const Eigen::Matrix2d jinv = map.inverse_transpose.transpose();

    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(nt, num_trial());
    Eigen::VectorXd r1(nt);
    Eigen::MatrixX2d r2(nt, 2);
    for (int q = 0; q < m_rule.size(); ++q) {
      const Point x = map.map(m_rule.points[q]);
      check_interface(coeffs, x, t);
      const Eigen::Matrix2d C = coeffs.C(x);
      const Eigen::Vector2d beta = coeffs.beta(x);
      const double gamma = coeffs.gamma(x);
      const PointData & pd = m_points[q];
      const Eigen::MatrixX2d grad = pd.grad * jinv;

      // -div tau - beta.tau + gamma v  and  C tau - grad v
      r1.head(nv) = gamma * pd.phi.head(nv);
      r1.segment(nv, ntau) = -grad.col(0).head(ntau) - beta.x() * pd.phi.head(ntau);
      r1.segment(nv + ntau, ntau) = -grad.col(1).head(ntau) - beta.y() * pd.phi.head(ntau);
      r2.topRows(nv) = -grad.topRows(nv);
      r2.middleRows(nv, ntau) = pd.phi.head(ntau) * C.col(0).transpose();
      r2.middleRows(nv + ntau, ntau) = pd.phi.head(ntau) * C.col(1).transpose();

      const double w = m_rule.weights[q] * map.det;
      B.middleCols(0, m_n_u).noalias() += (w * r1) * pd.phi.head(m_n_u).transpose();
      B.middleCols(c_sigma, m_n_sigma).noalias() += (w * r2.col(0)) * pd.phi.head(m_n_sigma).transpose();
      B.middleCols(c_sigma + m_n_sigma, m_n_sigma).noalias() += (w * r2.col(1)) * pd.phi.head(m_n_sigma).transpose();
    }

    const int p = m_config.degree;
    const Skeleton & sk = mesh.skeleton();
    const auto & tri = mesh.triangle(t);
    for (int j = 0; j < 3; ++j) {
      const Eigen::Vector2d d = mesh.vertex(tri[(j + 1) % 3]) - mesh.vertex(tri[j]);
      const double length = d.norm();
      const Eigen::Vector2d normal = Eigen::Vector2d(d.y(), -d.x()) / length;
      const int sign = sk.element_edge_signs[t][j];
      const bool rev = sk.element_edge_reversed[t][j];
      for (int q = 0; q < m_edge_rule.size(); ++q) {
        const EdgePointData & ep = m_edge_points[j][q];
        const double w = m_edge_rule.weights[q] * length;
        // <u-hat, tau.n_T>
        B.block(nv, c_uhat, ntau, m_n_trace).noalias() +=
          (w * normal.x() * ep.phi.head(ntau)) * ep.lagrange.transpose();
        B.block(nv + ntau, c_uhat, ntau, m_n_trace).noalias() +=
          (w * normal.y() * ep.phi.head(ntau)) * ep.lagrange.transpose();
        // <sigma-hat, v>, sigma-hat = s_{T,E} sigma.n_E in the global edge parameter
        for (int m = 0; m <= p; ++m) {
          const double parity = (rev && m % 2 == 1) ? -1.0 : 1.0;
          const double q_m = sign * parity * std::sqrt((2.0 * m + 1.0) / length) * ep.legendre(m);
          B.col(c_sigmahat + j * (p + 1) + m).head(nv) += (w * q_m) * ep.phi.head(nv);
        }
      }
    }
    return B;
  }

  Eigen::MatrixXd ElementAssembler::gram(const Mesh & mesh, int t, const Coefficients & coeffs) const
  {
    return gram(mesh, t, coeffs, m_config.norm);
  }

  Eigen::MatrixXd ElementAssembler::gram(const Mesh & mesh, int t, const Coefficients & coeffs,
                                         TestNormKind kind) const
  {
    const int nt = num_test();
    const int nv = m_n_v;
    const int ntau = m_n_tau;
    const AffineMap & map = mesh.geometry(t);
    const Eigen::Matrix2d jinv = map.inverse_transpose.transpose();

    // Feature rows: 0 scalar operator, 1-2 tau, 3-4 grad v, 5 v; the inner product at a
    // point is features^T M features.
    Eigen::MatrixXd features = Eigen::MatrixXd::Zero(6, nt);
    Eigen::Matrix<double, 6, 6> M;
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(nt, nt);
    for (int q = 0; q < m_rule.size(); ++q) {
      const Point x = map.map(m_rule.points[q]);
      check_interface(coeffs, x, t);
      const Eigen::Matrix2d C = coeffs.C(x);
      const PointData & pd = m_points[q];
      const Eigen::MatrixX2d grad = pd.grad * jinv;

      features.row(1).segment(nv, ntau) = pd.phi.head(ntau).transpose();
      features.row(2).segment(nv + ntau, ntau) = pd.phi.head(ntau).transpose();
      features.row(3).head(nv) = grad.col(0).head(nv).transpose();
      features.row(4).head(nv) = grad.col(1).head(nv).transpose();
      features.row(5).head(nv) = pd.phi.head(nv).transpose();

      M.setZero();
      M(0, 0) = 1.0;
      M(5, 5) = 1.0;
      if (kind == TestNormKind::QuasiOptimal) {
        const Eigen::Vector2d beta = coeffs.beta(x);
        const double gamma = coeffs.gamma(x);
        features.row(0).head(nv) = gamma * pd.phi.head(nv).transpose();
        features.row(0).segment(nv, ntau) = (-grad.col(0).head(ntau) - beta.x() * pd.phi.head(ntau)).transpose();
        features.row(0).segment(nv + ntau, ntau) =
          (-grad.col(1).head(ntau) - beta.y() * pd.phi.head(ntau)).transpose();
        // |C^{1/2} tau - C^{-1/2} grad v|^2 + |C^{1/2} tau|^2
        M.block<2, 2>(1, 1) = 2.0 * C;
        M.block<2, 2>(1, 3) = -Eigen::Matrix2d::Identity();
        M.block<2, 2>(3, 1) = -Eigen::Matrix2d::Identity();
        M.block<2, 2>(3, 3) = C.inverse();
      } else {
        features.row(0).head(nv).setZero();
        features.row(0).segment(nv, ntau) = grad.col(0).head(ntau).transpose();
        features.row(0).segment(nv + ntau, ntau) = grad.col(1).head(ntau).transpose();
        if (kind == TestNormKind::Standard) {
          M.block<2, 2>(1, 1) = C;
          M.block<2, 2>(3, 3) = C.inverse();
        } else {
          M.block<2, 2>(1, 1).setIdentity();
          M.block<2, 2>(3, 3).setIdentity();
        }
      }
      const double w = m_rule.weights[q] * map.det;
      G.noalias() += features.transpose() * (w * M * features);
    }
    return 0.5 * (G + G.transpose());
  }

  Eigen::VectorXd ElementAssembler::load(const Mesh & mesh, int t, const Coefficients & coeffs,
                                         const ScalarFunction & f, const VectorFunction & f_vec) const
  {
    const int nv = m_n_v;
    const int ntau = m_n_tau;
    const AffineMap & map = mesh.geometry(t);
    Eigen::VectorXd F = Eigen::VectorXd::Zero(num_test());
    for (int q = 0; q < m_rule.size(); ++q) {
      const Point x = map.map(m_rule.points[q]);
      check_interface(coeffs, x, t);
      const PointData & pd = m_points[q];
      const double w = m_rule.weights[q] * map.det;
      const Eigen::Vector2d cf = coeffs.C(x) * f_vec(x);
      F.head(nv) += (w * f(x)) * pd.phi.head(nv);
      F.segment(nv, ntau) += (w * cf.x()) * pd.phi.head(ntau);
      F.segment(nv + ntau, ntau) += (w * cf.y()) * pd.phi.head(ntau);
    }
    return F;
  }

  ElementSystem ElementAssembler::system(const Mesh & mesh, const DofMap & dofs, int t,
                                         const ProblemSpec & problem) const
  {
    if (dofs.local_size() != num_trial()) {
      throw std::invalid_argument("ElementAssembler::system: DofMap does not match the discretisation");
    }
    ElementSystem sys;
    sys.element = t;
    sys.B = b_matrix(mesh, t, problem.coeffs);
    sys.G = gram(mesh, t, problem.coeffs);
    sys.F = load(mesh, t, problem.coeffs, problem.f, problem.f_vec);
    sys.gather = dofs.gather(t);
    return sys;
  }

  Eigen::MatrixXd ElementAssembler::test_values(const Eigen::Vector2d & xhat) const
  {
    const Eigen::VectorXd phi = m_basis.values(xhat);
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(num_test(), 3);
    v.col(0).head(m_n_v) = phi.head(m_n_v);
    v.col(1).segment(m_n_v, m_n_tau) = phi.head(m_n_tau);
    v.col(2).segment(m_n_v + m_n_tau, m_n_tau) = phi.head(m_n_tau);
    return v;
  }

  Eigen::MatrixXd element_b_matrix(const Mesh & mesh, int t, const DiscretizationConfig & config,
                                   const Coefficients & coeffs)
  {
    return ElementAssembler(config).b_matrix(mesh, t, coeffs);
  }

  Eigen::MatrixXd element_gram(const Mesh & mesh, int t, const DiscretizationConfig & config,
                               const Coefficients & coeffs)
  {
    return ElementAssembler(config).gram(mesh, t, coeffs);
  }

  Eigen::VectorXd element_load(const Mesh & mesh, int t, const DiscretizationConfig & config,
                               const Coefficients & coeffs, const ScalarFunction & f, const VectorFunction & f_vec)
  {
    return ElementAssembler(config).load(mesh, t, coeffs, f, f_vec);
  }

} // namespace dpglab
