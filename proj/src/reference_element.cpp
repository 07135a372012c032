#include "dpglab/reference_element.hpp"

#include <cmath>
#include <stdexcept>

namespace dpglab
{

  namespace reference
  {
    Eigen::Vector2d vertex(int j)
    {
      switch (j) {
      case 0: return {0.0, 0.0};
      case 1: return {1.0, 0.0};
      case 2: return {0.0, 1.0};
      default: throw std::out_of_range("reference::vertex");
      }
    }

    Eigen::Vector2d edge_point(int j, double t) { return (1.0 - t) * vertex(j) + t * vertex((j + 1) % 3); }

    Eigen::Vector2d edge_normal(int j)
    {
      const Eigen::Vector2d d = vertex((j + 1) % 3) - vertex(j);
      return Eigen::Vector2d(d.y(), -d.x()).normalized();
    }

    double edge_length(int j) { return (vertex((j + 1) % 3) - vertex(j)).norm(); }
  } // namespace reference

  Eigen::VectorXd shifted_legendre(int n, double t)
  {
    Eigen::VectorXd p(n + 1);
    const double x = 2.0 * t - 1.0;
    p(0) = 1.0;
    if (n >= 1) {
      p(1) = x;
    }
    for (int k = 2; k <= n; ++k) {
      p(k) = ((2.0 * k - 1.0) * x * p(k - 1) - (k - 1.0) * p(k - 2)) / k;
    }
    return p;
  }

  namespace
  {
    /// Jacobi polynomials P_n^{(alpha,0)}(x), n = 0..nmax, and their derivatives.
    void jacobi(int nmax, double alpha, double x, Eigen::VectorXd & p, Eigen::VectorXd & dp)
    {
      p.resize(nmax + 1);
      dp.resize(nmax + 1);
      p(0) = 1.0;
      dp(0) = 0.0;
      if (nmax == 0) {
        return;
      }
      p(1) = (alpha + 1.0) + (alpha + 2.0) * (x - 1.0) / 2.0;
      dp(1) = (alpha + 2.0) / 2.0;
      for (int n = 2; n <= nmax; ++n) {
        const double s = 2.0 * n + alpha;
        const double a1 = 2.0 * n * (n + alpha) * (s - 2.0);
        const double a2 = (s - 1.0) * alpha * alpha;
        const double a3 = (s - 2.0) * (s - 1.0) * s;
        const double a4 = 2.0 * (n + alpha - 1.0) * (n - 1.0) * s;
        p(n) = ((a2 + a3 * x) * p(n - 1) - a4 * p(n - 2)) / a1;
        dp(n) = (a3 * p(n - 1) + (a2 + a3 * x) * dp(n - 1) - a4 * dp(n - 2)) / a1;
      }
    }
  } // namespace

  //------------------------------------------------------------------------------
  // ScalarBasis
  //------------------------------------------------------------------------------

  ScalarBasis::ScalarBasis(int degree) : m_degree(degree)
  {
    if (degree < 0) {
      throw std::invalid_argument("ScalarBasis: negative degree");
    }
    for (int n = 0; n <= degree; ++n) {
      for (int i = n; i >= 0; --i) {
        m_indices.push_back({i, n - i});
      }
    }
    m_scaling = Eigen::VectorXd::Ones(size());
    const QuadratureRule rule = triangle_quadrature(2 * degree);
    Eigen::VectorXd norms = Eigen::VectorXd::Zero(size());
    for (int q = 0; q < rule.size(); ++q) {
      norms += rule.weights[q] * values(rule.points[q]).cwiseAbs2();
    }
    m_scaling = norms.cwiseSqrt().cwiseInverse();
  }

  void ScalarBasis::evaluate(const Eigen::Vector2d & xhat, Eigen::VectorXd * values, Eigen::MatrixX2d * gradients) const
  {
    const int p = m_degree;
    const double x = xhat.x();
    const double y = xhat.y();
    // Q_i = P_i(a) (1-y)^i with a the collapsed coordinate; s = a (1-y), t = 1-y.
    const double s = 2.0 * x - 1.0 + y;
    const double t = 1.0 - y;
    const Eigen::Vector2d ds(2.0, 1.0);
    const Eigen::Vector2d dtt(0.0, -2.0 * t);
    std::vector<double> q(p + 1);
    std::vector<Eigen::Vector2d> dq(p + 1);
    q[0] = 1.0;
    dq[0].setZero();
    if (p >= 1) {
      q[1] = s;
      dq[1] = ds;
    }
    for (int n = 1; n < p; ++n) {
      q[n + 1] = ((2.0 * n + 1.0) * s * q[n] - n * t * t * q[n - 1]) / (n + 1.0);
      dq[n + 1] = ((2.0 * n + 1.0) * (ds * q[n] + s * dq[n]) - n * (dtt * q[n - 1] + t * t * dq[n - 1])) / (n + 1.0);
    }

    if (values) {
      values->resize(size());
    }
    if (gradients) {
      gradients->resize(size(), 2);
    }
    const double b = 2.0 * y - 1.0;
    Eigen::VectorXd r, dr;
    for (int k = 0; k < size(); ++k) {
      const auto [i, j] = m_indices[k];
      jacobi(j, 2.0 * i + 1.0, b, r, dr);
      if (values) {
        (*values)(k) = m_scaling(k) * q[i] * r(j);
      }
      if (gradients) {
        const Eigen::Vector2d g = dq[i] * r(j) + Eigen::Vector2d(0.0, 2.0 * q[i] * dr(j));
        gradients->row(k) = m_scaling(k) * g.transpose();
      }
    }
  }

  Eigen::VectorXd ScalarBasis::values(const Eigen::Vector2d & xhat) const
  {
    Eigen::VectorXd v;
    evaluate(xhat, &v, nullptr);
    return v;
  }

  Eigen::MatrixX2d ScalarBasis::gradients(const Eigen::Vector2d & xhat) const
  {
    Eigen::MatrixX2d g;
    evaluate(xhat, nullptr, &g);
    return g;
  }

  //------------------------------------------------------------------------------
  // LagrangeBasis
  //------------------------------------------------------------------------------

  LagrangeBasis::LagrangeBasis(int degree) : m_degree(degree), m_modal(degree)
  {
    if (degree < 1) {
      throw std::invalid_argument("LagrangeBasis: degree must be >= 1");
    }
    const int m = degree;
    for (int j = 0; j < 3; ++j) {
      m_nodes.push_back(reference::vertex(j));
    }
    for (int j = 0; j < 3; ++j) {
      for (int i = 1; i < m; ++i) {
        m_nodes.push_back(reference::edge_point(j, static_cast<double>(i) / m));
      }
    }
    for (int b = 1; b < m; ++b) {
      for (int a = 1; a + b < m; ++a) {
        m_nodes.emplace_back(static_cast<double>(a) / m, static_cast<double>(b) / m);
      }
    }
    Eigen::MatrixXd vandermonde(size(), size());
    for (int i = 0; i < size(); ++i) {
      vandermonde.row(i) = m_modal.values(m_nodes[i]).transpose();
    }
    m_coefficients = vandermonde.inverse();
  }

  Eigen::VectorXd LagrangeBasis::values(const Eigen::Vector2d & xhat) const
  {
    return m_coefficients.transpose() * m_modal.values(xhat);
  }

  Eigen::MatrixX2d LagrangeBasis::gradients(const Eigen::Vector2d & xhat) const
  {
    return m_coefficients.transpose() * m_modal.gradients(xhat);
  }

  //------------------------------------------------------------------------------
  // RTBasis
  //------------------------------------------------------------------------------

  RTBasis::RTBasis(int degree) : m_degree(degree), m_scalar(degree)
  {
    if (degree < 0) {
      throw std::invalid_argument("RTBasis: negative degree");
    }
    const int p = degree;
    const int n = size();
    Eigen::MatrixXd functionals = Eigen::MatrixXd::Zero(n, n);

    const EdgeRule er = edge_quadrature(2 * p + 2);
    for (int j = 0; j < 3; ++j) {
      const Eigen::Vector2d normal = reference::edge_normal(j);
      for (int q = 0; q < er.size(); ++q) {
        const double t = er.points[q];
        const Eigen::VectorXd flux = span_values(reference::edge_point(j, t)) * normal;
        const Eigen::VectorXd leg = shifted_legendre(p, t);
        const double w = er.weights[q] * reference::edge_length(j);
        for (int m = 0; m <= p; ++m) {
          functionals.row(j * (p + 1) + m) += w * leg(m) * flux.transpose();
        }
      }
    }
    if (p > 0) {
      const ScalarBasis inner(p - 1);
      const QuadratureRule tr = triangle_quadrature(2 * p + 2);
      for (int q = 0; q < tr.size(); ++q) {
        const Eigen::MatrixX2d v = span_values(tr.points[q]);
        const Eigen::VectorXd phi = inner.values(tr.points[q]);
        for (int l = 0; l < inner.size(); ++l) {
          functionals.row(num_edge_dofs() + 2 * l) += tr.weights[q] * phi(l) * v.col(0).transpose();
          functionals.row(num_edge_dofs() + 2 * l + 1) += tr.weights[q] * phi(l) * v.col(1).transpose();
        }
      }
    }
    m_coefficients = functionals.inverse();
  }

  Eigen::MatrixX2d RTBasis::span_values(const Eigen::Vector2d & xhat) const
  {
    const int p = m_degree;
    const int np = m_scalar.size();
    Eigen::MatrixX2d v = Eigen::MatrixX2d::Zero(size(), 2);
    const Eigen::VectorXd phi = m_scalar.values(xhat);
    v.block(0, 0, np, 1) = phi;
    v.block(np, 1, np, 1) = phi;
    for (int l = 0; l <= p; ++l) {
      const double h = std::pow(xhat.x(), p - l) * std::pow(xhat.y(), l);
      v.row(2 * np + l) = h * xhat.transpose();
    }
    return v;
  }

  Eigen::VectorXd RTBasis::span_divergences(const Eigen::Vector2d & xhat) const
  {
    const int p = m_degree;
    const int np = m_scalar.size();
    Eigen::VectorXd d(size());
    const Eigen::MatrixX2d g = m_scalar.gradients(xhat);
    d.head(np) = g.col(0);
    d.segment(np, np) = g.col(1);
    for (int l = 0; l <= p; ++l) {
      d(2 * np + l) = (p + 2.0) * std::pow(xhat.x(), p - l) * std::pow(xhat.y(), l);
    }
    return d;
  }

  Eigen::MatrixX2d RTBasis::values(const Eigen::Vector2d & xhat) const
  {
    return m_coefficients.transpose() * span_values(xhat);
  }

  Eigen::VectorXd RTBasis::divergences(const Eigen::Vector2d & xhat) const
  {
    return m_coefficients.transpose() * span_divergences(xhat);
  }

} // namespace dpglab
