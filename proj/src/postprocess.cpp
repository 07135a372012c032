#include "dpglab/postprocess.hpp"

#include <algorithm>

#include "dpglab/quadrature.hpp"
#include "dpglab/reference_element.hpp"

namespace dpglab
{

  BrokenField postprocess_u(const Mesh & mesh, const ProblemSpec & problem, const Solution & solution)
  {
    return postprocess_u(mesh, problem, solution.u(), solution.sigma(), solution.dofs.degree() + 1);
  }

  BrokenField postprocess_u(const Mesh & mesh, const ProblemSpec & problem, const BrokenField & u,
                            const BrokenField & sigma, int degree)
  {
    const ScalarBasis basis(std::max({degree, u.degree, sigma.degree}));
    const int n = dim_polynomials(degree);
    const int nu = dim_polynomials(u.degree);
    const int ns = dim_polynomials(sigma.degree);
    const QuadratureRule rule = triangle_quadrature(2 * degree + 6);
    std::vector<Eigen::VectorXd> phi;
    std::vector<Eigen::MatrixX2d> grad;
    for (const auto & x : rule.points) {
      phi.push_back(basis.values(x));
      grad.push_back(basis.gradients(x));
    }

    BrokenField out = make_broken_field(mesh, degree, 1);
    Eigen::MatrixXd K(n + 1, n + 1);
    Eigen::VectorXd rhs(n + 1);
    for (int t = 0; t < mesh.num_elements(); ++t) {
      const AffineMap & map = mesh.geometry(t);
      const Eigen::Matrix2d jinv = map.inverse_transpose.transpose();
      const auto uc = u.element(t);
      const auto sc = sigma.element(t);
      K.setZero();
      rhs.setZero();
      for (int q = 0; q < rule.size(); ++q) {
        const Point x = map.map(rule.points[q]);
        const double w = rule.weights[q] * map.det;
        const Eigen::MatrixX2d g = grad[q].topRows(n) * jinv;
        const double uh = uc.dot(phi[q].head(nu));
        const Eigen::Vector2d sh(sc.head(ns).dot(phi[q].head(ns)), sc.tail(ns).dot(phi[q].head(ns)));
        const Eigen::Matrix2d C = problem.coeffs.C(x);
        const Eigen::Vector2d flux = C * problem.f_vec(x) - C * sh + problem.coeffs.beta(x) * uh;
        K.topLeftCorner(n, n).noalias() += w * g * g.transpose();
        K.col(n).head(n) += w * phi[q].head(n);
        rhs.head(n) += w * g * flux;
        rhs(n) += w * uh;
      }
      K.row(n).head(n) = K.col(n).head(n).transpose();
      const Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
      if (!lu.isInvertible()) {
        throw SolverError("singular postprocessing system", t);
      }
      out.element(t) = lu.solve(rhs).head(n);
    }
    return out;
  }

} // namespace dpglab
