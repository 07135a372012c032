// Gauss rules on the unit interval and collapsed (Duffy) Gauss rules on the
// reference triangle conv{(0,0),(1,0),(0,1)}.

#ifndef DPGLAB_QUADRATURE_HPP
#define DPGLAB_QUADRATURE_HPP

#include <vector>

#include <Eigen/Dense>

namespace dpglab
{

  /// Highest exactness degree the rule generators accept.
  inline constexpr int max_quadrature_degree = 60;

  struct QuadratureRule
  {
    std::vector<Eigen::Vector2d> points;
    std::vector<double> weights;
    int degree = 0;

    int size() const { return static_cast<int>(weights.size()); }
  };

  /// Rule on [0,1] in the edge parameter t.
  struct EdgeRule
  {
    std::vector<double> points;
    std::vector<double> weights;
    int degree = 0;

    int size() const { return static_cast<int>(weights.size()); }
  };

  /// Gauss-Legendre nodes/weights on [0,1] with n points.
  EdgeRule gauss_legendre(int n);

  /// Exact for polynomials of total degree <= `exactness`; all weights positive and all
  /// points strictly inside the triangle. Throws std::invalid_argument for degrees
  /// outside [0, max_quadrature_degree].
  QuadratureRule triangle_quadrature(int exactness);

  EdgeRule edge_quadrature(int exactness);

} // namespace dpglab

#endif
