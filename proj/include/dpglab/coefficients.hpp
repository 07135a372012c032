// Coefficient model for the first-order system
//   grad u - beta u + C sigma = C f_vec,   div sigma + gamma u = f,   u = 0 on the boundary.

#ifndef DPGLAB_COEFFICIENTS_HPP
#define DPGLAB_COEFFICIENTS_HPP

#include <functional>
#include <string_view>

#include <Eigen/Dense>

#include "dpglab/mesh.hpp"

namespace dpglab
{

  using ScalarFunction = std::function<double(const Point &)>;
  using VectorFunction = std::function<Eigen::Vector2d(const Point &)>;
  using MatrixFunction = std::function<Eigen::Matrix2d(const Point &)>;

  /// Piecewise C^1 coefficients, evaluated pointwise. Discontinuities must be aligned with
  /// mesh edges; `on_interface`, when set, flags points on such lines so that evaluation
  /// there can be rejected.
  struct Coefficients
  {
    MatrixFunction C;
    VectorFunction beta;
    ScalarFunction gamma;
    std::function<bool(const Point &)> on_interface;

    static Coefficients constant(const Eigen::Matrix2d & C, const Eigen::Vector2d & beta, double gamma);
  };

  enum class TestNormKind
  {
    QuasiOptimal,
    Standard,
    Simple
  };

  std::string_view to_string(TestNormKind kind);
  /// Accepts "qopt", "std", "simple" (and the full names).
  TestNormKind parse_test_norm(std::string_view name);

  /// Throws std::invalid_argument if C is not symmetric positive definite at x.
  void check_coefficients_at(const Coefficients & coeffs, const Point & x);

} // namespace dpglab

#endif
