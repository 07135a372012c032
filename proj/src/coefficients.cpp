#include "dpglab/coefficients.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dpglab
{

  Coefficients Coefficients::constant(const Eigen::Matrix2d & C, const Eigen::Vector2d & beta, double gamma)
  {
    Coefficients c;
    c.C = [C](const Point &) { return C; };
    c.beta = [beta](const Point &) { return beta; };
    c.gamma = [gamma](const Point &) { return gamma; };
    return c;
  }

  std::string_view to_string(TestNormKind kind)
  {
    switch (kind) {
    case TestNormKind::QuasiOptimal: return "qopt";
    case TestNormKind::Standard: return "std";
    case TestNormKind::Simple: return "simple";
    }
    return "unknown";
  }

  TestNormKind parse_test_norm(std::string_view name)
  {
    if (name == "qopt" || name == "quasi-optimal") {
      return TestNormKind::QuasiOptimal;
    }
    if (name == "std" || name == "standard") {
      return TestNormKind::Standard;
    }
    if (name == "simple") {
      return TestNormKind::Simple;
    }
    throw std::invalid_argument("unknown test norm '" + std::string(name) + "'");
  }

  void check_coefficients_at(const Coefficients & coeffs, const Point & x)
  {
    const Eigen::Matrix2d C = coeffs.C(x);
    if (std::abs(C(0, 1) - C(1, 0)) > 1e-14 * C.norm()) {
      throw std::invalid_argument("coefficient C is not symmetric");
    }
    if (!(C(0, 0) > 0.0 && C.determinant() > 0.0)) {
      throw std::invalid_argument("coefficient C is not positive definite");
    }
  }

} // namespace dpglab
