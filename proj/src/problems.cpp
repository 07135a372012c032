#include "dpglab/problems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace dpglab
{

  DerivedData derive_data(const ExactSolution & exact, const Coefficients & coeffs, const VectorFunction & f_vec,
                          const ScalarFunction & div_f_vec, const ScalarFunction & div_cinv_beta)
  {
    DerivedData d;
    d.sigma = [exact, coeffs, f_vec](const Point & x) -> Eigen::Vector2d {
      const Eigen::Matrix2d Cinv = coeffs.C(x).inverse();
      return f_vec(x) - Cinv * exact.gradient(x) + Cinv * coeffs.beta(x) * exact.u(x);
    };
    d.div_sigma = [exact, coeffs, div_f_vec, div_cinv_beta](const Point & x) {
      const Eigen::Matrix2d Cinv = coeffs.C(x).inverse();
      double div = -(Cinv.cwiseProduct(exact.hessian(x))).sum();
      div += (Cinv * coeffs.beta(x)).dot(exact.gradient(x));
      if (div_cinv_beta) {
        div += div_cinv_beta(x) * exact.u(x);
      }
      if (div_f_vec) {
        div += div_f_vec(x);
      }
      return div;
    };
    d.f = [div_sigma = d.div_sigma, exact, coeffs](const Point & x) {
      return div_sigma(x) + coeffs.gamma(x) * exact.u(x);
    };
    return d;
  }

  ProblemSpec make_problem(std::string name, Coefficients coeffs, ExactSolution exact, VectorFunction f_vec,
                           ScalarFunction div_f_vec, ScalarFunction div_cinv_beta)
  {
    ProblemSpec spec;
    const DerivedData data = derive_data(exact, coeffs, f_vec, div_f_vec, div_cinv_beta);
    spec.name = std::move(name);
    spec.sigma = data.sigma;
    spec.div_sigma = data.div_sigma;
    spec.f = data.f;
    spec.coercivity = [coeffs, div_cinv_beta](const Point & x) {
      return 0.5 * (div_cinv_beta ? div_cinv_beta(x) : 0.0) + coeffs.gamma(x);
    };
    spec.coeffs = std::move(coeffs);
    spec.exact = std::move(exact);
    spec.f_vec = std::move(f_vec);
    return spec;
  }

  ExactSolution sine_solution()
  {
    constexpr double pi = std::numbers::pi;
    ExactSolution s;
    s.u = [](const Point & x) { return std::sin(pi * x.x()) * std::sin(pi * x.y()); };
    s.gradient = [](const Point & x) {
      return Eigen::Vector2d(pi * std::cos(pi * x.x()) * std::sin(pi * x.y()),
                             pi * std::sin(pi * x.x()) * std::cos(pi * x.y()));
    };
    s.hessian = [](const Point & x) {
      const double ss = std::sin(pi * x.x()) * std::sin(pi * x.y());
      const double cc = std::cos(pi * x.x()) * std::cos(pi * x.y());
      Eigen::Matrix2d h;
      h << -pi * pi * ss, pi * pi * cc, pi * pi * cc, -pi * pi * ss;
      return h;
    };
    return s;
  }

  ExactSolution bubble_solution()
  {
    ExactSolution s;
    s.u = [](const Point & x) { return x.x() * (1.0 - x.x()) * x.y() * (1.0 - x.y()); };
    s.gradient = [](const Point & x) {
      return Eigen::Vector2d((1.0 - 2.0 * x.x()) * x.y() * (1.0 - x.y()), x.x() * (1.0 - x.x()) * (1.0 - 2.0 * x.y()));
    };
    s.hessian = [](const Point & x) {
      const double xy = (1.0 - 2.0 * x.x()) * (1.0 - 2.0 * x.y());
      Eigen::Matrix2d h;
      h << -2.0 * x.y() * (1.0 - x.y()), xy, xy, -2.0 * x.x() * (1.0 - x.x());
      return h;
    };
    return s;
  }

  namespace
  {
    // Closed macro triangles conv{(0,0),(1,0),(1/2,1/2)} and conv{(1,1),(0,1),(1/2,1/2)}.
    bool in_lower_triangle(const Point & x) { return x.y() <= x.x() && x.y() <= 1.0 - x.x(); }
    bool in_upper_triangle(const Point & x) { return x.y() >= x.x() && x.y() >= 1.0 - x.x(); }

    ProblemSpec example_one()
    {
      Coefficients c;
      c.C = [](const Point &) { return Eigen::Matrix2d::Identity().eval(); };
      c.beta = [](const Point &) { return Eigen::Vector2d::Zero().eval(); };
      c.gamma = [](const Point & x) {
        if (in_lower_triangle(x)) {
          return 1.0;
        }
        if (in_upper_triangle(x)) {
          return 0.5;
        }
        return 0.0;
      };
      c.on_interface = [](const Point & x) {
        constexpr double eps = 1e-13;
        return std::abs(x.y() - x.x()) < eps || std::abs(x.y() - 1.0 + x.x()) < eps || std::abs(x.x() - 0.5) < eps;
      };
      VectorFunction f_vec = [](const Point & x) {
        return x.x() < 0.5 ? Eigen::Vector2d(1.0, 1.0) : Eigen::Vector2d(1.0, -1.0);
      };
      return make_problem("example 1", std::move(c), sine_solution(), std::move(f_vec));
    }

    ProblemSpec example_two()
    {
      Coefficients c = Coefficients::constant(Eigen::Matrix2d::Identity(), Eigen::Vector2d(1.0, 1.0), 0.0);
      VectorFunction f_vec = [](const Point &) { return Eigen::Vector2d::Zero().eval(); };
      return make_problem("example 2", std::move(c), sine_solution(), std::move(f_vec));
    }
  } // namespace

  ProblemSpec example(int id)
  {
    switch (id) {
    case 1: return example_one();
    case 2: return example_two();
    default: throw std::invalid_argument("unknown example id " + std::to_string(id));
    }
  }

  ProblemSpec zero_data_problem(const Coefficients & coeffs)
  {
    ExactSolution zero;
    zero.u = [](const Point &) { return 0.0; };
    zero.gradient = [](const Point &) { return Eigen::Vector2d::Zero().eval(); };
    zero.hessian = [](const Point &) { return Eigen::Matrix2d::Zero().eval(); };
    VectorFunction f_vec = [](const Point &) { return Eigen::Vector2d::Zero().eval(); };
    return make_problem("zero data", coeffs, std::move(zero), std::move(f_vec));
  }

} // namespace dpglab
