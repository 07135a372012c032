#include "dpglab/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace dpglab
{

  namespace
  {
    void check_degree(int exactness, const char * who)
    {
      if (exactness < 0 || exactness > max_quadrature_degree) {
        throw std::invalid_argument(std::string(who) + ": unsupported exactness degree " + std::to_string(exactness));
      }
    }
  } // namespace

  EdgeRule gauss_legendre(int n)
  {
    if (n < 1) {
      throw std::invalid_argument("gauss_legendre: need at least one point");
    }
    // P_n(x) and P_n'(x) on [-1,1].
    auto legendre = [n](double x) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      return std::pair{p1, n * (x * p1 - p0) / (x * x - 1.0)};
    };

    EdgeRule rule;
    rule.points.resize(n);
    rule.weights.resize(n);
    rule.degree = 2 * n - 1;
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      for (int iter = 0; iter < 100; ++iter) {
        const auto [p, dp] = legendre(x);
        const double dx = p / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) {
          break;
        }
      }
      const double dp = legendre(x).second;
      const double w = 1.0 / ((1.0 - x * x) * dp * dp);
      rule.points[i] = 0.5 * (1.0 - x);
      rule.points[n - 1 - i] = 0.5 * (1.0 + x);
      rule.weights[i] = w;
      rule.weights[n - 1 - i] = w;
    }
    return rule;
  }

  EdgeRule edge_quadrature(int exactness)
  {
    check_degree(exactness, "edge_quadrature");
    EdgeRule rule = gauss_legendre(exactness / 2 + 1);
    rule.degree = exactness;
    return rule;
  }

  QuadratureRule triangle_quadrature(int exactness)
  {
    check_degree(exactness, "triangle_quadrature");
    // x = s, y = r (1 - s) with Jacobian (1 - s): degree exactness+1 in s, exactness in r.
    const EdgeRule g = gauss_legendre((exactness + 3) / 2);
    QuadratureRule rule;
    rule.degree = exactness;
    rule.points.reserve(g.size() * g.size());
    rule.weights.reserve(g.size() * g.size());
    for (int i = 0; i < g.size(); ++i) {
      const double s = g.points[i];
      for (int j = 0; j < g.size(); ++j) {
        const double r = g.points[j];
        rule.points.emplace_back(s, r * (1.0 - s));
        rule.weights.push_back(g.weights[i] * g.weights[j] * (1.0 - s));
      }
    }
    return rule;
  }

} // namespace dpglab
