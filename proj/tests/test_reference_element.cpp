#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "dpglab/quadrature.hpp"
#include "dpglab/reference_element.hpp"

using namespace dpglab;

namespace
{
  std::vector<Eigen::Vector2d> random_interior_points(int n, unsigned seed)
  {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.02, 0.96);
    std::vector<Eigen::Vector2d> pts;
    while (static_cast<int>(pts.size()) < n) {
      const Eigen::Vector2d x(u(rng), u(rng));
      if (x.sum() < 0.96) {
        pts.push_back(x);
      }
    }
    return pts;
  }
} // namespace

TEST(ScalarBasis, Dimensions)
{
  EXPECT_EQ(ScalarBasis(0).size(), 1);
  EXPECT_EQ(ScalarBasis(2).size(), 6);
  EXPECT_EQ(ScalarBasis(3).size(), 10);
}

TEST(ScalarBasis, ConstantIsSqrtTwo)
{
  const ScalarBasis b(0);
  for (const auto & x : random_interior_points(5, 1)) {
    EXPECT_NEAR(b.values(x)(0), std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(b.gradients(x).norm(), 0.0, 1e-15);
  }
}

TEST(ScalarBasis, Orthonormal)
{
  for (int p = 0; p <= 7; ++p) {
    const ScalarBasis b(p);
    const QuadratureRule r = triangle_quadrature(2 * p);
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(b.size(), b.size());
    for (int q = 0; q < r.size(); ++q) {
      const Eigen::VectorXd v = b.values(r.points[q]);
      M += r.weights[q] * v * v.transpose();
    }
    EXPECT_LT((M - Eigen::MatrixXd::Identity(b.size(), b.size())).cwiseAbs().maxCoeff(), 1e-12) << "p=" << p;
  }
}

TEST(ScalarBasis, Hierarchical)
{
  const ScalarBasis low(2);
  const ScalarBasis high(5);
  for (const auto & x : random_interior_points(10, 2)) {
    EXPECT_LT((high.values(x).head(low.size()) - low.values(x)).norm(), 1e-13);
    EXPECT_LT((high.gradients(x).topRows(low.size()) - low.gradients(x)).norm(), 1e-12);
  }
}

TEST(ScalarBasis, SpansMonomials)
{
  // x^a y^b with a + b <= p is reproduced by its projection onto the basis.
  const int p = 4;
  const ScalarBasis b(p);
  const QuadratureRule r = triangle_quadrature(2 * p);
  for (int a = 0; a <= p; ++a) {
    for (int c = 0; a + c <= p; ++c) {
      auto f = [a, c](const Eigen::Vector2d & x) { return std::pow(x.x(), a) * std::pow(x.y(), c); };
      Eigen::VectorXd coef = Eigen::VectorXd::Zero(b.size());
      for (int q = 0; q < r.size(); ++q) {
        coef += r.weights[q] * f(r.points[q]) * b.values(r.points[q]);
      }
      for (const auto & x : random_interior_points(5, 3)) {
        EXPECT_NEAR(coef.dot(b.values(x)), f(x), 1e-12);
      }
    }
  }
}

TEST(ScalarBasis, GradientsMatchFiniteDifferences)
{
  const double h = 1e-6;
  for (int p : {1, 3, 5}) {
    const ScalarBasis b(p);
    for (const auto & x : random_interior_points(20, 4)) {
      const Eigen::MatrixX2d g = b.gradients(x);
      const Eigen::VectorXd dx = (b.values(x + Eigen::Vector2d(h, 0)) - b.values(x - Eigen::Vector2d(h, 0))) / (2 * h);
      const Eigen::VectorXd dy = (b.values(x + Eigen::Vector2d(0, h)) - b.values(x - Eigen::Vector2d(0, h))) / (2 * h);
      for (int i = 0; i < b.size(); ++i) {
        const double scale = std::max(1.0, g.row(i).norm());
        EXPECT_LE(std::abs(dx(i) - g(i, 0)), 1e-6 * scale);
        EXPECT_LE(std::abs(dy(i) - g(i, 1)), 1e-6 * scale);
      }
    }
  }
}

TEST(ShiftedLegendre, Orthogonality)
{
  const int n = 6;
  const EdgeRule r = edge_quadrature(2 * n);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (int q = 0; q < r.size(); ++q) {
    const Eigen::VectorXd p = shifted_legendre(n, r.points[q]);
    M += r.weights[q] * p * p.transpose();
  }
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      EXPECT_NEAR(M(i, j), i == j ? 1.0 / (2 * i + 1) : 0.0, 1e-15);
    }
  }
  EXPECT_NEAR(shifted_legendre(3, 1.0)(3), 1.0, 1e-15);
  EXPECT_NEAR(shifted_legendre(3, 0.0)(3), -1.0, 1e-15);
}

TEST(ReferenceTriangle, EdgesAndNormals)
{
  for (int j = 0; j < 3; ++j) {
    const Eigen::Vector2d a = reference::vertex(j);
    const Eigen::Vector2d b = reference::vertex((j + 1) % 3);
    EXPECT_LT((reference::edge_point(j, 0.0) - a).norm(), 1e-15);
    EXPECT_LT((reference::edge_point(j, 1.0) - b).norm(), 1e-15);
    EXPECT_NEAR(reference::edge_length(j), (b - a).norm(), 1e-15);
    const Eigen::Vector2d n = reference::edge_normal(j);
    EXPECT_NEAR(n.norm(), 1.0, 1e-15);
    EXPECT_NEAR(n.dot(b - a), 0.0, 1e-15);
    // Outward: the opposite vertex lies on the negative side.
    EXPECT_LT(n.dot(reference::vertex((j + 2) % 3) - a), 0.0);
  }
}

TEST(LagrangeBasis, KroneckerAndPartitionOfUnity)
{
  for (int m = 1; m <= 5; ++m) {
    const LagrangeBasis b(m);
    ASSERT_EQ(static_cast<int>(b.nodes().size()), b.size());
    for (int i = 0; i < b.size(); ++i) {
      const Eigen::VectorXd v = b.values(b.nodes()[i]);
      for (int k = 0; k < b.size(); ++k) {
        EXPECT_NEAR(v(k), i == k ? 1.0 : 0.0, 1e-12);
      }
    }
    for (const auto & x : random_interior_points(10, 5)) {
      EXPECT_NEAR(b.values(x).sum(), 1.0, 1e-12);
      EXPECT_LT(b.gradients(x).colwise().sum().norm(), 1e-11);
    }
  }
}

TEST(LagrangeBasis, NodeLayout)
{
  const int m = 4;
  const LagrangeBasis b(m);
  for (int j = 0; j < 3; ++j) {
    EXPECT_LT((b.nodes()[j] - reference::vertex(j)).norm(), 1e-15);
    for (int i = 0; i < m - 1; ++i) {
      EXPECT_LT((b.nodes()[b.edge_node(j, i)] - reference::edge_point(j, double(i + 1) / m)).norm(), 1e-15);
    }
  }
  EXPECT_EQ(b.num_boundary_nodes(), 3 * m);
}

TEST(LagrangeBasis, InteriorFunctionsVanishOnBoundary)
{
  const int m = 4;
  const LagrangeBasis b(m);
  for (int j = 0; j < 3; ++j) {
    for (double t : {0.1, 0.37, 0.8}) {
      const Eigen::VectorXd v = b.values(reference::edge_point(j, t));
      EXPECT_LT(v.tail(b.size() - b.num_boundary_nodes()).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
  EXPECT_THROW(LagrangeBasis(0), std::invalid_argument);
}

TEST(RTBasis, Dimensions)
{
  EXPECT_EQ(RTBasis(0).size(), 3);
  EXPECT_EQ(RTBasis(1).size(), 8);
  EXPECT_EQ(RTBasis(2).size(), 15);
}

TEST(RTBasis, DualToItsFunctionals)
{
  for (int p = 0; p <= 4; ++p) {
    const RTBasis b(p);
    for (int k = 0; k < b.size(); ++k) {
      const Eigen::VectorXd d = b.dofs([&b, k](const Eigen::Vector2d & x) -> Eigen::Vector2d {
        return b.values(x).row(k).transpose();
      });
      for (int i = 0; i < b.size(); ++i) {
        EXPECT_NEAR(d(i), i == k ? 1.0 : 0.0, 1e-12) << "p=" << p << " k=" << k;
      }
    }
  }
}

TEST(RTBasis, LowestOrderNormalTraces)
{
  const RTBasis b(0);
  for (int k = 0; k < 3; ++k) {
    EXPECT_NEAR(b.divergences(Eigen::Vector2d(0.2, 0.3))(k), b.divergences(Eigen::Vector2d(0.6, 0.1))(k), 1e-14);
    for (int j = 0; j < 3; ++j) {
      for (double t : {0.1, 0.5, 0.9}) {
        const double flux = b.values(reference::edge_point(j, t)).row(k).dot(reference::edge_normal(j));
        EXPECT_NEAR(flux, k == j ? 1.0 / reference::edge_length(j) : 0.0, 1e-13);
      }
    }
  }
}

TEST(RTBasis, DivergenceMatchesValuesAndLiesInPp)
{
  const double h = 1e-6;
  for (int p = 0; p <= 3; ++p) {
    const RTBasis b(p);
    const ScalarBasis s(p);
    const QuadratureRule r = triangle_quadrature(2 * p + 2);
    // Projection of each divergence onto P^p must reproduce it.
    Eigen::MatrixXd coef = Eigen::MatrixXd::Zero(s.size(), b.size());
    for (int q = 0; q < r.size(); ++q) {
      coef += r.weights[q] * s.values(r.points[q]) * b.divergences(r.points[q]).transpose();
    }
    for (const auto & x : random_interior_points(10, 6)) {
      const Eigen::VectorXd div = b.divergences(x);
      EXPECT_LT((coef.transpose() * s.values(x) - div).norm(), 1e-11);
      const Eigen::MatrixX2d px = b.values(x + Eigen::Vector2d(h, 0));
      const Eigen::MatrixX2d mx = b.values(x - Eigen::Vector2d(h, 0));
      const Eigen::MatrixX2d py = b.values(x + Eigen::Vector2d(0, h));
      const Eigen::MatrixX2d my = b.values(x - Eigen::Vector2d(0, h));
      const Eigen::VectorXd fd = (px.col(0) - mx.col(0) + py.col(1) - my.col(1)) / (2 * h);
      EXPECT_LT((fd - div).cwiseAbs().maxCoeff(), 1e-5 * std::max(1.0, div.cwiseAbs().maxCoeff()));
    }
  }
}

TEST(RTBasis, NormalTraceOnEdgeIsDegreeP)
{
  // tau.n on an edge is a polynomial of degree p: fitted by P_0..P_p exactly.
  const int p = 2;
  const RTBasis b(p);
  const EdgeRule r = edge_quadrature(2 * p + 4);
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < b.size(); ++k) {
      Eigen::VectorXd c = Eigen::VectorXd::Zero(p + 1);
      for (int q = 0; q < r.size(); ++q) {
        const double flux = b.values(reference::edge_point(j, r.points[q])).row(k).dot(reference::edge_normal(j));
        const Eigen::VectorXd leg = shifted_legendre(p, r.points[q]);
        for (int m = 0; m <= p; ++m) {
          c(m) += r.weights[q] * flux * leg(m) * (2 * m + 1);
        }
      }
      for (double t : {0.13, 0.5, 0.77}) {
        const double flux = b.values(reference::edge_point(j, t)).row(k).dot(reference::edge_normal(j));
        EXPECT_NEAR(c.dot(shifted_legendre(p, t)), flux, 1e-11);
      }
    }
  }
}
