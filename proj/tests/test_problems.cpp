#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "dpglab/harness.hpp"
#include "dpglab/problems.hpp"
#include "dpglab/quadrature.hpp"

using namespace dpglab;

namespace
{
  constexpr double pi = std::numbers::pi;

  double sine(const Point & x) { return std::sin(pi * x.x()) * std::sin(pi * x.y()); }

  std::vector<Point> random_points(int n, unsigned seed)
  {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    std::vector<Point> pts;
    for (int i = 0; i < n; ++i) {
      pts.emplace_back(d(rng), d(rng));
    }
    return pts;
  }

  Eigen::Vector2d zero_vector(const Point &) { return Eigen::Vector2d::Zero(); }
} // namespace

TEST(DeriveData, PureDiffusion)
{
  const Coefficients c = Coefficients::constant(Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero(), 0.0);
  const ExactSolution exact = sine_solution();
  const DerivedData d = derive_data(exact, c, zero_vector);
  for (const Point & x : random_points(20, 1)) {
    EXPECT_LT((d.sigma(x) + exact.gradient(x)).norm(), 1e-14);
    EXPECT_NEAR(d.f(x), 2 * pi * pi * sine(x), 1e-12);
  }
}

TEST(Examples, ExampleTwoData)
{
  const ProblemSpec p = example(2);
  for (const Point & x : random_points(20, 2)) {
    const double u = sine(x);
    const Eigen::Vector2d grad(pi * std::cos(pi * x.x()) * std::sin(pi * x.y()),
                               pi * std::sin(pi * x.x()) * std::cos(pi * x.y()));
    EXPECT_LT((p.sigma(x) - (-grad + Eigen::Vector2d(u, u))).norm(), 1e-13);
    const double f = 2 * pi * pi * u + pi * std::cos(pi * x.x()) * std::sin(pi * x.y()) +
                     pi * std::sin(pi * x.x()) * std::cos(pi * x.y());
    EXPECT_NEAR(p.f(x), f, 1e-12);
    EXPECT_EQ(p.coeffs.beta(x), Eigen::Vector2d(1.0, 1.0));
    EXPECT_EQ(p.coeffs.gamma(x), 0.0);
    EXPECT_EQ(p.coercivity(x), 0.0);
    EXPECT_EQ(p.f_vec(x), Eigen::Vector2d::Zero());
  }
}

TEST(Examples, ExampleOneData)
{
  const ProblemSpec p = example(1);
  EXPECT_EQ(p.f_vec(Point(0.25, 0.1)), Eigen::Vector2d(1.0, 1.0));
  EXPECT_EQ(p.f_vec(Point(0.75, 0.1)), Eigen::Vector2d(1.0, -1.0));
  EXPECT_EQ(p.f_vec(Point(0.5, 0.3)), Eigen::Vector2d(1.0, -1.0));
  EXPECT_EQ(p.coeffs.gamma(Point(0.5, 0.25)), 1.0);
  EXPECT_EQ(p.coeffs.gamma(Point(0.5, 0.75)), 0.5);
  EXPECT_EQ(p.coeffs.gamma(Point(0.1, 0.5)), 0.0);
  EXPECT_EQ(p.coeffs.gamma(Point(0.9, 0.5)), 0.0);
  for (const Point & x : {Point(0.5, 0.25), Point(0.3, 0.1), Point(0.6, 0.2)}) {
    EXPECT_NEAR(p.f(x), 2 * pi * pi * sine(x) + sine(x), 1e-12);
  }
  for (const Point & x : {Point(0.5, 0.75), Point(0.4, 0.9)}) {
    EXPECT_NEAR(p.f(x), 2 * pi * pi * sine(x) + 0.5 * sine(x), 1e-12);
  }
  EXPECT_TRUE(p.coeffs.on_interface(Point(0.5, 0.1)));
  EXPECT_TRUE(p.coeffs.on_interface(Point(0.2, 0.2)));
  EXPECT_TRUE(p.coeffs.on_interface(Point(0.3, 0.7)));
  EXPECT_FALSE(p.coeffs.on_interface(Point(0.3, 0.1)));
}

TEST(Examples, FirstOrderSystemHolds)
{
  for (int id : {1, 2}) {
    const ProblemSpec p = example(id);
    for (const Point & x : random_points(100, 3 + id)) {
      const Eigen::Matrix2d C = p.coeffs.C(x);
      const Eigen::Vector2d a =
        p.exact.gradient(x) - p.coeffs.beta(x) * p.exact.u(x) + C * p.sigma(x) - C * p.f_vec(x);
      EXPECT_LT(a.norm(), 1e-12);
      EXPECT_NEAR(p.div_sigma(x) + p.coeffs.gamma(x) * p.exact.u(x) - p.f(x), 0.0, 1e-12);
    }
  }
}

TEST(Examples, DivergenceMatchesFiniteDifferences)
{
  const double h = 1e-5;
  for (int id : {1, 2}) {
    const ProblemSpec p = example(id);
    for (const Point & x : random_points(100, 5 + id)) {
      // Stay inside one smooth region of f_vec.
      if (std::abs(x.x() - 0.5) < 2 * h) {
        continue;
      }
      const double fd = (p.sigma(x + Eigen::Vector2d(h, 0)).x() - p.sigma(x - Eigen::Vector2d(h, 0)).x() +
                         p.sigma(x + Eigen::Vector2d(0, h)).y() - p.sigma(x - Eigen::Vector2d(0, h)).y()) /
                        (2 * h);
      EXPECT_NEAR(fd, p.div_sigma(x), 1e-6 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST(Examples, BoundaryValuesVanish)
{
  for (int id : {1, 2}) {
    const ProblemSpec p = example(id);
    for (double s = 0.0; s <= 1.0; s += 0.05) {
      EXPECT_NEAR(p.exact.u(Point(s, 0.0)), 0.0, 1e-15);
      EXPECT_NEAR(p.exact.u(Point(s, 1.0)), 0.0, 1e-15);
      EXPECT_NEAR(p.exact.u(Point(0.0, s)), 0.0, 1e-15);
      EXPECT_NEAR(p.exact.u(Point(1.0, s)), 0.0, 1e-15);
    }
  }
  const ExactSolution b = bubble_solution();
  EXPECT_EQ(b.u(Point(0.0, 0.3)), 0.0);
  EXPECT_EQ(b.u(Point(0.7, 1.0)), 0.0);
  EXPECT_DOUBLE_EQ(b.u(Point(0.5, 0.5)), 1.0 / 16);
}

TEST(Examples, CoefficientsValidAtQuadraturePoints)
{
  const Mesh mesh = mesh_at_level(2);
  const QuadratureRule rule = triangle_quadrature(10);
  for (int id : {1, 2}) {
    const ProblemSpec p = example(id);
    for (int t = 0; t < mesh.num_elements(); ++t) {
      for (const Point & xhat : rule.points) {
        const Point x = mesh.geometry(t).map(xhat);
        EXPECT_NO_THROW(check_coefficients_at(p.coeffs, x));
        EXPECT_GE(p.coercivity(x), 0.0);
        if (p.coeffs.on_interface) {
          EXPECT_FALSE(p.coeffs.on_interface(x));
        }
      }
    }
  }
}

TEST(Examples, SineNormIsOneHalf)
{
  const Mesh mesh = mesh_at_level(2);
  const BrokenField zero = make_broken_field(mesh, 0, 1);
  EXPECT_NEAR(l2_error(mesh, zero, example(1).exact.u), 0.5, 1e-10);
}

TEST(Examples, UnknownIdThrows)
{
  EXPECT_THROW(example(3), std::invalid_argument);
  EXPECT_THROW(example(0), std::invalid_argument);
}

TEST(Coefficients, RejectsInvalidC)
{
  Eigen::Matrix2d nonsym;
  nonsym << 1.0, 0.5, 0.2, 1.0;
  EXPECT_THROW(check_coefficients_at(Coefficients::constant(nonsym, Eigen::Vector2d::Zero(), 0.0), Point(0.5, 0.5)),
               std::invalid_argument);
  Eigen::Matrix2d indefinite;
  indefinite << 1.0, 2.0, 2.0, 1.0;
  EXPECT_THROW(
    check_coefficients_at(Coefficients::constant(indefinite, Eigen::Vector2d::Zero(), 0.0), Point(0.5, 0.5)),
    std::invalid_argument);
}

TEST(Coefficients, ParseTestNorm)
{
  EXPECT_EQ(parse_test_norm("qopt"), TestNormKind::QuasiOptimal);
  EXPECT_EQ(parse_test_norm("std"), TestNormKind::Standard);
  EXPECT_EQ(parse_test_norm("simple"), TestNormKind::Simple);
  EXPECT_THROW(parse_test_norm("energy"), std::invalid_argument);
  EXPECT_EQ(to_string(TestNormKind::Simple), "simple");
}
