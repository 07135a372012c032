#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "dpglab/quadrature.hpp"
#include "dpglab/spaces.hpp"

using namespace dpglab;

namespace
{
  constexpr double pi = std::numbers::pi;

  // sqrt(sum_T int_T |f - field|^2) with an independent high-order rule.
  double distance(const Mesh & mesh, const BrokenField & field, const ScalarFunction & f)
  {
    const ScalarBasis basis(field.degree);
    const QuadratureRule rule = triangle_quadrature(24);
    double sum = 0.0;
    for (int t = 0; t < mesh.num_elements(); ++t) {
      for (int q = 0; q < rule.size(); ++q) {
        const double d = f(mesh.geometry(t).map(rule.points[q])) - evaluate(field, basis, t, rule.points[q]);
        sum += rule.weights[q] * mesh.geometry(t).det * d * d;
      }
    }
    return std::sqrt(sum);
  }
} // namespace

TEST(DofMap, InitialMeshCountsLowestOrder)
{
  const Mesh mesh = build_initial_mesh();
  const DofMap dofs(mesh, 0, TrialVariant::Standard);
  EXPECT_EQ(dofs.num_u(), 16);
  EXPECT_EQ(dofs.num_sigma(), 32);
  EXPECT_EQ(dofs.num_uhat(), 5);
  EXPECT_EQ(dofs.num_sigmahat(), 28);
  EXPECT_EQ(dofs.size(), 81);

  const DofMap aug(mesh, 0, TrialVariant::Augmented);
  EXPECT_EQ(aug.num_u(), 48);
  EXPECT_EQ(aug.num_sigma(), 32);
  EXPECT_EQ(aug.num_uhat(), 5);
  EXPECT_EQ(aug.num_sigmahat(), 28);
}

TEST(DofMap, HigherOrderCounts)
{
  const Mesh mesh = mesh_at_level(2);
  const int interior_edges = mesh.num_edges() - mesh.skeleton().num_boundary_edges();
  int interior_vertices = 0;
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    interior_vertices += mesh.skeleton().boundary_vertex[v] ? 0 : 1;
  }
  for (int p = 0; p <= 3; ++p) {
    const DofMap dofs(mesh, p, TrialVariant::Standard);
    EXPECT_EQ(dofs.num_sigmahat(), (p + 1) * mesh.num_edges());
    EXPECT_EQ(dofs.num_uhat(), interior_vertices + p * interior_edges);
    EXPECT_EQ(dofs.num_u(), mesh.num_elements() * dim_polynomials(p));
    EXPECT_EQ(dofs.num_sigma(), 2 * mesh.num_elements() * dim_polynomials(p));
    EXPECT_EQ(dofs.size(), dofs.num_u() + dofs.num_sigma() + dofs.num_uhat() + dofs.num_sigmahat());
    EXPECT_EQ(DofMap(mesh, p, TrialVariant::Augmented).num_u(), mesh.num_elements() * dim_polynomials(p + 1));
  }
}

TEST(DofMap, GatherListsAreLocalAndCoverEverything)
{
  const Mesh mesh = mesh_at_level(2);
  const Skeleton & sk = mesh.skeleton();
  for (int p = 0; p <= 2; ++p) {
    const DofMap dofs(mesh, p, TrialVariant::Standard);
    std::vector<int> hits(dofs.size(), 0);
    for (int t = 0; t < mesh.num_elements(); ++t) {
      const auto & g = dofs.gather(t);
      ASSERT_EQ(static_cast<int>(g.size()), dofs.local_size());
      std::set<int> allowed;
      for (int v : mesh.triangle(t)) {
        allowed.insert(dofs.vertex_dof(v));
      }
      for (int e : sk.element_edges[t]) {
        for (int i = 0; i < p; ++i) {
          allowed.insert(dofs.edge_node_dof(e, i));
        }
      }
      for (int i = 0; i < dofs.local_uhat(); ++i) {
        const int dof = g[dofs.local_fields() + i];
        EXPECT_TRUE(allowed.count(dof)) << "element " << t;
      }
      for (int i = 0; i < dofs.local_size(); ++i) {
        if (g[i] >= 0) {
          ++hits[g[i]];
        } else {
          EXPECT_GE(i, dofs.local_fields());
          EXPECT_LT(i, dofs.local_fields() + dofs.local_uhat());
        }
      }
    }
    for (int i = 0; i < dofs.uhat_offset(); ++i) {
      EXPECT_EQ(hits[i], 1);
    }
    for (int e = 0; e < mesh.num_edges(); ++e) {
      for (int m = 0; m <= p; ++m) {
        EXPECT_EQ(hits[dofs.sigmahat_offset() + e * (p + 1) + m], sk.boundary_edge[e] ? 1 : 2);
      }
    }
    for (int v = 0; v < mesh.num_vertices(); ++v) {
      EXPECT_EQ(dofs.vertex_dof(v) < 0, static_cast<bool>(sk.boundary_vertex[v]));
    }
  }
}

TEST(L2Projection, ReproducesPolynomials)
{
  const Mesh mesh = mesh_at_level(2);
  for (int p = 0; p <= 3; ++p) {
    const ScalarFunction g = [p](const Point & x) { return std::pow(x.x() - 0.3 * x.y(), p) + 0.5; };
    EXPECT_LT(distance(mesh, l2_project(mesh, p, g), g), 1e-12) << "p=" << p;
  }
}

TEST(L2Projection, ZeroIdempotentAndVector)
{
  const Mesh mesh = mesh_at_level(2);
  const BrokenField zero = l2_project(mesh, 2, ScalarFunction([](const Point &) { return 0.0; }));
  EXPECT_EQ(zero.values.lpNorm<Eigen::Infinity>(), 0.0);

  const ScalarFunction f = [](const Point & x) { return std::sin(pi * x.x()) * std::exp(x.y()); };
  const BrokenField once = l2_project(mesh, 2, f);
  const ScalarBasis basis(2);
  const BrokenField twice = l2_project(mesh, 2, ScalarFunction([&](const Point & x) {
                                         for (int t = 0; t < mesh.num_elements(); ++t) {
                                           const Point xhat = mesh.geometry(t).inverse(x);
                                           if (xhat.minCoeff() > -1e-14 && xhat.sum() < 1 + 1e-14) {
                                             return evaluate(once, basis, t, xhat);
                                           }
                                         }
                                         return 0.0;
                                       }));
  EXPECT_LT((once.values - twice.values).lpNorm<Eigen::Infinity>(), 1e-13);

  const BrokenField v = l2_project(mesh, 1, VectorFunction([](const Point & x) {
                                     return Eigen::Vector2d(2 * x.x() - 1, 3 * x.y() + x.x());
                                   }));
  EXPECT_EQ(v.components, 2);
  const ScalarBasis b1(1);
  for (int t : {0, 17, 63}) {
    const Point xhat(0.2, 0.5);
    const Point x = mesh.geometry(t).map(xhat);
    EXPECT_NEAR(evaluate(v, b1, t, xhat, 0), 2 * x.x() - 1, 1e-13);
    EXPECT_NEAR(evaluate(v, b1, t, xhat, 1), 3 * x.y() + x.x(), 1e-13);
  }
}

TEST(L2Projection, LowestOrderRateForSine)
{
  const ScalarFunction f = [](const Point & x) { return std::sin(pi * x.x()) * std::sin(pi * x.y()); };
  std::vector<double> errors;
  for (int level = 3; level <= 5; ++level) {
    const Mesh mesh = mesh_at_level(level);
    errors.push_back(distance(mesh, l2_project(mesh, 0, f), f));
  }
  for (std::size_t i = 1; i < errors.size(); ++i) {
    EXPECT_NEAR(std::log2(errors[i - 1] / errors[i]), 1.0, 0.02);
  }
}

TEST(RaviartThomas, ReproducesLowestOrderField)
{
  const Mesh mesh = build_initial_mesh();
  const RtField rt = rt_interpolate(mesh, 0, [](const Point & x) { return x; });
  const RTBasis basis(0);
  for (int t = 0; t < mesh.num_elements(); ++t) {
    for (const Point & xhat : {Point(0.2, 0.2), Point(0.6, 0.1), Point(0.1, 0.7)}) {
      const RtValue v = rt_evaluate(mesh, basis, rt, t, xhat);
      EXPECT_LT((v.value - mesh.geometry(t).map(xhat)).norm(), 1e-12);
      EXPECT_NEAR(v.divergence, 2.0, 1e-12);
    }
  }
}

TEST(RaviartThomas, ReproducesMembersOfTheSpace)
{
  // (P^p)^2 + x P^p is RT^p; pick q = x^a y^b with a + b = p.
  const Mesh mesh = mesh_at_level(2);
  for (int p = 1; p <= 3; ++p) {
    const VectorFunction tau = [p](const Point & x) {
      const double q = std::pow(x.x(), p - 1) * x.y();
      return Eigen::Vector2d(std::pow(x.y(), p) - 0.5 + x.x() * q, 2 * x.x() * x.y() * (p > 1) + x.y() * q);
    };
    const RtField rt = rt_interpolate(mesh, p, tau);
    const RTBasis basis(p);
    for (int t = 0; t < mesh.num_elements(); t += 7) {
      for (const Point & xhat : {Point(0.2, 0.2), Point(0.6, 0.1), Point(0.1, 0.7)}) {
        const RtValue v = rt_evaluate(mesh, basis, rt, t, xhat);
        EXPECT_LT((v.value - tau(mesh.geometry(t).map(xhat))).norm(), 1e-12) << "p=" << p << " t=" << t;
      }
    }
  }
}

TEST(RaviartThomas, CommutingDiagramOnInitialMesh)
{
  const Mesh mesh = build_initial_mesh();
  const VectorFunction tau = [](const Point & x) {
    const double s = std::exp(x.x() * x.y());
    return Eigen::Vector2d(std::sin(pi * x.y()) * s, std::sin(pi * x.x()) * s);
  };
  const ScalarFunction div = [](const Point & x) {
    const double s = std::exp(x.x() * x.y());
    return std::sin(pi * x.y()) * x.y() * s + std::sin(pi * x.x()) * x.x() * s;
  };
  for (int p = 0; p <= 1; ++p) {
    const RtField rt = rt_interpolate(mesh, p, tau, 30);
    const BrokenField proj = l2_project(mesh, p, div, 30);
    const RTBasis rt_basis(p);
    const ScalarBasis basis(p);
    const QuadratureRule rule = triangle_quadrature(2 * p + 2);
    double sum = 0.0;
    for (int t = 0; t < mesh.num_elements(); ++t) {
      for (int q = 0; q < rule.size(); ++q) {
        const double d =
          rt_evaluate(mesh, rt_basis, rt, t, rule.points[q]).divergence - evaluate(proj, basis, t, rule.points[q]);
        sum += rule.weights[q] * mesh.geometry(t).det * d * d;
      }
    }
    EXPECT_LE(std::sqrt(sum), 1e-10) << "p=" << p;
  }
}

TEST(RaviartThomas, PiolaPreservesEdgeFluxMoments)
{
  // int_E (Pi tau . n) q = int_E (tau . n) q for q in P^p, on every physical edge.
  const Mesh mesh = mesh_at_level(2);
  const VectorFunction tau = [](const Point & x) {
    return Eigen::Vector2d(std::cos(2 * x.y()) + x.x() * x.x(), std::exp(x.x()) * x.y());
  };
  const EdgeRule er = edge_quadrature(30);
  for (int p = 0; p <= 2; ++p) {
    const RtField rt = rt_interpolate(mesh, p, tau);
    const RTBasis basis(p);
    for (int t = 0; t < mesh.num_elements(); t += 5) {
      const auto & tri = mesh.triangle(t);
      for (int j = 0; j < 3; ++j) {
        const Point a = mesh.vertex(tri[j]);
        const Point b = mesh.vertex(tri[(j + 1) % 3]);
        const double length = (b - a).norm();
        const Eigen::Vector2d n = Eigen::Vector2d(b.y() - a.y(), a.x() - b.x()) / length;
        Eigen::VectorXd exact = Eigen::VectorXd::Zero(p + 1);
        Eigen::VectorXd interp = Eigen::VectorXd::Zero(p + 1);
        for (int q = 0; q < er.size(); ++q) {
          const double s = er.points[q];
          const Eigen::VectorXd leg = shifted_legendre(p, s);
          const double w = er.weights[q] * length;
          exact += w * tau((1 - s) * a + s * b).dot(n) * leg;
          interp += w * rt_evaluate(mesh, basis, rt, t, reference::edge_point(j, s)).value.dot(n) * leg;
        }
        EXPECT_LT((exact - interp).lpNorm<Eigen::Infinity>(), 1e-12);
      }
    }
  }
}

TEST(TrialInterpolant, TraceVanishesOnBoundaryAndMatchesOnInterior)
{
  const Mesh mesh = mesh_at_level(2);
  const ScalarFunction u = [](const Point & x) { return x.x() * (1 - x.x()) * x.y() * (1 - x.y()); };
  const VectorFunction sigma = [](const Point & x) { return Eigen::Vector2d(x.y(), -x.x()); };
  for (int p = 0; p <= 3; ++p) {
    const DofMap dofs(mesh, p, TrialVariant::Standard);
    std::mt19937 rng(7 + p);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::VectorXd random(dofs.size());
    for (int i = 0; i < dofs.size(); ++i) {
      random(i) = dist(rng);
    }
    const Eigen::VectorXd x = trial_interpolant(mesh, dofs, u, sigma);
    const Skeleton & sk = mesh.skeleton();
    for (int e = 0; e < mesh.num_edges(); ++e) {
      for (double s : {0.0, 0.3, 0.5, 1.0}) {
        const Point pt = (1 - s) * mesh.vertex(sk.edge_vertices[e][0]) + s * mesh.vertex(sk.edge_vertices[e][1]);
        if (sk.boundary_edge[e]) {
          EXPECT_EQ(uhat_trace_value(mesh, dofs, random, e, s), 0.0);
          EXPECT_EQ(uhat_trace_value(mesh, dofs, x, e, s), 0.0);
        } else if (p >= 3) {
          // u restricted to an edge is a quartic and lies in the trace space from p = 3.
          EXPECT_NEAR(uhat_trace_value(mesh, dofs, x, e, s), u(pt), 1e-14);
        }
      }
    }
  }
}
