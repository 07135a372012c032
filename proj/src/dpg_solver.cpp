#include "dpglab/dpg_solver.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

namespace dpglab
{

  SolverError::SolverError(const std::string & what, int element)
      : std::runtime_error(element < 0 ? what : what + " (element " + std::to_string(element) + ")"),
        m_element(element)
  {
  }

  namespace
  {
    Eigen::LLT<Eigen::MatrixXd> factor_gram(const ElementSystem & sys)
    {
      Eigen::LLT<Eigen::MatrixXd> llt(sys.G);
      if (llt.info() != Eigen::Success) {
        throw SolverError("Gram matrix is not positive definite", sys.element);
      }
      return llt;
    }

    using Triplets = std::vector<Eigen::Triplet<double>>;

    void scatter(Triplets & triplets, Eigen::VectorXd & rhs, const Eigen::MatrixXd & S, const Eigen::VectorXd & r,
                 const std::vector<int> & index, int offset)
    {
      const int n = static_cast<int>(index.size());
      for (int i = 0; i < n; ++i) {
        const int gi = index[i];
        if (gi < 0) {
          continue;
        }
        rhs(gi - offset) += r(i);
        for (int j = 0; j < n; ++j) {
          if (index[j] >= 0) {
            triplets.emplace_back(gi - offset, index[j] - offset, S(i, j));
          }
        }
      }
    }

    Eigen::SparseMatrix<double> build(int n, const Triplets & triplets)
    {
      Eigen::SparseMatrix<double> A(n, n);
      A.setFromTriplets(triplets.begin(), triplets.end());
      return A;
    }

    double relative_residual(const Eigen::SparseMatrix<double> & A, const Eigen::VectorXd & x,
                             const Eigen::VectorXd & b)
    {
      const double nb = b.norm();
      const double nr = (b - A * x).norm();
      return nb > 0.0 ? nr / nb : nr;
    }

    double backward_error(const Eigen::SparseMatrix<double> & A, const Eigen::VectorXd & x,
                          const Eigen::VectorXd & b)
    {
      // A is symmetric, so its max norm equals the largest column sum.
      double norm_a = 0.0;
      for (int k = 0; k < A.outerSize(); ++k) {
        double sum = 0.0;
        for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it) {
          sum += std::abs(it.value());
        }
        norm_a = std::max(norm_a, sum);
      }
      const double scale = norm_a * x.lpNorm<Eigen::Infinity>() + b.lpNorm<Eigen::Infinity>();
      const double r = (b - A * x).lpNorm<Eigen::Infinity>();
      return scale > 0.0 ? r / scale : r;
    }
  } // namespace

  CondensedElement condense_element(const ElementSystem & sys)
  {
    const auto llt = factor_gram(sys);
    const Eigen::MatrixXd W = llt.matrixL().solve(sys.B);
    const Eigen::VectorXd g = llt.matrixL().solve(sys.F);
    CondensedElement c;
    c.S = W.transpose() * W;
    c.S = 0.5 * (c.S + c.S.transpose());
    c.r = W.transpose() * g;
    return c;
  }

  BrokenField Solution::u() const
  {
    BrokenField f;
    f.degree = dofs.u_degree();
    f.components = 1;
    f.values = coefficients.segment(dofs.u_offset(), dofs.num_u());
    return f;
  }

  BrokenField Solution::sigma() const
  {
    BrokenField f;
    f.degree = dofs.degree();
    f.components = 2;
    f.values = coefficients.segment(dofs.sigma_offset(), dofs.num_sigma());
    return f;
  }

  Eigen::VectorXd Solution::local(int t) const
  {
    const auto & g = dofs.gather(t);
    Eigen::VectorXd x(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      x(i) = g[i] < 0 ? 0.0 : coefficients(g[i]);
    }
    return x;
  }

  GlobalSystem assemble_global_system(const Mesh & mesh, const ProblemSpec & problem,
                                      const DiscretizationConfig & config)
  {
    const ElementAssembler assembler(config);
    const DofMap dofs(mesh, config.degree, config.variant);
    Triplets triplets;
    GlobalSystem sys;
    sys.rhs = Eigen::VectorXd::Zero(dofs.size());
    for (int t = 0; t < mesh.num_elements(); ++t) {
      const ElementSystem es = assembler.system(mesh, dofs, t, problem);
      const CondensedElement c = condense_element(es);
      scatter(triplets, sys.rhs, c.S, c.r, es.gather, 0);
    }
    sys.matrix = build(dofs.size(), triplets);
    return sys;
  }

  Eigen::VectorXd solve_spd(const Eigen::SparseMatrix<double> & A, const Eigen::VectorXd & b,
                            const SolverOptions & options, SolveDiagnostics * diagnostics)
  {
    SolveDiagnostics local;
    SolveDiagnostics & d = diagnostics ? *diagnostics : local;
    d.global_unknowns = static_cast<int>(A.rows());
    Eigen::VectorXd x = Eigen::VectorXd::Zero(A.rows());
    if (b.norm() == 0.0) {
      d.relative_residual = 0.0;
      d.backward_error = 0.0;
      d.iterations = 0;
      return x;
    }

    if (options.kind == LinearSolverKind::ConjugateGradient) {
      Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
      cg.setTolerance(options.tolerance);
      cg.setMaxIterations(options.max_iterations);
      cg.compute(A);
      x = cg.solve(b);
      d.iterations = static_cast<int>(cg.iterations());
      d.relative_residual = relative_residual(A, x, b);
      d.backward_error = backward_error(A, x, b);
      if (cg.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "conjugate gradients did not converge: relative residual " << d.relative_residual << " after "
            << d.iterations << " iterations";
        throw SolverError(msg.str());
      }
      return x;
    }

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
    if (ldlt.info() != Eigen::Success) {
      throw SolverError("sparse factorization failed");
    }
    if (ldlt.vectorD().minCoeff() <= 0.0) {
      throw SolverError("global matrix is not positive definite (rank-deficient discretisation)");
    }
    x = ldlt.solve(b);
    d.backward_error = backward_error(A, x, b);
    d.iterations = 0;
    constexpr int max_refinement = 5;
    while (d.backward_error > options.tolerance && d.iterations < max_refinement) {
      x += ldlt.solve(b - A * x);
      d.backward_error = backward_error(A, x, b);
      ++d.iterations;
    }
    d.relative_residual = relative_residual(A, x, b);
    if (d.backward_error > options.tolerance) {
      std::ostringstream msg;
      msg << "backward error " << d.backward_error << " above tolerance " << options.tolerance;
      throw SolverError(msg.str());
    }
    return x;
  }

  Solution assemble_and_solve(const Mesh & mesh, const ProblemSpec & problem, const DiscretizationConfig & config,
                              const SolverOptions & options)
  {
    Solution sol{config, DofMap(mesh, config.degree, config.variant), {}, {}};
    const DofMap & dofs = sol.dofs;
    sol.diagnostics.unknowns = dofs.size();

    if (!options.static_condensation) {
      const GlobalSystem sys = assemble_global_system(mesh, problem, config);
      sol.coefficients = solve_spd(sys.matrix, sys.rhs, options, &sol.diagnostics);
      return sol;
    }

    const ElementAssembler assembler(config);
    const int nf = dofs.local_fields();
    const int nt = dofs.local_traces();
    const int offset = dofs.uhat_offset();
    const int n_traces = dofs.size() - offset;

    // Per element: S_ff^{-1} S_ft and S_ff^{-1} r_f for the recovery of u and sigma.
    std::vector<Eigen::MatrixXd> field_maps(mesh.num_elements());
    std::vector<Eigen::VectorXd> field_loads(mesh.num_elements());
    Triplets triplets;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_traces);
    std::vector<int> trace_index(nt);
    for (int t = 0; t < mesh.num_elements(); ++t) {
      const ElementSystem es = assembler.system(mesh, dofs, t, problem);
      const CondensedElement c = condense_element(es);
      const Eigen::LLT<Eigen::MatrixXd> ff(c.S.topLeftCorner(nf, nf));
      if (ff.info() != Eigen::Success) {
        throw SolverError("element field block is singular", t);
      }
      field_maps[t] = ff.solve(c.S.topRightCorner(nf, nt));
      field_loads[t] = ff.solve(c.r.head(nf));
      Eigen::MatrixXd Sc = c.S.bottomRightCorner(nt, nt) - c.S.bottomLeftCorner(nt, nf) * field_maps[t];
      Sc = 0.5 * (Sc + Sc.transpose());
      const Eigen::VectorXd rc = c.r.tail(nt) - c.S.bottomLeftCorner(nt, nf) * field_loads[t];
      std::copy(es.gather.begin() + nf, es.gather.end(), trace_index.begin());
      scatter(triplets, rhs, Sc, rc, trace_index, offset);
    }
    const Eigen::SparseMatrix<double> A = build(n_traces, triplets);
    const Eigen::VectorXd traces = solve_spd(A, rhs, options, &sol.diagnostics);

    sol.coefficients = Eigen::VectorXd::Zero(dofs.size());
    sol.coefficients.tail(n_traces) = traces;
    Eigen::VectorXd xt(nt);
    for (int t = 0; t < mesh.num_elements(); ++t) {
      const auto & g = dofs.gather(t);
      for (int i = 0; i < nt; ++i) {
        xt(i) = g[nf + i] < 0 ? 0.0 : traces(g[nf + i] - offset);
      }
      const Eigen::VectorXd xf = field_loads[t] - field_maps[t] * xt;
      for (int i = 0; i < nf; ++i) {
        sol.coefficients(g[i]) = xf(i);
      }
    }
    return sol;
  }

  Solution assemble_and_solve(const Mesh & mesh, const ProblemSpec & problem, int degree, TestNormKind norm,
                              TrialVariant variant, const SolverOptions & options)
  {
    DiscretizationConfig config;
    config.degree = degree;
    config.norm = norm;
    config.variant = variant;
    return assemble_and_solve(mesh, problem, config, options);
  }

  EnergyError error_function(const Mesh & mesh, const ProblemSpec & problem, const Solution & solution)
  {
    const ElementAssembler assembler(solution.config);
    const DofMap & dofs = solution.dofs;
    EnergyError e;
    e.eps.resize(mesh.num_elements());
    e.element_norms.resize(mesh.num_elements());
    e.orthogonality = Eigen::VectorXd::Zero(dofs.size());
    Eigen::VectorXd load = Eigen::VectorXd::Zero(dofs.size());
    double total2 = 0.0;
    for (int t = 0; t < mesh.num_elements(); ++t) {
      const ElementSystem es = assembler.system(mesh, dofs, t, problem);
      const auto llt = factor_gram(es);
      const Eigen::VectorXd x = solution.local(t);
      e.eps[t] = llt.solve(es.F - es.B * x);
      const double norm2 = std::max(0.0, e.eps[t].dot(es.G * e.eps[t]));
      e.element_norms[t] = std::sqrt(norm2);
      total2 += norm2;
      const Eigen::VectorXd bt_eps = es.B.transpose() * e.eps[t];
      const Eigen::VectorXd bt_load = es.B.transpose() * llt.solve(es.F);
      for (std::size_t i = 0; i < es.gather.size(); ++i) {
        if (es.gather[i] >= 0) {
          e.orthogonality(es.gather[i]) += bt_eps(i);
          load(es.gather[i]) += bt_load(i);
        }
      }
    }
    e.total = std::sqrt(total2);
    e.load_norm = load.lpNorm<Eigen::Infinity>();
    return e;
  }

} // namespace dpglab
