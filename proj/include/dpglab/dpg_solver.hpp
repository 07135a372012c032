// Normal-equation form of the practical DPG method: per element S = B^T G^{-1} B and
// r = B^T G^{-1} F, global assembly over the trial unknowns, sparse SPD solve, and the
// error function eps = G^{-1} (F - B u).

#ifndef DPGLAB_DPG_SOLVER_HPP
#define DPGLAB_DPG_SOLVER_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "dpglab/forms.hpp"
#include "dpglab/mesh.hpp"
#include "dpglab/problems.hpp"
#include "dpglab/spaces.hpp"

namespace dpglab
{

  class SolverError : public std::runtime_error
  {
  public:
    explicit SolverError(const std::string & what, int element = -1);
    /// Offending element, -1 for global failures.
    int element() const { return m_element; }

  private:
    int m_element;
  };

  struct CondensedElement
  {
    Eigen::MatrixXd S;
    Eigen::VectorXd r;
  };

  /// Throws SolverError naming the element when the Gram matrix is not positive definite.
  CondensedElement condense_element(const ElementSystem & sys);

  enum class LinearSolverKind
  {
    Direct,           ///< sparse LDL^T with iterative refinement
    ConjugateGradient ///< Jacobi-preconditioned CG
  };

  struct SolverOptions
  {
    LinearSolverKind kind = LinearSolverKind::Direct;
    /// Direct solver: bound on the normwise backward error |b - Ax| / (|A| |x| + |b|) in
    /// the max norm. CG: bound on |b - Ax|_2 / |b|_2.
    double tolerance = 1e-12;
    int max_iterations = 20000;
    /// Eliminate the element-local u and sigma unknowns before the global solve.
    bool static_condensation = true;
  };

  struct SolveDiagnostics
  {
    int unknowns = 0;        ///< all trial unknowns
    int global_unknowns = 0; ///< size of the system actually factored
    double relative_residual = 0.0; ///< |b - Ax|_2 / |b|_2
    double backward_error = 0.0;
    int iterations = 0; ///< CG iterations or refinement sweeps
  };

  struct Solution
  {
    DiscretizationConfig config;
    DofMap dofs;
    Eigen::VectorXd coefficients;
    SolveDiagnostics diagnostics;

    BrokenField u() const;
    BrokenField sigma() const;
    Eigen::VectorXd local(int t) const;
  };

  struct GlobalSystem
  {
    Eigen::SparseMatrix<double> matrix;
    Eigen::VectorXd rhs;
  };

  /// Sum of the element normal equations over all trial unknowns (no condensation).
  GlobalSystem assemble_global_system(const Mesh & mesh, const ProblemSpec & problem,
                                      const DiscretizationConfig & config);

  /// Solves a sparse SPD system to the requested relative residual; throws SolverError.
  Eigen::VectorXd solve_spd(const Eigen::SparseMatrix<double> & A, const Eigen::VectorXd & b,
                            const SolverOptions & options, SolveDiagnostics * diagnostics = nullptr);

  Solution assemble_and_solve(const Mesh & mesh, const ProblemSpec & problem, const DiscretizationConfig & config,
                              const SolverOptions & options = {});
  Solution assemble_and_solve(const Mesh & mesh, const ProblemSpec & problem, int degree, TestNormKind norm,
                              TrialVariant variant, const SolverOptions & options = {});

  struct EnergyError
  {
    std::vector<Eigen::VectorXd> eps; ///< test-space coefficients per element
    std::vector<double> element_norms;
    double total = 0.0;
    /// sum_T B_T^T eps_T over the global trial unknowns; vanishes for the discrete solution.
    Eigen::VectorXd orthogonality;
    /// Max norm of sum_T B_T^T G_T^{-1} F_T, the scale for `orthogonality`.
    double load_norm = 0.0;
  };

  EnergyError error_function(const Mesh & mesh, const ProblemSpec & problem, const Solution & solution);

} // namespace dpglab

#endif
