// Acceptance matrix: convergence studies checked against reference rates and errors,
// plus the structural property suite.

#ifndef DPGLAB_ACCEPTANCE_HPP
#define DPGLAB_ACCEPTANCE_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "dpglab/forms.hpp"
#include "dpglab/harness.hpp"

namespace dpglab
{

  struct CriterionResult
  {
    int id = 0;
    std::string title;
    bool passed = false;
    std::vector<std::string> details;
  };

  /// Residual b(U, v_i) - F(v_i) of the exact tuple U = (u, sigma, u|_S, sigma.n) for every
  /// test basis function on element t, evaluated directly from the problem callables.
  Eigen::VectorXd ultraweak_residual(const Mesh & mesh, int t, const ProblemSpec & problem,
                                     const DiscretizationConfig & config, int exactness);

  /// Structural checks (criterion 6).
  CriterionResult property_suite();

  /// Runs every criterion; progress lines go to `log` if given.
  std::vector<CriterionResult> run_acceptance(std::ostream * log = nullptr);

  /// "PASS [n] title" / "FAIL [n] title" followed by indented details.
  std::string format_result(const CriterionResult & result);

} // namespace dpglab

#endif
