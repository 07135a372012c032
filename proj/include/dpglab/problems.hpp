// Manufactured model problems. Data f and the flux sigma are derived from a prescribed
// exact solution through the first-order system.

#ifndef DPGLAB_PROBLEMS_HPP
#define DPGLAB_PROBLEMS_HPP

#include <string>

#include "dpglab/coefficients.hpp"

namespace dpglab
{

  struct ExactSolution
  {
    ScalarFunction u;
    VectorFunction gradient;
    MatrixFunction hessian;
  };

  struct DerivedData
  {
    VectorFunction sigma;
    ScalarFunction div_sigma;
    ScalarFunction f;
  };

  /// sigma = f_vec - C^{-1} grad u + C^{-1} beta u, f = div sigma + gamma u.
  ///
  /// C must be piecewise constant; div f_vec and div(C^{-1} beta) are supplied per smooth
  /// region (empty callables mean zero).
  DerivedData derive_data(const ExactSolution & exact, const Coefficients & coeffs, const VectorFunction & f_vec,
                          const ScalarFunction & div_f_vec = {}, const ScalarFunction & div_cinv_beta = {});

  struct ProblemSpec
  {
    std::string name;
    Coefficients coeffs;
    ExactSolution exact;
    VectorFunction f_vec;
    VectorFunction sigma;
    ScalarFunction div_sigma;
    ScalarFunction f;
    /// 1/2 div(C^{-1} beta) + gamma, required to be >= 0.
    ScalarFunction coercivity;
  };

  /// Assemble a problem from an exact solution and coefficients.
  ProblemSpec make_problem(std::string name, Coefficients coeffs, ExactSolution exact, VectorFunction f_vec,
                           ScalarFunction div_f_vec = {}, ScalarFunction div_cinv_beta = {});

  /// u(x,y) = sin(pi x) sin(pi y).
  ExactSolution sine_solution();

  /// u(x,y) = x(1-x) y(1-y), a quartic vanishing on the boundary.
  ExactSolution bubble_solution();

  /// Example 1: C = I, beta = 0, gamma = 1 on conv{(0,0),(1,0),(1/2,1/2)}, 1/2 on
  /// conv{(1,1),(0,1),(1/2,1/2)}, 0 elsewhere; f_vec = (1,1) for x < 1/2 and (1,-1) for
  /// x >= 1/2. Example 2: C = I, beta = (1,1), gamma = 0, f_vec = 0.
  ProblemSpec example(int id);

  /// All data zero (exact solution zero) for the given coefficients.
  ProblemSpec zero_data_problem(const Coefficients & coeffs);

} // namespace dpglab

#endif
