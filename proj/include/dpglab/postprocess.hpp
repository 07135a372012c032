// Elementwise Neumann postprocessing: u-tilde in P^{p+1}(T) with
//
//   (grad u-tilde, grad w)_T = (C f_vec - C sigma_h + beta u_h, grad w)_T  for all w in P^{p+1}(T),
//   (u-tilde, 1)_T = (u_h, 1)_T.

#ifndef DPGLAB_POSTPROCESS_HPP
#define DPGLAB_POSTPROCESS_HPP

#include "dpglab/dpg_solver.hpp"
#include "dpglab/mesh.hpp"
#include "dpglab/problems.hpp"
#include "dpglab/spaces.hpp"

namespace dpglab
{

  /// Broken field of degree p+1 (p the trial degree of sigma); throws SolverError naming
  /// the element if a bordered system is singular.
  BrokenField postprocess_u(const Mesh & mesh, const ProblemSpec & problem, const Solution & solution);

  /// Same construction from explicit u and sigma fields; `degree` is the degree of the result.
  BrokenField postprocess_u(const Mesh & mesh, const ProblemSpec & problem, const BrokenField & u,
                            const BrokenField & sigma, int degree);

} // namespace dpglab

#endif
