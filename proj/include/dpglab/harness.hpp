// Error integration, convergence studies and error tables.

#ifndef DPGLAB_HARNESS_HPP
#define DPGLAB_HARNESS_HPP

#include <iosfwd>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "dpglab/coefficients.hpp"
#include "dpglab/dpg_solver.hpp"
#include "dpglab/mesh.hpp"
#include "dpglab/spaces.hpp"

namespace dpglab
{

  /// sqrt(sum_T int_T (exact - approx)^2); a negative `exactness` selects 2*degree+6.
  double l2_error(const Mesh & mesh, const BrokenField & approx, const ScalarFunction & exact, int exactness = -1);

  /// L2 distance of two broken fields with the same number of components. Both live in
  /// the mapped orthonormal basis, so the distance follows from the coefficients.
  double l2_distance(const Mesh & mesh, const BrokenField & a, const BrokenField & b);

  /// int_T of component c.
  double integral(const Mesh & mesh, const BrokenField & field, int t, int c = 0);

  /// log2(e_prev / e_cur); NaN when either value is not positive.
  double rate(double e_prev, double e_cur);

  enum class VariantSelection
  {
    Standard,
    Augmented,
    Both
  };

  enum class TableFormat
  {
    Csv,
    Markdown
  };

  VariantSelection parse_variant(std::string_view name);
  TableFormat parse_format(std::string_view name);

  struct StudyConfig
  {
    int example = 1;
    TestNormKind norm = TestNormKind::QuasiOptimal;
    int degree = 0;
    int levels = 2;
    VariantSelection variant = VariantSelection::Both;
    int k1 = -1; ///< negative: degree + 2
    int k2 = -1;
    int triangle_exactness = -1;
    int edge_exactness = -1;
    SolverOptions solver;

    /// Throws std::invalid_argument for inconsistent settings.
    void validate() const;
    DiscretizationConfig discretization(TrialVariant variant) const;
  };

  /// One refinement level. Quantities that were not computed are NaN; rates are NaN on
  /// the first row.
  struct TableRow
  {
    static constexpr double none = std::numeric_limits<double>::quiet_NaN();

    int degree = 0;
    int num_elements = 0;
    double err_u = none, rate_u = none;       ///< |u - u_h|
    double err_proj = none, rate_proj = none; ///< |Pi^p u - u_h|
    double err_aug = none, rate_aug = none;   ///< |u - u_h^+|
    double err_post = none, rate_post = none; ///< |u - u-tilde_h|
    // Not part of the emitted table.
    double err_best = none;                   ///< |u - Pi^p u|
    double energy = none, rate_energy = none; ///< |eps_hk|_V of the standard solve
  };

  struct ErrorTable
  {
    std::vector<TableRow> rows;
  };

  /// Runs the levels 1..levels starting from the initial mesh. Progress lines go to `log`
  /// if given. Solver errors are rethrown with the level attached.
  ErrorTable run_convergence_study(const StudyConfig & config, std::ostream * log = nullptr);

  inline constexpr std::string_view table_header =
    "p,nT,err_u,rate_u,err_proj,rate_proj,err_aug,rate_aug,err_post,rate_post";

  std::string emit_table(const ErrorTable & table, TableFormat format);
  /// Inverse of emit_table for either format; throws std::invalid_argument.
  ErrorTable parse_table(std::string_view text);

  std::string format_error(double value);
  std::string format_rate(double value);

} // namespace dpglab

#endif
