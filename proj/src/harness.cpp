#include "dpglab/harness.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "dpglab/postprocess.hpp"
#include "dpglab/problems.hpp"
#include "dpglab/quadrature.hpp"
#include "dpglab/reference_element.hpp"

namespace dpglab
{

  double l2_error(const Mesh & mesh, const BrokenField & approx, const ScalarFunction & exact, int exactness)
  {
    const ScalarBasis basis(approx.degree);
    const QuadratureRule rule = triangle_quadrature(exactness < 0 ? 2 * approx.degree + 6 : exactness);
    std::vector<Eigen::VectorXd> phi;
    for (const auto & x : rule.points) {
      phi.push_back(basis.values(x));
    }
    const int n = basis.size();
    double sum = 0.0;
    for (int t = 0; t < mesh.num_elements(); ++t) {
      const AffineMap & map = mesh.geometry(t);
      const auto c = approx.element(t).head(n);
      double local = 0.0;
      for (int q = 0; q < rule.size(); ++q) {
        const double d = exact(map.map(rule.points[q])) - c.dot(phi[q]);
        local += rule.weights[q] * d * d;
      }
      sum += local * map.det;
    }
    return std::sqrt(sum);
  }

  double l2_distance(const Mesh & mesh, const BrokenField & a, const BrokenField & b)
  {
    if (a.components != b.components) {
      throw std::invalid_argument("l2_distance: component counts differ");
    }
    const int na = dim_polynomials(a.degree);
    const int nb = dim_polynomials(b.degree);
    const int n = std::max(na, nb);
    double sum = 0.0;
    Eigen::VectorXd d(n);
    for (int t = 0; t < mesh.num_elements(); ++t) {
      const auto ca = a.element(t);
      const auto cb = b.element(t);
      double local = 0.0;
      for (int c = 0; c < a.components; ++c) {
        d.setZero();
        d.head(na) += ca.segment(c * na, na);
        d.head(nb) -= cb.segment(c * nb, nb);
        local += d.squaredNorm();
      }
      sum += local * mesh.geometry(t).det;
    }
    return std::sqrt(sum);
  }

  double integral(const Mesh & mesh, const BrokenField & field, int t, int c)
  {
    const ScalarBasis basis(field.degree);
    const QuadratureRule rule = triangle_quadrature(std::max(field.degree, 1));
    const int n = basis.size();
    const auto coefficients = field.element(t).segment(c * n, n);
    double sum = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      sum += rule.weights[q] * coefficients.dot(basis.values(rule.points[q]));
    }
    return sum * mesh.geometry(t).det;
  }

  double rate(double e_prev, double e_cur)
  {
    if (!(e_prev > 0.0) || !(e_cur > 0.0)) {
      return std::numeric_limits<double>::quiet_NaN();
    }
    return std::log2(e_prev / e_cur);
  }

  VariantSelection parse_variant(std::string_view name)
  {
    if (name == "standard") {
      return VariantSelection::Standard;
    }
    if (name == "augmented") {
      return VariantSelection::Augmented;
    }
    if (name == "both") {
      return VariantSelection::Both;
    }
    throw std::invalid_argument("unknown variant '" + std::string(name) + "' (expected standard, augmented or both)");
  }

  TableFormat parse_format(std::string_view name)
  {
    if (name == "csv") {
      return TableFormat::Csv;
    }
    if (name == "markdown" || name == "md") {
      return TableFormat::Markdown;
    }
    throw std::invalid_argument("unknown format '" + std::string(name) + "' (expected csv or markdown)");
  }

  void StudyConfig::validate() const
  {
    if (example != 1 && example != 2) {
      throw std::invalid_argument("example must be 1 or 2");
    }
    if (degree < 0) {
      throw std::invalid_argument("degree must be non-negative");
    }
    if (levels < 2) {
      throw std::invalid_argument("a convergence study needs at least 2 levels");
    }
    if ((k1 >= 0) != (k2 >= 0)) {
      throw std::invalid_argument("test degrees k1 and k2 must be given together");
    }
    if (k1 >= 0 && (k1 < 1 || k2 < 1)) {
      throw std::invalid_argument("test degrees must be at least 1");
    }
    if (!(solver.tolerance > 0.0)) {
      throw std::invalid_argument("solver tolerance must be positive");
    }
  }

  DiscretizationConfig StudyConfig::discretization(TrialVariant trial) const
  {
    DiscretizationConfig c;
    c.degree = degree;
    c.variant = trial;
    c.norm = norm;
    c.test_degree_scalar = k1;
    c.test_degree_vector = k2;
    c.triangle_exactness = triangle_exactness;
    c.edge_exactness = edge_exactness;
    return c;
  }

  ErrorTable run_convergence_study(const StudyConfig & config, std::ostream * log)
  {
    config.validate();
    const ProblemSpec problem = example(config.example);
    const int p = config.degree;
    const int exactness = 2 * (p + 1) + 6;
    const bool standard = config.variant != VariantSelection::Augmented;
    const bool augmented = config.variant != VariantSelection::Standard;

    ErrorTable table;
    Mesh mesh = build_initial_mesh();
    for (int level = 1; level <= config.levels; ++level) {
      if (level > 1) {
        mesh = refine_uniform(mesh);
      }
      TableRow row;
      row.degree = p;
      row.num_elements = mesh.num_elements();
      try {
        if (standard) {
          const Solution sol =
            assemble_and_solve(mesh, problem, config.discretization(TrialVariant::Standard), config.solver);
          const BrokenField uh = sol.u();
          const BrokenField proj = l2_project(mesh, p, problem.exact.u, exactness);
          row.err_u = l2_error(mesh, uh, problem.exact.u, exactness);
          row.err_proj = l2_distance(mesh, proj, uh);
          row.err_best = l2_error(mesh, proj, problem.exact.u, exactness);
          row.err_post = l2_error(mesh, postprocess_u(mesh, problem, sol), problem.exact.u, exactness);
          row.energy = error_function(mesh, problem, sol).total;
        }
        if (augmented) {
          const Solution sol =
            assemble_and_solve(mesh, problem, config.discretization(TrialVariant::Augmented), config.solver);
          row.err_aug = l2_error(mesh, sol.u(), problem.exact.u, exactness);
        }
      } catch (const SolverError & e) {
        throw SolverError("level " + std::to_string(level) + ": " + e.what());
      }
      if (!table.rows.empty()) {
        const TableRow & prev = table.rows.back();
        row.rate_u = rate(prev.err_u, row.err_u);
        row.rate_proj = rate(prev.err_proj, row.err_proj);
        row.rate_aug = rate(prev.err_aug, row.err_aug);
        row.rate_post = rate(prev.err_post, row.err_post);
        row.rate_energy = rate(prev.energy, row.energy);
      }
      table.rows.push_back(row);
      if (log) {
        *log << "level " << level << " nT=" << row.num_elements << " err_u=" << format_error(row.err_u)
             << " err_proj=" << format_error(row.err_proj) << " err_aug=" << format_error(row.err_aug)
             << " err_post=" << format_error(row.err_post) << '\n';
      }
    }
    return table;
  }

  std::string format_error(double value)
  {
    if (!std::isfinite(value)) {
      return "---";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", value);
    return buf;
  }

  std::string format_rate(double value)
  {
    if (!std::isfinite(value)) {
      return "---";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", value);
    return buf;
  }

  namespace
  {
    std::vector<std::string> row_fields(const TableRow & r)
    {
      return {std::to_string(r.degree), std::to_string(r.num_elements), format_error(r.err_u),
              format_rate(r.rate_u),    format_error(r.err_proj),       format_rate(r.rate_proj),
              format_error(r.err_aug),  format_rate(r.rate_aug),        format_error(r.err_post),
              format_rate(r.rate_post)};
    }

    std::vector<std::string> split(std::string_view line, char sep)
    {
      std::vector<std::string> out;
      std::size_t start = 0;
      while (true) {
        const std::size_t pos = line.find(sep, start);
        std::string_view piece = line.substr(start, pos == std::string_view::npos ? pos : pos - start);
        while (!piece.empty() && std::isspace(static_cast<unsigned char>(piece.front()))) {
          piece.remove_prefix(1);
        }
        while (!piece.empty() && std::isspace(static_cast<unsigned char>(piece.back()))) {
          piece.remove_suffix(1);
        }
        out.emplace_back(piece);
        if (pos == std::string_view::npos) {
          return out;
        }
        start = pos + 1;
      }
    }

    double parse_number(const std::string & field)
    {
      if (field == "---") {
        return std::numeric_limits<double>::quiet_NaN();
      }
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw std::invalid_argument("malformed table entry '" + field + "'");
      }
      return value;
    }

    int parse_int(const std::string & field)
    {
      int value = 0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw std::invalid_argument("malformed integer '" + field + "'");
      }
      return value;
    }
  } // namespace

  std::string emit_table(const ErrorTable & table, TableFormat format)
  {
    std::ostringstream out;
    const std::vector<std::string> header = split(table_header, ',');
    if (format == TableFormat::Csv) {
      out << table_header << '\n';
      for (const auto & row : table.rows) {
        const auto f = row_fields(row);
        for (std::size_t i = 0; i < f.size(); ++i) {
          out << (i ? "," : "") << f[i];
        }
        out << '\n';
      }
      return out.str();
    }
    auto line = [&out](const std::vector<std::string> & fields) {
      out << '|';
      for (const auto & f : fields) {
        out << ' ' << f << " |";
      }
      out << '\n';
    };
    line(header);
    out << '|';
    for (std::size_t i = 0; i < header.size(); ++i) {
      out << "---|";
    }
    out << '\n';
    for (const auto & row : table.rows) {
      line(row_fields(row));
    }
    return out.str();
  }

  ErrorTable parse_table(std::string_view text)
  {
    const std::vector<std::string> header = split(table_header, ',');
    ErrorTable table;
    bool seen_header = false;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) {
        continue;
      }
      std::vector<std::string> fields;
      if (line.front() == '|') {
        std::string_view body(line);
        body.remove_prefix(1);
        while (!body.empty() && (body.back() == '\r' || body.back() == ' ')) {
          body.remove_suffix(1);
        }
        if (!body.empty() && body.back() == '|') {
          body.remove_suffix(1);
        }
        if (body.find_first_not_of("-:| ") == std::string_view::npos) {
          continue;
        }
        fields = split(body, '|');
      } else {
        fields = split(line, ',');
      }
      if (!seen_header) {
        if (fields != header) {
          throw std::invalid_argument("unexpected table header: " + line);
        }
        seen_header = true;
        continue;
      }
      if (fields.size() != header.size()) {
        throw std::invalid_argument("wrong number of columns: " + line);
      }
      TableRow r;
      r.degree = parse_int(fields[0]);
      r.num_elements = parse_int(fields[1]);
      r.err_u = parse_number(fields[2]);
      r.rate_u = parse_number(fields[3]);
      r.err_proj = parse_number(fields[4]);
      r.rate_proj = parse_number(fields[5]);
      r.err_aug = parse_number(fields[6]);
      r.rate_aug = parse_number(fields[7]);
      r.err_post = parse_number(fields[8]);
      r.rate_post = parse_number(fields[9]);
      table.rows.push_back(r);
    }
    if (!seen_header) {
      throw std::invalid_argument("table header missing");
    }
    return table;
  }

} // namespace dpglab
