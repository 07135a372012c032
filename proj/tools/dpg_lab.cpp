// dpg-lab: convergence studies, the acceptance matrix and mesh export.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dpglab/acceptance.hpp"
#include "dpglab/harness.hpp"
#include "dpglab/mesh.hpp"

namespace
{

  struct StudyArgs
  {
    int example = 1;
    std::string norm = "qopt";
    int degree = 0;
    int levels = 2;
    std::string variant = "both";
    int k1 = -1;
    int k2 = -1;
    std::string format = "csv";
    std::string out;
    double solver_tol = 1e-12;
    bool verbose = false;
  };

  int run_study(const StudyArgs & args)
  {
    dpglab::StudyConfig config;
    config.example = args.example;
    config.norm = dpglab::parse_test_norm(args.norm);
    config.degree = args.degree;
    config.levels = args.levels;
    config.variant = dpglab::parse_variant(args.variant);
    config.k1 = args.k1;
    config.k2 = args.k2;
    config.solver.tolerance = args.solver_tol;
    const dpglab::TableFormat format = dpglab::parse_format(args.format);

    const dpglab::ErrorTable table = dpglab::run_convergence_study(config, args.verbose ? &std::cerr : nullptr);
    const std::string text = dpglab::emit_table(table, format);
    if (args.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream file(args.out);
      if (!file) {
        throw std::runtime_error("cannot open " + args.out + " for writing");
      }
      file << text;
    }
    return 0;
  }

  int run_verify(bool verbose)
  {
    const auto results = dpglab::run_acceptance(verbose ? &std::cerr : nullptr);
    bool all = true;
    for (const auto & r : results) {
      std::cout << dpglab::format_result(r);
      all = all && r.passed;
    }
    std::cout << (all ? "all criteria passed" : "some criteria FAILED") << '\n';
    return all ? 0 : 1;
  }

  int run_mesh(int level, const std::string & nodes, const std::string & elements)
  {
    const dpglab::Mesh mesh = dpglab::mesh_at_level(level);
    std::ofstream n(nodes);
    std::ofstream e(elements);
    if (!n || !e) {
      throw std::runtime_error("cannot open mesh output files");
    }
    dpglab::write_nodes(mesh, n);
    dpglab::write_elements(mesh, e);
    return 0;
  }

} // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Practical DPG solver for elliptic first-order systems"};
  app.require_subcommand(1);

  StudyArgs study;
  auto * s = app.add_subcommand("study", "Run a convergence study and print the error table");
  s->add_option("--example", study.example, "Model problem")->required()->check(CLI::IsMember({1, 2}));
  s->add_option("--norm", study.norm, "Test norm")->required()->check(CLI::IsMember({"qopt", "std", "simple"}));
  s->add_option("--p", study.degree, "Polynomial degree")->required()->check(CLI::Range(0, 3));
  s->add_option("--levels", study.levels, "Number of refinement levels (>= 2)")->required()->check(CLI::Range(2, 12));
  s->add_option("--variant", study.variant, "Trial space variant")
    ->check(CLI::IsMember({"standard", "augmented", "both"}))
    ->capture_default_str();
  auto * k1 = s->add_option("--k1", study.k1, "Test degree for v (default p+2)")->check(CLI::Range(1, 28));
  auto * k2 = s->add_option("--k2", study.k2, "Test degree for tau (default p+2)")->check(CLI::Range(1, 28));
  k1->needs(k2);
  k2->needs(k1);
  s->add_option("--format", study.format, "Output format")
    ->check(CLI::IsMember({"csv", "markdown"}))
    ->capture_default_str();
  s->add_option("--out", study.out, "Write the table to this file instead of stdout");
  s->add_option("--solver-tol", study.solver_tol, "Linear solver tolerance")
    ->check(CLI::PositiveNumber)
    ->capture_default_str();
  s->add_flag("-v,--verbose", study.verbose, "Print progress to stderr");

  bool verify_verbose = false;
  auto * v = app.add_subcommand("verify", "Run the acceptance matrix and print PASS/FAIL per criterion");
  v->add_flag("-v,--verbose", verify_verbose, "Print progress to stderr");

  int mesh_level = 1;
  std::string nodes = "nodes.txt";
  std::string elements = "elements.txt";
  auto * m = app.add_subcommand("mesh", "Write the mesh of a refinement level as node and element lists");
  m->add_option("--level", mesh_level, "Refinement level (1 = initial mesh)")->check(CLI::Range(1, 10));
  m->add_option("--nodes", nodes, "Output file for 'x y' lines")->capture_default_str();
  m->add_option("--elements", elements, "Output file for 'i j k' lines (0-based)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    return app.exit(e);
  }

  try {
    if (s->parsed()) {
      return run_study(study);
    }
    if (v->parsed()) {
      return run_verify(verify_verbose);
    }
    return run_mesh(mesh_level, nodes, elements);
  } catch (const std::exception & e) {
    std::cerr << "dpg-lab: error: " << e.what() << '\n';
    return 2;
  }
}
