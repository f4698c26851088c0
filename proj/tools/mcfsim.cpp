// mcfsim: run scenarios, convergence studies and the sphere oracle.
//
//   mcfsim run scenario.json [--output-dir DIR] [--seed S] [--levels L] [--quiet]
//   mcfsim convergence scenario.json --levels 3 [--output-dir DIR]
//   mcfsim oracle --n 2 --kappa0 0.5 --t 0 --t -1 [--t-origin T0]
//
// Exit codes: 0 pass, 1 error, 2 check failed, 3 inconclusive only.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "mcf/errors.hpp"
#include "mcf/scenario.hpp"

namespace {

void summarize(const mcf::RunReport& rep) {
  std::cout << "scenario " << rep.scenario << ": " << rep.termination << " after " << rep.states
            << " states, t = " << rep.t_final << '\n';
  if (rep.sphere_oracle)
    std::cout << "  sphere oracle: cos r relative error " << rep.sphere_oracle->relative_error << '\n';
  for (const auto& c : rep.checks) std::cout << "  " << c.kind << ": " << mcf::to_string(c.status) << '\n';
  std::cout << "status: " << mcf::to_string(rep.status) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean curvature flow of axisymmetric hypersurfaces in spheres"};
  app.require_subcommand(1);

  std::string scenario_file, output_dir;
  std::uint64_t seed = 0;
  int levels = 3;
  bool quiet = false;

  auto* run = app.add_subcommand("run", "flow a scenario and run its checks");
  run->add_option("scenario", scenario_file, "scenario JSON file")->required();
  run->add_option("--output-dir", output_dir, "overrides output_dir of the scenario");
  run->add_option("--seed", seed, "seed for the sampled Harnack directions");
  auto* run_levels = run->add_option("--levels", levels, "grid levels for the identities check")->check(CLI::Range(3, 8));
  run->add_flag("--quiet", quiet, "no summary on stdout");

  auto* conv = app.add_subcommand("convergence", "identity residual orders over grid refinements");
  conv->add_option("scenario", scenario_file, "scenario JSON file")->required();
  conv->add_option("--levels", levels, "number of levels N = 64, 128, ...")->required();
  conv->add_option("--output-dir", output_dir, "directory for convergence.csv");
  conv->add_flag("--quiet", quiet, "do not echo the table");

  int n = 2;
  double kappa0 = 0.5;
  std::vector<double> times;
  std::optional<double> t_origin;
  auto* oracle = app.add_subcommand("oracle", "closed forms of the shrinking sphere family (CSV on stdout)");
  oracle->add_option("--n", n, "hypersurface dimension")->check(CLI::Range(2, 64));
  oracle->add_option("--kappa0", kappa0, "cos r(0), in (0, 1)")->required();
  oracle->add_option("--t", times, "evaluation times")->required()->allow_extra_args(false);
  oracle->add_option("--t-origin", t_origin, "origin of the Harnack term; ancient limit when omitted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run) {
      const mcf::Scenario sc = mcf::load_scenario(scenario_file);
      mcf::RunOptions opt;
      if (!output_dir.empty()) opt.output_dir = output_dir;
      opt.seed = seed;
      if (*run_levels) opt.levels = levels;
      const mcf::RunReport rep = mcf::execute(sc, opt);
      if (!quiet) summarize(rep);
      return mcf::exit_code(rep.status);
    }
    if (*conv) {
      if (levels < 3) {
        std::cerr << "error: --levels must be >= 3\n";
        return 1;
      }
      const mcf::Scenario sc = mcf::load_scenario(scenario_file);
      const mcf::IdentityReport rep = mcf::convergence(sc, levels);
      const std::filesystem::path dir = output_dir.empty() ? std::filesystem::path(sc.output_dir) : std::filesystem::path(output_dir);
      std::filesystem::create_directories(dir);
      std::ofstream csv(dir / "convergence.csv");
      mcf::write_convergence_csv(csv, rep);
      if (!quiet) mcf::write_convergence_csv(std::cout, rep);
      return rep.pass ? 0 : 2;
    }
    if (*oracle) {
      if (!(kappa0 > 0.0 && kappa0 < 1.0)) {
        std::cerr << "error: kappa0 must lie in (0, 1)\n";
        return 1;
      }
      const auto rows = mcf::oracle_table(n, kappa0, times, t_origin);
      mcf::write_oracle_csv(std::cout, rows);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
