#include "chanmetric/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace chanmetric;

  CLI::App app{"Extremal monotone norms on finite channel tangent spaces"};
  app.require_subcommand(1);

  std::string instance_path;
  auto* compute = app.add_subcommand("compute", "gmin/gmax report for an instance file");
  compute->add_option("file", instance_path, "instance JSON")->required();

  cli::VerifyOptions verify_options;
  auto* verify = app.add_subcommand("verify", "randomised axiom checks and the bilinearity probe");
  verify->add_option("--axiom", verify_options.axiom, "M1, M2, E, N, GMAXGEQ or BILINEAR")->required();
  verify->add_option("--trials", verify_options.trials, "number of random instances");
  verify->add_option("--seed", verify_options.seed, "seed of the first trial");
  verify->add_option("--k", verify_options.inputs, "input alphabet size");
  verify->add_option("--l", verify_options.outputs, "output alphabet size");
  verify->add_option("--metric", verify_options.metric, "gmin or gmax");
  verify->add_option("--t", verify_options.t, "BILINEAR: channel parameter t");
  verify->add_option("--s", verify_options.s, "BILINEAR: channel parameter s");
  verify->add_option("--samples", verify_options.samples, "BILINEAR: number of coefficients");

  cli::SweepOptions sweep_options;
  std::string tangent_path;
  auto* sweep = app.add_subcommand("sweep", "gmin/gmax over the binary (a, c) grid as CSV");
  sweep->add_option("--grid", sweep_options.grid, "interior grid points per axis")->required();
  sweep->add_option("--out", sweep_options.output, "CSV output path")->required();
  sweep->add_option("--tangent", tangent_path, "tangent object overriding [[-1, 1], [1, -1]]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitInvalid;
  }

  if (*compute) return cli::cmd_compute(instance_path, std::cout, std::cerr);
  if (*verify) return cli::cmd_verify(verify_options, std::cout, std::cerr);
  if (!tangent_path.empty()) sweep_options.tangent_file = tangent_path;
  return cli::cmd_sweep(sweep_options, std::cerr);
}
