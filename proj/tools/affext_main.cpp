#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace affext;
  cli::RunConfig cfg;
  std::vector<Residue> seed_points;
  std::size_t m = 0;
  std::uint64_t sample_count = 0;

  CLI::App app{"Explicit affine extractor F(x) = A x^d over prime fields, with a brute-force verification lab"};
  app.require_subcommand(1);

  auto add_budgets = [&](CLI::App* sub) {
    sub->add_option("--point-budget", cfg.budget.points, "Max points per enumeration")->check(CLI::PositiveNumber);
    sub->add_option("--subspace-budget", cfg.budget.subspaces, "Max subspaces per sweep")
        ->check(CLI::PositiveNumber);
    sub->add_option("--minor-budget", cfg.budget.minor_ops, "Max scalar ops for MDS checks")
        ->check(CLI::PositiveNumber);
  };

  auto* plan = app.add_subcommand("plan", "Generate exponents and matrix, write a spec file");
  plan->add_option("--q", cfg.q, "Prime modulus")->required();
  plan->add_option("--n", cfg.n, "Input length")->required();
  plan->add_option("--k", cfg.k, "Source subspace dimension")->required();
  plan->add_option("--beta", cfg.beta, "Rate in (0, 1/2); m = floor(beta k)");
  auto* m_opt = plan->add_option("--m", m, "Explicit output length (verification instances)");
  auto* seeds_opt = plan->add_option("--seed-points", seed_points, "Distinct Vandermonde points")->delimiter(',');
  plan->add_option("--c-prime", cfg.typicality.c_prime, "Typicality constant");
  plan->add_option("--floor-threshold", cfg.typicality.floor_threshold, "Typicality floor");
  plan->add_flag("--strict", cfg.strict_lcm, "Treat a failed LCM bound as an error");
  plan->add_option("--out", cfg.spec_path, "Spec file to write (stdout if omitted)");

  auto* extract = app.add_subcommand("extract", "Apply the extractor to residue vectors");
  extract->add_option("--spec", cfg.spec_path, "Spec file")->required();
  extract->add_option("--input", cfg.input_path, "Input vectors (stdin if omitted)");
  extract->add_option("--output", cfg.output_path, "Output vectors (stdout if omitted)");

  auto* verify = app.add_subcommand("verify", "Measure output uniformity and check the analysis");
  verify->add_option("--spec", cfg.spec_path, "Spec file")->required();
  verify->add_flag("--exhaustive", cfg.exhaustive, "Every k-dimensional affine subspace");
  auto* sample_opt = verify->add_option("--sample", sample_count, "Number of seeded random subspaces");
  verify->add_option("--subspace-file", cfg.subspace_path, "Subspaces in text format");
  verify->add_option("--seed", cfg.seed, "Sampling seed");
  verify->add_option("--checks", cfg.checks,
                     "Comma list: sd,characters,xor,change_of_vars,claim35,zero_coordinate,all");
  verify->add_option("--workers", cfg.workers, "Worker threads")->check(CLI::PositiveNumber);
  verify->add_option("--report-dir", cfg.report_dir, "Directory for report.csv and summary.txt");
  add_budgets(verify);

  auto* bounds = app.add_subcommand("bounds", "Exponential-sum bound battery and omega(q-1) averages");
  bounds->add_option("--prachar-limit", cfg.prachar_limits, "Limits for the omega(q-1) average")
      ->check(CLI::Range(std::uint64_t{10}, std::uint64_t{1} << 32));
  bounds->add_option("--report-dir", cfg.report_dir, "Directory for bounds.csv (stdout if omitted)");
  add_budgets(bounds);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kArgumentError;
  }

  if (*plan) {
    if (*m_opt) cfg.m = m;
    if (*seeds_opt) cfg.seed_points = seed_points;
    return cli::cmd_plan(cfg, std::cout, std::cerr);
  }
  if (*extract) return cli::cmd_extract(cfg, std::cin, std::cout, std::cerr);
  if (*verify) {
    if (*sample_opt) cfg.sample = sample_count;
    return cli::cmd_verify(cfg, std::cout, std::cerr);
  }
  return cli::cmd_bounds(cfg, std::cout, std::cerr);
}
