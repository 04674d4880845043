#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cellforge/cli/commands.hpp"

namespace cli = cellforge::cli;

int main(int argc, char** argv) {
  CLI::App app{"cellforge - bilevel work-cell optimization toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  std::string out;
  unsigned jobs = 0;
  app.add_option("--config", config_path, "run configuration JSON");
  auto* seed_opt = app.add_option("--seed", seed, "master seed");
  app.add_option("--out", out, "default output directory");
  app.add_option("--jobs", jobs, "parallel worker count");

  // gen-scenario
  auto* gen = app.add_subcommand("gen-scenario", "generate a palletization scenario");
  cli::GenScenarioArgs gen_args;
  gen->add_option("--complexity", gen_args.complexity, "simple|complex");
  gen->add_option("--out", gen_args.out_path, "output scenario JSON")->required();

  // plan
  auto* plan = app.add_subcommand("plan", "run a motion-level planner");
  cli::PlanArgs plan_args;
  plan->add_option("--scenario", plan_args.scenario_path, "scenario JSON")->required();
  plan->add_option("--library", plan_args.library_path, "module library JSON")->required();
  plan->add_option("--composition", plan_args.composition_path, "composition JSON")
      ->required();
  plan->add_option("--planner", plan_args.planner,
                   "near_optimal|astar|spline|sampler");
  std::string connector_override;
  plan->add_option("--connector", connector_override,
                   "deterministic|two_stage|sampling (override)");
  plan->add_option("--out", plan_args.out_path, "output plan JSON")->required();
  plan->add_flag("--embed-traj", plan_args.embed_trajectories,
                 "embed sampled trajectories in the report");
  plan->add_option("--export-traj", plan_args.traj_dir,
                   "directory for per-segment trajectory CSVs");

  // metrics
  auto* met = app.add_subcommand("metrics", "run evaluation campaigns");
  cli::MetricsArgs met_args;
  met->add_option("--library", met_args.library_path, "module library JSON")->required();
  met->add_option("--population", met_args.population_path, "population JSON");
  met->add_option("--auto", met_args.auto_samples,
                  "draw N samples from the library instead of --population");
  met->add_option("--dof-min", met_args.dof_min, "min joints for --auto");
  met->add_option("--dof-max", met_args.dof_max, "max joints for --auto");
  met->add_option("--max-modules", met_args.max_modules, "max modules for --auto");
  met->add_option("--variants", met_args.variants, "variants to evaluate")
      ->delimiter(',');
  met->add_option("--repeats", met_args.repeats,
                  "K for the repeat campaign (0 = single-run only)");
  met->add_option("--repeat-variant", met_args.repeat_variant,
                  "variant for the repeat campaign");
  met->add_option("--out", met_args.out_dir, "output directory");

  // optimize
  auto* opt = app.add_subcommand("optimize", "hierarchical-elimination search");
  cli::OptimizeArgs opt_args;
  opt->add_option("--scenario", opt_args.scenario_path, "scenario JSON")->required();
  opt->add_option("--library", opt_args.library_path, "module library JSON")->required();
  opt->add_option("--max-modules", opt_args.max_modules, "composition length cap");
  opt->add_option("--max-motors", opt_args.max_motors, "joint count cap");
  opt->add_option("--min-motors", opt_args.min_motors, "joint count floor");
  opt->add_option("--planner", opt_args.planner,
                  "near_optimal|astar|spline|sampler");
  opt->add_option("--out", opt_args.out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    cli::RunConfig cfg;
    if (!config_path.empty()) cfg = cli::load_config(config_path);
    const bool seed_set = seed_opt->count() > 0;
    if (!seed_set) {
      if (const char* env = std::getenv("CELLFORGE_SEED"))
        seed = std::strtoull(env, nullptr, 10);
      else
        seed = cfg.master_seed;
    }
    cfg.master_seed = seed;
    if (jobs > 0) cfg.jobs = jobs;
    if (!out.empty()) cfg.out_dir = out;
    cfg.validate();

    if (gen->parsed()) {
      gen_args.seed = seed;
      return cli::cmd_gen_scenario(cfg, gen_args);
    }
    if (plan->parsed()) {
      plan_args.seed = seed;
      if (!connector_override.empty()) plan_args.connector = connector_override;
      return cli::cmd_plan(cfg, plan_args);
    }
    if (met->parsed()) {
      met_args.seed = seed;
      return cli::cmd_metrics(cfg, met_args);
    }
    if (opt->parsed()) {
      opt_args.seed = seed;
      opt_args.jobs = cfg.jobs;
      return cli::cmd_optimize(cfg, opt_args);
    }
  } catch (const cellforge::GenerationError& e) {
    std::cerr << "generation error: " << e.what() << "\n";
    return cli::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitUsage;
  }
  return cli::kExitUsage;
}
