#include "cellforge/cli/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "cellforge/bilevel/bilevel.hpp"
#include "cellforge/metrics/campaign.hpp"
#include "cellforge/model/library_io.hpp"
#include "cellforge/planners/outcome_io.hpp"
#include "cellforge/world/scenario_io.hpp"

namespace cellforge::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double v) {
  if (v >= kInf) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

planners::PlannerConfig planner_config(const RunConfig& cfg) {
  planners::PlannerConfig pc;
  pc.ik = cfg.ik;
  pc.connector = cfg.connector;
  pc.greedy_velocity_metric = cfg.greedy_velocity_metric;
  return pc;
}

json report_header(const RunConfig& cfg, std::uint64_t seed) {
  json j;
  j["seed"] = seed;
  j["config"] = config_to_json(cfg);
  return j;
}

}  // namespace

int cmd_gen_scenario(const RunConfig& cfg, const GenScenarioArgs& args) {
  world::GeneratorParams params = cfg.generator;
  if (args.complexity == "simple") {
    params.complexity = world::Complexity::simple;
  } else if (args.complexity == "complex") {
    params.complexity = world::Complexity::complex_;
  } else {
    std::cerr << "error: complexity must be 'simple' or 'complex'\n";
    return kExitUsage;
  }
  const world::Scenario s = world::generate_scenario(args.seed, params);
  world::save_scenario(s, args.out_path);
  const auto seq = world::task_sequence(s);
  std::cout << "scenario seed " << s.seed << ": " << s.boxes.size() << " boxes, "
            << s.obstacles.size() << " obstacles, n_p " << seq.n_p() << " -> "
            << args.out_path << "\n";
  return kExitOk;
}

int cmd_plan(const RunConfig& cfg, const PlanArgs& args) {
  const world::Scenario scenario = world::load_scenario(args.scenario_path);
  const auto library = model::load_module_library(args.library_path);
  const auto ids = model::load_composition_ids(args.composition_path);
  const model::Composition comp = model::composition_from_ids(library, ids);

  planners::Variant variant = planners::variant_from_name(args.planner);
  if (args.connector)
    variant.connector = traj::connector_from_name(*args.connector);

  const world::TaskSequence seq = world::task_sequence(scenario);
  const planners::PlanOutcome outcome =
      planners::plan(variant.algo, comp, seq, scenario, variant.connector,
                     planner_config(cfg), args.seed);

  json j = planners::outcome_to_json(outcome, variant.name,
                                     traj::connector_name(variant.connector),
                                     args.seed, args.embed_trajectories);
  j["composition"] = ids;
  j["scenario_seed"] = scenario.seed;
  planners::save_outcome(j, args.out_path);

  if (!args.traj_dir.empty() && outcome.feasible()) {
    fs::create_directories(args.traj_dir);
    for (std::size_t i = 0; i < outcome.segments.size(); ++i) {
      const auto& t = outcome.segments[i].edge.trajectory;
      if (t.valid())
        planners::export_trajectory_csv(
            t, (fs::path(args.traj_dir) / ("segment_" + std::to_string(i) + ".csv"))
                   .string());
    }
  }

  std::cout << "planner " << variant.name << " cost "
            << (outcome.feasible() ? fmt(outcome.cost) : "inf") << " ("
            << outcome.stats.edges_evaluated << " edges, "
            << outcome.stats.connector_calls << " connector calls) -> "
            << args.out_path << "\n";
  return outcome.feasible() ? kExitOk : kExitInfeasible;
}

namespace {

std::vector<metrics::PopulationSample> population_from_file(
    const RunConfig& cfg, const std::string& library_path,
    const std::string& population_path) {
  const auto library = model::load_module_library(library_path);
  std::ifstream in(population_path);
  if (!in) throw std::runtime_error("cannot open " + population_path);
  json j;
  in >> j;
  if (j.value("schema", "") != "cellforge-population/1")
    throw std::invalid_argument("unsupported population schema");
  std::vector<metrics::PopulationSample> out;
  for (const auto& sj : j.at("samples")) {
    metrics::PopulationSample s;
    s.composition = model::composition_from_ids(
        library, sj.at("modules").get<std::vector<std::string>>());
    s.scenario_seed = sj.at("scenario_seed").get<std::uint64_t>();
    s.generator = cfg.generator;
    s.generator.complexity = sj.value("complexity", "simple") == "complex"
                                 ? world::Complexity::complex_
                                 : world::Complexity::simple;
    out.push_back(std::move(s));
  }
  return out;
}

void write_records_csv(const std::string& path,
                       const std::map<std::string, std::vector<metrics::SampleRecord>>& rec) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "sample_id,variant,composition,scenario_seed,g_star,t_star,g_hat,t_hat\n";
  for (const auto& [variant, records] : rec) {
    for (const auto& r : records) {
      out << r.sample_id << ',' << variant << ',' << r.x_ref << ','
          << r.theta_ref << ',' << fmt(r.g_star) << ',' << fmt(r.t_star) << ','
          << fmt(r.g_hat) << ',' << fmt(r.t_hat) << '\n';
    }
  }
}

void write_repeats_csv(const std::string& path,
                       const std::vector<metrics::RepeatRecord>& recs) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "sample_id,repeat,g_hat\n";
  for (const auto& r : recs) {
    for (std::size_t k = 0; k < r.outputs.size(); ++k)
      out << r.sample_id << ',' << k << ',' << fmt(r.outputs[k]) << '\n';
  }
}

}  // namespace

int cmd_metrics(const RunConfig& cfg, const MetricsArgs& args) {
  std::vector<metrics::PopulationSample> population;
  if (!args.population_path.empty()) {
    population = population_from_file(cfg, args.library_path, args.population_path);
  } else if (args.auto_samples > 0) {
    const auto library = model::load_module_library(args.library_path);
    population = metrics::draw_population(library, args.auto_samples, args.dof_min,
                                          args.dof_max, args.max_modules,
                                          cfg.generator, args.seed);
  } else {
    std::cerr << "error: provide --population or --auto N\n";
    return kExitUsage;
  }

  std::vector<planners::Variant> variants;
  for (const auto& name : args.variants)
    variants.push_back(planners::variant_from_name(name));

  metrics::CampaignConfig cc;
  cc.planner = planner_config(cfg);
  cc.jobs = cfg.jobs;

  fs::create_directories(args.out_dir);
  const auto records =
      metrics::run_campaign_single(population, variants, cc, args.seed);
  write_records_csv((fs::path(args.out_dir) / "records.csv").string(), records);

  std::vector<metrics::RepeatRecord> repeats;
  if (args.repeats > 0) {
    repeats = metrics::run_campaign_repeat(
        population, planners::variant_from_name(args.repeat_variant),
        args.repeats, cc, args.seed);
    write_repeats_csv((fs::path(args.out_dir) / "repeats.csv").string(), repeats);
  }

  json summary = report_header(cfg, args.seed);
  summary["schema"] = "cellforge-metrics/1";
  summary["n_samples"] = population.size();
  json per_variant;
  for (const auto& [name, recs] : records) {
    const metrics::MetricsReport rep = metrics::summarize(
        recs, (args.repeats > 0 && name == args.repeat_variant) ? &repeats : nullptr);
    json vj;
    vj["optimality"] = rep.optimality ? json(*rep.optimality) : json();
    vj["time_gain"] = rep.time_gain ? json(*rep.time_gain) : json();
    vj["robustness"] = rep.robustness ? json(*rep.robustness) : json();
    vj["consistency"] = rep.consistency ? json(*rep.consistency) : json();
    vj["n_samples"] = rep.n_samples;
    vj["n_conditioning"] = rep.n_conditioning;
    per_variant[name] = vj;
    std::cout << name << ": O=" << (rep.optimality ? fmt(*rep.optimality) : "n/a")
              << " T=" << (rep.time_gain ? fmt(*rep.time_gain) : "n/a")
              << " R=" << (rep.robustness ? fmt(*rep.robustness) : "n/a")
              << " C=" << (rep.consistency ? fmt(*rep.consistency) : "n/a")
              << "\n";
  }
  summary["variants"] = per_variant;
  std::ofstream out(fs::path(args.out_dir) / "summary.json");
  out << summary.dump(2) << '\n';
  return kExitOk;
}

int cmd_optimize(const RunConfig& cfg, const OptimizeArgs& args) {
  const world::Scenario scenario = world::load_scenario(args.scenario_path);
  const auto specs = model::load_module_library(args.library_path);
  if (specs.empty()) {
    std::cerr << "error: module library is empty\n";
    return kExitUsage;
  }
  const bilevel::ModuleLibrary lib = bilevel::ModuleLibrary::from_specs(
      specs, args.max_modules, args.max_motors, args.min_motors);

  const planners::Variant variant = planners::variant_from_name(args.planner);
  bilevel::OptimizeConfig oc;
  oc.planner = planner_config(cfg);
  oc.algo = variant.algo;
  oc.connector = variant.connector;
  oc.jobs = args.jobs ? args.jobs : cfg.jobs;

  const bilevel::EliminationTrace trace =
      bilevel::optimize_composition(scenario, lib, oc, args.seed);

  fs::create_directories(args.out_dir);
  {
    std::ofstream out(fs::path(args.out_dir) / "compositions.csv");
    out << "composition,fate,g,wall_time\n";
    for (const auto& f : trace.fates)
      out << f.id << ',' << f.fate << ',' << fmt(f.g) << ',' << fmt(f.wall_time)
          << '\n';
  }
  json j = report_header(cfg, args.seed);
  j["schema"] = "cellforge-trace/1";
  j["planner"] = variant.name;
  j["counts"] = {{"generated", trace.generated},
                 {"after_min_motors", trace.after_min_motors},
                 {"after_reach", trace.after_reach},
                 {"after_payload", trace.after_payload},
                 {"evaluated", trace.evaluated},
                 {"feasible", trace.feasible}};
  if (trace.best) {
    json ids = json::array();
    for (const auto& m : trace.best->modules()) ids.push_back(m.id);
    j["best"] = {{"modules", ids}, {"cost", trace.best_cost}};
  } else {
    j["best"] = nullptr;
  }
  j["timing"] = {{"wall_time_s", trace.wall_time}};
  {
    std::ofstream out(fs::path(args.out_dir) / "trace.json");
    out << j.dump(2) << '\n';
  }

  std::cout << "generated " << trace.generated << " -> min_motors "
            << trace.after_min_motors << " -> reach " << trace.after_reach
            << " -> payload " << trace.after_payload << " -> feasible "
            << trace.feasible << "\n";
  if (trace.best) {
    std::cout << "best " << trace.best->id() << " cost " << fmt(trace.best_cost)
              << "\n";
    return kExitOk;
  }
  std::cout << "no feasible composition\n";
  return kExitInfeasible;
}

}  // namespace cellforge::cli
