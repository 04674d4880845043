#include "cellforge/metrics/campaign.hpp"

#include <stdexcept>

#include "cellforge/bilevel/bilevel.hpp"
#include "cellforge/parallel.hpp"
#include "cellforge/rng.hpp"

namespace cellforge::metrics {

namespace {

planners::PlanOutcome run_one(const PopulationSample& sample,
                              const planners::Variant& variant,
                              const CampaignConfig& cfg, std::uint64_t seed) {
  const world::Scenario scenario =
      world::generate_scenario(sample.scenario_seed, sample.generator);
  const world::TaskSequence seq = world::task_sequence(scenario);
  return planners::plan(variant.algo, sample.composition, seq, scenario,
                        variant.connector, cfg.planner, seed);
}

}  // namespace

std::map<std::string, std::vector<SampleRecord>> run_campaign_single(
    const std::vector<PopulationSample>& population,
    const std::vector<planners::Variant>& variants, const CampaignConfig& cfg,
    std::uint64_t master_seed) {
  const planners::Variant reference{"near_optimal", planners::Algo::near_optimal,
                                    traj::ConnectorKind::deterministic};
  const std::size_t n = population.size();

  struct RefRun {
    double g = kInf;
    double t = 0.0;
  };
  std::vector<RefRun> refs(n);
  parallel_for(n, cfg.jobs, [&](std::size_t i) {
    const auto out = run_one(population[i], reference, cfg,
                             derive_seed(master_seed, "ref", {i}));
    refs[i] = {out.cost, out.stats.wall_time};
  });

  std::map<std::string, std::vector<SampleRecord>> result;
  for (const auto& variant : variants) {
    std::vector<SampleRecord> records(n);
    parallel_for(n, cfg.jobs, [&](std::size_t i) {
      const auto out =
          run_one(population[i], variant, cfg,
                  derive_seed(master_seed, variant.name, {i}));
      SampleRecord r;
      r.sample_id = i;
      r.x_ref = population[i].composition.id();
      r.theta_ref = population[i].scenario_seed;
      r.g_star = refs[i].g;
      r.t_star = refs[i].t;
      r.g_hat = out.cost;
      r.t_hat = out.stats.wall_time;
      records[i] = std::move(r);
    });
    result.emplace(variant.name, std::move(records));
  }
  return result;
}

std::vector<RepeatRecord> run_campaign_repeat(
    const std::vector<PopulationSample>& population,
    const planners::Variant& variant, int repeats, const CampaignConfig& cfg,
    std::uint64_t master_seed) {
  if (repeats < 2)
    throw std::invalid_argument("repeat campaign needs K >= 2 runs per sample");
  const std::size_t n = population.size();
  std::vector<RepeatRecord> records(n);
  for (std::size_t i = 0; i < n; ++i) {
    records[i].sample_id = i;
    records[i].outputs.resize(static_cast<std::size_t>(repeats), kInf);
  }
  const std::size_t total = n * static_cast<std::size_t>(repeats);
  parallel_for(total, cfg.jobs, [&](std::size_t idx) {
    const std::size_t i = idx / static_cast<std::size_t>(repeats);
    const std::size_t k = idx % static_cast<std::size_t>(repeats);
    const auto out = run_one(population[i], variant, cfg,
                             derive_seed(master_seed, "repeat", {i, k}));
    records[i].outputs[k] = out.cost;
  });
  return records;
}

std::vector<PopulationSample> draw_population(
    const std::vector<model::ModuleSpec>& library, std::size_t n_samples,
    int dof_min, int dof_max, int max_modules,
    const world::GeneratorParams& base_params, std::uint64_t master_seed) {
  bilevel::ModuleLibrary lib = bilevel::ModuleLibrary::from_specs(
      library, max_modules, dof_max, /*min_motors=*/1);
  std::vector<model::Composition> pool;
  for (auto& c : bilevel::enumerate_compositions(lib)) {
    const int nq = static_cast<int>(c.n_q());
    if (nq >= dof_min && nq <= dof_max) pool.push_back(std::move(c));
  }
  if (pool.empty())
    throw std::invalid_argument("no composition in the library matches the dof range");

  Rng rng(derive_seed(master_seed, "population"));
  std::vector<PopulationSample> out;
  out.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    PopulationSample s;
    s.composition = pool[rng.uniform_index(pool.size())];
    s.scenario_seed = derive_seed(master_seed, "theta", {i});
    s.generator = base_params;
    s.generator.complexity =
        (i % 2 == 0) ? world::Complexity::simple : world::Complexity::complex_;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace cellforge::metrics
