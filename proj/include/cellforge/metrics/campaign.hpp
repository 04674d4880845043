#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cellforge/metrics/metrics.hpp"
#include "cellforge/planners/planners.hpp"
#include "cellforge/world/scenario.hpp"

namespace cellforge::metrics {

// One (x, theta) input: a composition plus the seeded scenario it runs in.
struct PopulationSample {
  model::Composition composition;
  std::uint64_t scenario_seed = 0;
  world::GeneratorParams generator;
};

struct CampaignConfig {
  planners::PlannerConfig planner;
  unsigned jobs = 1;
};

// Experiment 1: every sample once per variant, reference (near-optimal with
// the deterministic connector) included; costs and wall times are recorded.
// Deterministic given the master seed apart from the measured times.
std::map<std::string, std::vector<SampleRecord>> run_campaign_single(
    const std::vector<PopulationSample>& population,
    const std::vector<planners::Variant>& variants, const CampaignConfig& cfg,
    std::uint64_t master_seed);

// Experiment 2: K runs of one variant per sample with seeds derived from
// (master, sample, repeat). K must be >= 2 for the variance to exist.
std::vector<RepeatRecord> run_campaign_repeat(
    const std::vector<PopulationSample>& population,
    const planners::Variant& variant, int repeats, const CampaignConfig& cfg,
    std::uint64_t master_seed);

// Draws a mixed population from a module library: compositions uniformly
// among those with dof_min <= n_q <= dof_max, scenarios alternating
// simple/complex classes.
std::vector<PopulationSample> draw_population(
    const std::vector<model::ModuleSpec>& library, std::size_t n_samples,
    int dof_min, int dof_max, int max_modules,
    const world::GeneratorParams& base_params, std::uint64_t master_seed);

}  // namespace cellforge::metrics
