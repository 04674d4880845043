#include "cellforge/cli/run_config.hpp"

#include <fstream>
#include <stdexcept>

namespace cellforge::cli {

using nlohmann::json;

void RunConfig::validate() const {
  if (ik.n_starts < 1 || ik.max_iters < 1 || ik.polish_iters < 0)
    throw std::invalid_argument("config: ik budgets must be positive");
  if (!(ik.tol_pos > 0.0) || !(ik.tol_ang > 0.0) || !(ik.dedup_radius > 0.0))
    throw std::invalid_argument("config: ik tolerances must be positive");
  if (connector.ce.n_via < 1 || connector.ce.population < 2 ||
      connector.ce.cheap_iters < 1 || connector.ce.full_iters < 1)
    throw std::invalid_argument("config: stochastic connector budgets must be positive");
  if (!(connector.sampler.time_budget > 0.0) ||
      !(connector.sampler.iters_per_second > 0.0) ||
      connector.sampler.shortcut_passes < 0)
    throw std::invalid_argument("config: sampler budgets must be positive");
  generator.validate();
}

json config_to_json(const RunConfig& cfg) {
  json j;
  j["schema"] = kConfigSchema;
  j["master_seed"] = cfg.master_seed;
  j["jobs"] = cfg.jobs;
  j["out_dir"] = cfg.out_dir;
  j["ik"] = {{"n_starts", cfg.ik.n_starts},
             {"tol_pos", cfg.ik.tol_pos},
             {"tol_ang", cfg.ik.tol_ang},
             {"max_iters", cfg.ik.max_iters},
             {"damping", cfg.ik.damping},
             {"step_clamp", cfg.ik.step_clamp},
             {"dedup_radius", cfg.ik.dedup_radius},
             {"polish_iters", cfg.ik.polish_iters},
             {"start_seed", cfg.ik.start_seed}};
  j["ce"] = {{"n_via", cfg.connector.ce.n_via},
             {"population", cfg.connector.ce.population},
             {"cheap_iters", cfg.connector.ce.cheap_iters},
             {"full_iters", cfg.connector.ce.full_iters},
             {"elite_frac", cfg.connector.ce.elite_frac},
             {"init_sigma_scale", cfg.connector.ce.init_sigma_scale},
             {"sigma_floor", cfg.connector.ce.sigma_floor},
             {"smoothing", cfg.connector.ce.smoothing},
             {"timing_grid", cfg.connector.ce.timing_grid},
             {"timing_margin", cfg.connector.ce.timing_margin}};
  j["sampler"] = {{"time_budget", cfg.connector.sampler.time_budget},
                  {"iters_per_second", cfg.connector.sampler.iters_per_second},
                  {"goal_bias", cfg.connector.sampler.goal_bias},
                  {"step", cfg.connector.sampler.step},
                  {"collision_step", cfg.connector.sampler.collision_step},
                  {"shortcut_passes", cfg.connector.sampler.shortcut_passes}};
  const auto& g = cfg.generator;
  j["generator"] = {{"complexity", g.complexity == world::Complexity::simple
                                       ? "simple"
                                       : "complex"},
                    {"min_boxes", g.min_boxes},
                    {"max_boxes", g.max_boxes},
                    {"box_size_min", g.box_size_min},
                    {"box_size_max", g.box_size_max},
                    {"box_mass_min", g.box_mass_min},
                    {"box_mass_max", g.box_mass_max},
                    {"region_width_min", g.region_width_min},
                    {"region_width_max", g.region_width_max},
                    {"region_height_min", g.region_height_min},
                    {"region_height_max", g.region_height_max},
                    {"conveyor_center_x_min", g.conveyor_center_x_min},
                    {"conveyor_center_x_max", g.conveyor_center_x_max},
                    {"pallet_center_x_min", g.pallet_center_x_min},
                    {"pallet_center_x_max", g.pallet_center_x_max},
                    {"region_center_y_min", g.region_center_y_min},
                    {"region_center_y_max", g.region_center_y_max},
                    {"base_clearance", g.base_clearance},
                    {"min_pillars", g.min_pillars},
                    {"max_pillars", g.max_pillars},
                    {"pillar_radius_min", g.pillar_radius_min},
                    {"pillar_radius_max", g.pillar_radius_max},
                    {"pillar_dist_min", g.pillar_dist_min},
                    {"pillar_dist_max", g.pillar_dist_max},
                    {"pose_clearance", g.pose_clearance},
                    {"max_attempts", g.max_attempts}};
  j["greedy_velocity_metric"] = cfg.greedy_velocity_metric;
  return j;
}

RunConfig config_from_json(const json& j) {
  if (j.value("schema", "") != kConfigSchema)
    throw std::invalid_argument("unsupported config schema");
  RunConfig cfg;
  cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
  cfg.jobs = j.at("jobs").get<unsigned>();
  cfg.out_dir = j.at("out_dir").get<std::string>();
  const auto& ik = j.at("ik");
  cfg.ik.n_starts = ik.at("n_starts").get<int>();
  cfg.ik.tol_pos = ik.at("tol_pos").get<double>();
  cfg.ik.tol_ang = ik.at("tol_ang").get<double>();
  cfg.ik.max_iters = ik.at("max_iters").get<int>();
  cfg.ik.damping = ik.at("damping").get<double>();
  cfg.ik.step_clamp = ik.at("step_clamp").get<double>();
  cfg.ik.dedup_radius = ik.at("dedup_radius").get<double>();
  cfg.ik.polish_iters = ik.at("polish_iters").get<int>();
  cfg.ik.start_seed = ik.at("start_seed").get<std::uint64_t>();
  const auto& ce = j.at("ce");
  cfg.connector.ce.n_via = ce.at("n_via").get<int>();
  cfg.connector.ce.population = ce.at("population").get<int>();
  cfg.connector.ce.cheap_iters = ce.at("cheap_iters").get<int>();
  cfg.connector.ce.full_iters = ce.at("full_iters").get<int>();
  cfg.connector.ce.elite_frac = ce.at("elite_frac").get<double>();
  cfg.connector.ce.init_sigma_scale = ce.at("init_sigma_scale").get<double>();
  cfg.connector.ce.sigma_floor = ce.at("sigma_floor").get<double>();
  cfg.connector.ce.smoothing = ce.at("smoothing").get<double>();
  cfg.connector.ce.timing_grid = ce.at("timing_grid").get<int>();
  cfg.connector.ce.timing_margin = ce.at("timing_margin").get<double>();
  const auto& sa = j.at("sampler");
  cfg.connector.sampler.time_budget = sa.at("time_budget").get<double>();
  cfg.connector.sampler.iters_per_second = sa.at("iters_per_second").get<double>();
  cfg.connector.sampler.goal_bias = sa.at("goal_bias").get<double>();
  cfg.connector.sampler.step = sa.at("step").get<double>();
  cfg.connector.sampler.collision_step = sa.at("collision_step").get<double>();
  cfg.connector.sampler.shortcut_passes = sa.at("shortcut_passes").get<int>();
  const auto& g = j.at("generator");
  cfg.generator.complexity = g.at("complexity").get<std::string>() == "complex"
                                 ? world::Complexity::complex_
                                 : world::Complexity::simple;
  cfg.generator.min_boxes = g.at("min_boxes").get<int>();
  cfg.generator.max_boxes = g.at("max_boxes").get<int>();
  cfg.generator.box_size_min = g.at("box_size_min").get<double>();
  cfg.generator.box_size_max = g.at("box_size_max").get<double>();
  cfg.generator.box_mass_min = g.at("box_mass_min").get<double>();
  cfg.generator.box_mass_max = g.at("box_mass_max").get<double>();
  cfg.generator.region_width_min = g.at("region_width_min").get<double>();
  cfg.generator.region_width_max = g.at("region_width_max").get<double>();
  cfg.generator.region_height_min = g.at("region_height_min").get<double>();
  cfg.generator.region_height_max = g.at("region_height_max").get<double>();
  cfg.generator.conveyor_center_x_min = g.at("conveyor_center_x_min").get<double>();
  cfg.generator.conveyor_center_x_max = g.at("conveyor_center_x_max").get<double>();
  cfg.generator.pallet_center_x_min = g.at("pallet_center_x_min").get<double>();
  cfg.generator.pallet_center_x_max = g.at("pallet_center_x_max").get<double>();
  cfg.generator.region_center_y_min = g.at("region_center_y_min").get<double>();
  cfg.generator.region_center_y_max = g.at("region_center_y_max").get<double>();
  cfg.generator.base_clearance = g.at("base_clearance").get<double>();
  cfg.generator.min_pillars = g.at("min_pillars").get<int>();
  cfg.generator.max_pillars = g.at("max_pillars").get<int>();
  cfg.generator.pillar_radius_min = g.at("pillar_radius_min").get<double>();
  cfg.generator.pillar_radius_max = g.at("pillar_radius_max").get<double>();
  cfg.generator.pillar_dist_min = g.at("pillar_dist_min").get<double>();
  cfg.generator.pillar_dist_max = g.at("pillar_dist_max").get<double>();
  cfg.generator.pose_clearance = g.at("pose_clearance").get<double>();
  cfg.generator.max_attempts = g.at("max_attempts").get<int>();
  cfg.greedy_velocity_metric = j.at("greedy_velocity_metric").get<bool>();
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return config_from_json(j);
}

void save_config(const RunConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << config_to_json(cfg).dump(2) << '\n';
}

}  // namespace cellforge::cli
