#include "cellforge/bilevel/bilevel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "cellforge/parallel.hpp"
#include "cellforge/planners/graph.hpp"
#include "cellforge/rng.hpp"

namespace cellforge::bilevel {

namespace {
using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}
}  // namespace

void ModuleLibrary::validate() const {
  if (joint_specs.empty())
    throw std::invalid_argument("module library needs at least one joint spec");
  for (const auto& j : joint_specs) {
    j.validate();
    if (j.kind != model::ModuleKind::joint)
      throw std::invalid_argument("joint_specs must hold joint modules");
  }
  for (const auto& l : link_specs) {
    l.validate();
    if (l.kind != model::ModuleKind::link)
      throw std::invalid_argument("link_specs must hold link modules");
  }
  if (max_motors > max_modules)
    throw std::invalid_argument("max_motors must be <= max_modules");
  if (min_motors < 1) throw std::invalid_argument("min_motors must be >= 1");
}

ModuleLibrary ModuleLibrary::from_specs(const std::vector<model::ModuleSpec>& specs,
                                        int max_modules, int max_motors,
                                        int min_motors) {
  ModuleLibrary lib;
  lib.max_modules = max_modules;
  lib.max_motors = max_motors;
  lib.min_motors = min_motors;
  for (const auto& s : specs) {
    if (s.kind == model::ModuleKind::joint)
      lib.joint_specs.push_back(s);
    else
      lib.link_specs.push_back(s);
  }
  lib.validate();
  return lib;
}

std::vector<model::Composition> enumerate_compositions(const ModuleLibrary& lib) {
  lib.validate();
  std::vector<model::Composition> out;
  if (lib.max_motors < 1 || lib.max_modules < 1) return out;

  // token order: joints in listed order, then links
  std::vector<const model::ModuleSpec*> tokens;
  for (const auto& j : lib.joint_specs) tokens.push_back(&j);
  for (const auto& l : lib.link_specs) tokens.push_back(&l);
  const std::size_t n_joint_tokens = lib.joint_specs.size();

  std::vector<const model::ModuleSpec*> stack;
  const auto emit = [&] {
    std::vector<model::ModuleSpec> mods;
    mods.reserve(stack.size());
    for (const auto* m : stack) mods.push_back(*m);
    out.emplace_back(std::move(mods));
  };

  // depth-first by length: sequences of exactly `length` modules in
  // lexicographic token order
  const auto extend_seq = [&](auto&& self, int remaining, int motors,
                              bool last_was_link) -> void {
    if (remaining == 0) {
      emit();
      return;
    }
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      const bool is_joint = t < n_joint_tokens;
      if (stack.empty() && !is_joint) continue;  // must start with a joint
      if (!is_joint && last_was_link) continue;  // no consecutive links
      if (is_joint && motors + 1 > lib.max_motors) continue;
      stack.push_back(tokens[t]);
      self(self, remaining - 1, motors + (is_joint ? 1 : 0), !is_joint);
      stack.pop_back();
    }
  };
  for (int length = 1; length <= lib.max_modules; ++length)
    extend_seq(extend_seq, length, 0, false);
  return out;
}

bool filter_min_motors(const model::Composition& c, int min_motors) {
  return static_cast<int>(c.n_q()) >= min_motors;
}

bool filter_reach(const model::Composition& c, const world::TaskSequence& seq,
                  const world::CollisionScene& scene, const model::IkConfig& ik) {
  double max_dist = 0.0;
  for (const auto& p : seq.poses)
    max_dist = std::max(max_dist, std::hypot(p.x, p.y));
  if (c.total_reach() < max_dist) return false;
  for (std::size_t i = 0; i < seq.n_p(); ++i) {
    const world::Payload payload{seq.payload_mass[i], seq.payload_size[i]};
    if (planners::admissible_configs(c, seq.poses[i], scene, payload, ik,
                                     /*check_torque=*/false)
            .empty())
      return false;
  }
  return true;
}

bool filter_payload(const model::Composition& c, const world::TaskSequence& seq,
                    const world::CollisionScene& scene, const model::IkConfig& ik) {
  for (std::size_t i = 0; i < seq.n_p(); ++i) {
    if (!(seq.payload_mass[i] > 0.0)) continue;
    const world::Payload payload{seq.payload_mass[i], seq.payload_size[i]};
    if (planners::admissible_configs(c, seq.poses[i], scene, payload, ik,
                                     /*check_torque=*/true)
            .empty())
      return false;
  }
  return true;
}

EliminationTrace optimize_composition(const world::Scenario& scenario,
                                      const ModuleLibrary& lib,
                                      const OptimizeConfig& cfg,
                                      std::uint64_t master_seed) {
  const auto t0 = Clock::now();
  EliminationTrace trace;
  const world::TaskSequence seq = world::task_sequence(scenario);
  const world::CollisionScene scene(scenario);

  std::vector<model::Composition> comps = enumerate_compositions(lib);
  trace.generated = comps.size();

  std::vector<std::size_t> alive;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (filter_min_motors(comps[i], lib.min_motors))
      alive.push_back(i);
    else
      trace.fates.push_back({comps[i].id(), "min_motors", kInf, 0.0});
  }
  trace.after_min_motors = alive.size();

  // reach and payload filters run per composition (parallelizable, but cheap
  // next to the final evaluation; order preserved for the trace)
  std::vector<std::size_t> reached;
  for (std::size_t i : alive) {
    if (filter_reach(comps[i], seq, scene, cfg.planner.ik))
      reached.push_back(i);
    else
      trace.fates.push_back({comps[i].id(), "reach", kInf, 0.0});
  }
  trace.after_reach = reached.size();

  std::vector<std::size_t> survivors;
  for (std::size_t i : reached) {
    if (filter_payload(comps[i], seq, scene, cfg.planner.ik))
      survivors.push_back(i);
    else
      trace.fates.push_back({comps[i].id(), "payload", kInf, 0.0});
  }
  trace.after_payload = survivors.size();
  trace.evaluated = survivors.size();

  // motion-level evaluation of the survivors: parallel map with
  // per-composition seeds, then an order-independent argmin
  std::vector<planners::PlanOutcome> outcomes(survivors.size());
  parallel_for(survivors.size(), cfg.jobs, [&](std::size_t k) {
    const auto& comp = comps[survivors[k]];
    const std::uint64_t seed = derive_seed(master_seed, "composition",
                                           {fnv1a64(comp.id())});
    outcomes[k] =
        planners::plan(cfg.algo, comp, seq, scenario, cfg.connector, cfg.planner, seed);
  });

  std::size_t best_k = survivors.size();
  for (std::size_t k = 0; k < survivors.size(); ++k) {
    const auto& comp = comps[survivors[k]];
    trace.fates.push_back(
        {comp.id(), "evaluated", outcomes[k].cost, outcomes[k].stats.wall_time});
    if (outcomes[k].feasible()) {
      ++trace.feasible;
      // survivors[] ascends, so strict < implements the earlier-index tie rule
      if (best_k == survivors.size() || outcomes[k].cost < trace.best_cost) {
        best_k = k;
        trace.best_cost = outcomes[k].cost;
      }
    }
  }
  if (best_k < survivors.size()) {
    trace.best = comps[survivors[best_k]];
    trace.best_outcome = outcomes[best_k];
  }
  trace.wall_time = seconds_since(t0);
  return trace;
}

}  // namespace cellforge::bilevel
