#include "cellforge/planners/planners.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "cellforge/rng.hpp"

namespace cellforge::planners {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

world::Payload layer_payload(const MotionGraph& g, std::size_t layer) {
  return {g.payload_mass[layer], g.payload_size[layer]};
}

}  // namespace

const char* algo_name(Algo a) {
  switch (a) {
    case Algo::near_optimal: return "near_optimal";
    case Algo::astar: return "astar";
    case Algo::greedy: return "greedy";
  }
  return "?";
}

double heuristic(const model::JointConfig& u, const model::JointConfig& v,
                 std::span<const double> v_max) {
  if (u.q.size() != v.q.size() || u.q.size() != v_max.size())
    throw std::invalid_argument("heuristic: dimension mismatch");
  // per joint the short way |d| <= pi never exceeds the long way 2*pi - |d|,
  // so the min over ways of the max reduces to the wrapped displacement
  double h = 0.0;
  for (std::size_t i = 0; i < u.q.size(); ++i) {
    const double d = std::fabs(wrap_pi(v.q[i] - u.q[i]));
    h = std::max(h, d / v_max[i]);
  }
  return h;
}

namespace {

struct NodeRef {
  std::size_t layer;
  std::size_t idx;
};

// Graph search with lazy edge evaluation. Nodes are settled in key order;
// settling a node evaluates the best way to every node of the next layer.
// Ties prefer later layers so a goal settles before equal-key interior
// nodes, which keeps the A* settled set inside Dijkstra's.
PlanOutcome search_graph(Algo algo, const model::Composition& comp,
                         const MotionGraph& g,
                         const world::CollisionScene& scene,
                         traj::ConnectorKind connector, const PlannerConfig& cfg,
                         std::uint64_t seed) {
  const auto t0 = Clock::now();
  PlanOutcome out;
  out.stats.nodes = g.total_nodes();
  if (!g.feasible) {
    out.stats.wall_time = seconds_since(t0);
    return out;
  }
  const std::size_t n_layers = g.n_layers();

  // flat node ids
  std::vector<std::size_t> layer_base(n_layers, 0);
  std::size_t total = 0;
  for (std::size_t l = 0; l < n_layers; ++l) {
    layer_base[l] = total;
    total += g.layers[l].size();
  }

  // A*: remaining-time lower bound toward the closest final-layer node
  std::vector<double> h_to_goal(total, 0.0);
  if (algo == Algo::astar && n_layers > 1) {
    const auto& final_layer = g.layers[n_layers - 1];
    for (std::size_t l = 0; l + 1 < n_layers; ++l) {
      for (std::size_t i = 0; i < g.layers[l].size(); ++i) {
        double h = kInf;
        for (const auto& goal : final_layer)
          h = std::min(h, heuristic(g.layers[l][i], goal, comp.v_max()));
        h_to_goal[layer_base[l] + i] = h;
      }
    }
  }

  struct QueueEntry {
    double key;
    std::size_t layer;
    std::size_t idx;
  };
  const auto worse = [](const QueueEntry& a, const QueueEntry& b) {
    if (a.key != b.key) return a.key > b.key;
    if (a.layer != b.layer) return a.layer < b.layer;  // prefer later layers
    return a.idx > b.idx;
  };
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, decltype(worse)> pq(worse);

  std::vector<double> dist(total, kInf);
  std::vector<char> settled(total, 0);
  struct Parent {
    int layer = -1;
    int idx = -1;
    model::UnwrappedTarget target;
    traj::EdgeResult edge;
    int way = -1;
  };
  std::vector<Parent> parents(total);

  for (std::size_t i = 0; i < g.layers[0].size(); ++i) {
    dist[layer_base[0] + i] = 0.0;
    pq.push({h_to_goal[layer_base[0] + i], 0, i});
  }

  int goal_idx = -1;
  while (!pq.empty()) {
    const QueueEntry top = pq.top();
    pq.pop();
    const std::size_t id = layer_base[top.layer] + top.idx;
    if (settled[id]) continue;
    settled[id] = 1;
    if (top.layer == n_layers - 1) {
      goal_idx = static_cast<int>(top.idx);
      break;
    }
    const std::size_t next = top.layer + 1;
    const world::Payload payload = layer_payload(g, next);
    for (std::size_t v = 0; v < g.layers[next].size(); ++v) {
      const std::size_t vid = layer_base[next] + v;
      if (settled[vid]) continue;
      ++out.stats.edges_evaluated;
      out.stats.connector_calls += std::size_t{1} << comp.n_q();
      const std::uint64_t edge_seed = derive_seed(
          seed, "edge",
          {static_cast<std::uint64_t>(top.layer), static_cast<std::uint64_t>(top.idx),
           static_cast<std::uint64_t>(v)});
      BestWay bw =
          best_way_cost(connector, comp, g.layers[top.layer][top.idx],
                        g.layers[next][v], scene, payload, cfg.connector, edge_seed);
      if (!bw.result.feasible) continue;
      const double nd = dist[id] + bw.result.cost;
      if (nd < dist[vid]) {
        dist[vid] = nd;
        parents[vid] = {static_cast<int>(top.layer), static_cast<int>(top.idx),
                        std::move(bw.target), std::move(bw.result), bw.way};
        pq.push({nd + h_to_goal[vid], next, v});
      }
    }
  }

  if (goal_idx < 0) {
    out.stats.wall_time = seconds_since(t0);
    return out;
  }

  out.cost = dist[layer_base[n_layers - 1] + static_cast<std::size_t>(goal_idx)];

  // walk parents back to layer 0, then rebase targets onto the chained
  // absolute configurations
  std::vector<const Parent*> rev;
  int layer = static_cast<int>(n_layers) - 1;
  int idx = goal_idx;
  while (layer > 0) {
    const Parent& p = parents[layer_base[static_cast<std::size_t>(layer)] +
                              static_cast<std::size_t>(idx)];
    rev.push_back(&p);
    idx = p.idx;
    layer = p.layer;
  }
  std::reverse(rev.begin(), rev.end());
  out.start = g.layers[0][static_cast<std::size_t>(idx)];

  std::vector<double> chained = out.start->q;
  for (const Parent* p : rev) {
    PlanSegment seg;
    seg.way = p->way;
    seg.edge = p->edge;
    seg.target.origin.q = chained;
    seg.target.q_abs.resize(comp.n_q());
    std::vector<double> offsets(comp.n_q());
    bool shifted = false;
    for (std::size_t j = 0; j < comp.n_q(); ++j) {
      const double delta = p->target.q_abs[j] - p->target.origin.q[j];
      seg.target.q_abs[j] = chained[j] + delta;
      offsets[j] = chained[j] - p->target.origin.q[j];
      shifted = shifted || offsets[j] != 0.0;
    }
    if (shifted && seg.edge.trajectory.valid())
      seg.edge.trajectory = seg.edge.trajectory.offset_by(offsets);
    chained = seg.target.q_abs;
    out.segments.push_back(std::move(seg));
  }
  out.stats.wall_time = seconds_since(t0);
  return out;
}

// Alg. 2: min-norm start, then first-feasible connections to candidates
// sorted by distance.
PlanOutcome greedy_search(const model::Composition& comp, const MotionGraph& g,
                          const world::CollisionScene& scene,
                          traj::ConnectorKind connector, const PlannerConfig& cfg,
                          std::uint64_t seed) {
  const auto t0 = Clock::now();
  PlanOutcome out;
  out.stats.nodes = g.total_nodes();
  if (!g.feasible) {
    out.stats.wall_time = seconds_since(t0);
    return out;
  }

  // start: minimal euclidean norm of the canonical angles, ties lexicographic
  const auto& first = g.layers[0];
  std::size_t best_i = 0;
  double best_norm = kInf;
  for (std::size_t i = 0; i < first.size(); ++i) {
    double n2 = 0.0;
    for (double q : first[i].q) n2 += q * q;
    if (n2 < best_norm - 1e-15 ||
        (std::fabs(n2 - best_norm) <= 1e-15 && first[i].q < first[best_i].q)) {
      best_norm = n2;
      best_i = i;
    }
  }
  out.start = first[best_i];

  std::vector<double> q_abs = out.start->q;  // drifts outside (-pi, pi]
  double g_total = 0.0;

  for (std::size_t layer = 1; layer < g.n_layers(); ++layer) {
    const world::Payload payload = layer_payload(g, layer);
    // gather all extend() targets over the layer's IK solutions
    struct Candidate {
      model::UnwrappedTarget target;
      double dist;
      std::size_t order;
    };
    model::JointConfig from;
    from.q = q_abs;
    std::vector<Candidate> candidates;
    for (const auto& q_e : g.layers[layer]) {
      for (auto& t : extend(from, q_e)) {
        double dist = 0.0;
        if (cfg.greedy_velocity_metric) {
          for (std::size_t j = 0; j < comp.n_q(); ++j)
            dist = std::max(dist,
                            std::fabs(t.q_abs[j] - q_abs[j]) / comp.v_max()[j]);
        } else {
          for (std::size_t j = 0; j < comp.n_q(); ++j) {
            const double d = t.q_abs[j] - q_abs[j];
            dist += d * d;
          }
        }
        candidates.push_back({std::move(t), dist, candidates.size()});
      }
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& a, const Candidate& b) {
                if (a.dist != b.dist) return a.dist < b.dist;
                if (a.target.q_abs != b.target.q_abs)
                  return a.target.q_abs < b.target.q_abs;
                return a.order < b.order;
              });

    bool found = false;
    for (std::size_t rank = 0; rank < candidates.size(); ++rank) {
      ++out.stats.edges_evaluated;
      ++out.stats.connector_calls;
      Rng rng(derive_seed(seed, "greedy",
                          {static_cast<std::uint64_t>(layer),
                           static_cast<std::uint64_t>(rank)}));
      traj::EdgeResult r = traj::connect_edge(
          connector, comp, from, candidates[rank].target, scene, payload, cfg.connector, rng);
      if (!r.feasible) continue;
      g_total += r.cost;
      q_abs = candidates[rank].target.q_abs;
      PlanSegment seg;
      seg.target = candidates[rank].target;
      seg.way = static_cast<int>(rank);
      seg.edge = std::move(r);
      out.segments.push_back(std::move(seg));
      found = true;
      break;
    }
    if (!found) {
      out.segments.clear();
      out.cost = kInf;
      out.stats.wall_time = seconds_since(t0);
      return out;
    }
  }
  out.cost = g_total;
  out.stats.wall_time = seconds_since(t0);
  return out;
}

}  // namespace

PlanOutcome plan_over_graph(Algo algo, const model::Composition& comp,
                            const MotionGraph& graph,
                            const world::CollisionScene& scene,
                            traj::ConnectorKind connector,
                            const PlannerConfig& cfg, std::uint64_t seed) {
  if (algo == Algo::greedy)
    return greedy_search(comp, graph, scene, connector, cfg, seed);
  return search_graph(algo, comp, graph, scene, connector, cfg, seed);
}

PlanOutcome plan(Algo algo, const model::Composition& comp,
                 const world::TaskSequence& seq, const world::Scenario& scenario,
                 traj::ConnectorKind connector, const PlannerConfig& cfg,
                 std::uint64_t seed) {
  const auto t0 = Clock::now();
  const world::CollisionScene scene(scenario);
  MotionGraph g = build_graph(comp, seq, scene, cfg.ik);
  PlanOutcome out = plan_over_graph(algo, comp, g, scene, connector, cfg, seed);
  out.stats.wall_time = seconds_since(t0);  // include graph building
  return out;
}

Variant variant_from_name(const std::string& name) {
  if (name == "near_optimal" || name == "dijkstra" || name == "reference")
    return {"near_optimal", Algo::near_optimal, traj::ConnectorKind::deterministic};
  if (name == "astar")
    return {"astar", Algo::astar, traj::ConnectorKind::deterministic};
  if (name == "spline" || name == "greedy_spline")
    return {"spline", Algo::greedy, traj::ConnectorKind::two_stage};
  if (name == "sampler" || name == "greedy_sampler" || name == "ompl")
    return {"sampler", Algo::greedy, traj::ConnectorKind::sampling};
  throw std::invalid_argument("unknown planner variant: " + name);
}

}  // namespace cellforge::planners
