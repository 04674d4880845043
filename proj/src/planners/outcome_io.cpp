#include "cellforge/planners/outcome_io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace cellforge::planners {

using nlohmann::json;

namespace {

json trajectory_samples(const traj::Trajectory& t) {
  const double T = t.duration();
  const auto ts = traj::sample_grid(T, traj::default_delta_s(T));
  const std::size_t n = ts.size();
  const std::size_t nd = t.dims();
  std::vector<double> q(nd * n), qd(nd * n), qdd(nd * n);
  t.sample(ts, q.data(), qd.data(), qdd.data());
  json rows = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    json row;
    row["t"] = ts[i];
    json jq = json::array(), jqd = json::array(), jqdd = json::array();
    for (std::size_t j = 0; j < nd; ++j) {
      jq.push_back(q[j * n + i]);
      jqd.push_back(qd[j * n + i]);
      jqdd.push_back(qdd[j * n + i]);
    }
    row["q"] = jq;
    row["qd"] = jqd;
    row["qdd"] = jqdd;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

json outcome_to_json(const PlanOutcome& outcome, const std::string& planner,
                     const std::string& connector, std::uint64_t seed,
                     bool embed_trajectories) {
  json j;
  j["schema"] = kPlanSchema;
  j["planner"] = planner;
  j["connector"] = connector;
  j["seed"] = seed;
  j["feasible"] = outcome.feasible();
  if (outcome.feasible())
    j["cost"] = outcome.cost;
  else
    j["cost"] = nullptr;
  if (outcome.start) j["start"] = outcome.start->q;
  j["segments"] = json::array();
  for (const auto& seg : outcome.segments) {
    json sj;
    sj["target_q_abs"] = seg.target.q_abs;
    sj["way"] = seg.way;
    sj["cost"] = seg.edge.cost;
    sj["n_c"] = seg.edge.n_c;
    sj["duration"] = seg.edge.trajectory.valid() ? seg.edge.trajectory.duration() : 0.0;
    if (embed_trajectories && seg.edge.trajectory.valid())
      sj["samples"] = trajectory_samples(seg.edge.trajectory);
    j["segments"].push_back(sj);
  }
  j["stats"] = {{"nodes", outcome.stats.nodes},
                {"edges_evaluated", outcome.stats.edges_evaluated},
                {"connector_calls", outcome.stats.connector_calls}};
  // measured time is the one run-to-run varying field; keep it isolated
  j["timing"] = {{"wall_time_s", outcome.stats.wall_time}};
  return j;
}

void save_outcome(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

void export_trajectory_csv(const traj::Trajectory& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  const double T = t.duration();
  const auto ts = traj::sample_grid(T, traj::default_delta_s(T));
  const std::size_t n = ts.size();
  const std::size_t nd = t.dims();
  std::vector<double> q(nd * n), qd(nd * n), qdd(nd * n);
  t.sample(ts, q.data(), qd.data(), qdd.data());
  out << "t";
  for (std::size_t j = 0; j < nd; ++j) out << ",q" << j;
  for (std::size_t j = 0; j < nd; ++j) out << ",qd" << j;
  for (std::size_t j = 0; j < nd; ++j) out << ",qdd" << j;
  out << '\n';
  char buf[32];
  const auto emit = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << ',' << buf;
  };
  for (std::size_t i = 0; i < n; ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", ts[i]);
    out << buf;
    for (std::size_t j = 0; j < nd; ++j) emit(q[j * n + i]);
    for (std::size_t j = 0; j < nd; ++j) emit(qd[j * n + i]);
    for (std::size_t j = 0; j < nd; ++j) emit(qdd[j * n + i]);
    out << '\n';
  }
}

}  // namespace cellforge::planners
