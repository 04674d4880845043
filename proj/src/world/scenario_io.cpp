#include "cellforge/world/scenario_io.hpp"

#include <fstream>
#include <stdexcept>

namespace cellforge::world {

using nlohmann::json;

namespace {

json rect_to_json(const Rect& r) {
  return json{{"min", {r.min.x, r.min.y}}, {"max", {r.max.x, r.max.y}}};
}

Rect rect_from_json(const json& j) {
  return Rect{{j.at("min").at(0).get<double>(), j.at("min").at(1).get<double>()},
              {j.at("max").at(0).get<double>(), j.at("max").at(1).get<double>()}};
}

json pose_to_json(const model::Pose2& p) {
  return json{{"x", p.x}, {"y", p.y}, {"phi", p.phi}};
}

model::Pose2 pose_from_json(const json& j) {
  return {j.at("x").get<double>(), j.at("y").get<double>(), j.at("phi").get<double>()};
}

}  // namespace

json scenario_to_json(const Scenario& s) {
  json j;
  j["schema"] = kScenarioSchema;
  j["seed"] = s.seed;
  j["complexity"] = s.complexity == Complexity::simple ? "simple" : "complex";
  j["obstacles"] = json::array();
  for (const auto& o : s.obstacles) {
    if (const auto* d = std::get_if<Disc>(&o.shape)) {
      j["obstacles"].push_back(json{{"type", "disc"},
                                    {"center", {d->center.x, d->center.y}},
                                    {"radius", d->radius}});
    } else {
      const auto& r = std::get<Rect>(o.shape);
      json rj = rect_to_json(r);
      rj["type"] = "rect";
      j["obstacles"].push_back(rj);
    }
  }
  j["conveyor_region"] = rect_to_json(s.conveyor_region);
  j["pallet_region"] = rect_to_json(s.pallet_region);
  j["boxes"] = json::array();
  for (const auto& b : s.boxes) {
    j["boxes"].push_back(json{{"size", {b.size.x, b.size.y}}, {"mass", b.mass}});
  }
  j["pick_pose"] = pose_to_json(s.pick_pose);
  j["place_poses"] = json::array();
  for (const auto& p : s.place_poses) j["place_poses"].push_back(pose_to_json(p));
  return j;
}

Scenario scenario_from_json(const json& j) {
  if (j.value("schema", "") != kScenarioSchema)
    throw std::invalid_argument("unsupported scenario schema");
  Scenario s;
  s.seed = j.at("seed").get<std::uint64_t>();
  s.complexity = j.at("complexity").get<std::string>() == "complex"
                     ? Complexity::complex_
                     : Complexity::simple;
  for (const auto& oj : j.at("obstacles")) {
    if (oj.at("type") == "disc") {
      s.obstacles.push_back(Obstacle{
          Disc{{oj.at("center").at(0).get<double>(), oj.at("center").at(1).get<double>()},
               oj.at("radius").get<double>()}});
    } else {
      s.obstacles.push_back(Obstacle{rect_from_json(oj)});
    }
  }
  s.conveyor_region = rect_from_json(j.at("conveyor_region"));
  s.pallet_region = rect_from_json(j.at("pallet_region"));
  for (const auto& bj : j.at("boxes")) {
    s.boxes.push_back(BoxSpec{{bj.at("size").at(0).get<double>(),
                               bj.at("size").at(1).get<double>()},
                              bj.at("mass").get<double>()});
  }
  s.pick_pose = pose_from_json(j.at("pick_pose"));
  for (const auto& pj : j.at("place_poses")) s.place_poses.push_back(pose_from_json(pj));
  s.validate();
  return s;
}

void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << scenario_to_json(s).dump(2) << '\n';
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return scenario_from_json(j);
}

}  // namespace cellforge::world
