#include "cellforge/model/library_io.hpp"

#include <fstream>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

namespace cellforge::model {

namespace {

using nlohmann::json;

json spec_to_json(const ModuleSpec& m) {
  json j;
  j["id"] = m.id;
  j["kind"] = m.kind == ModuleKind::joint ? "joint" : "link";
  if (m.kind == ModuleKind::joint) {
    j["v_max"] = m.v_max;
    j["a_max"] = m.a_max;
    j["tau_max"] = m.tau_max;
  } else {
    j["length"] = m.length;
  }
  j["mass"] = m.mass;
  return j;
}

ModuleSpec spec_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "joint") {
    return ModuleSpec::joint(j.at("id").get<std::string>(),
                             j.at("v_max").get<double>(),
                             j.at("a_max").get<double>(),
                             j.at("tau_max").get<double>(),
                             j.value("mass", 0.0));
  }
  if (kind == "link") {
    return ModuleSpec::link(j.at("id").get<std::string>(),
                            j.at("length").get<double>(), j.value("mass", 0.0));
  }
  throw std::invalid_argument("unknown module kind: " + kind);
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void write_json_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace

std::vector<ModuleSpec> load_module_library(const std::string& path) {
  const json j = load_json_file(path);
  const json& list = j.is_array() ? j : j.at("modules");
  std::vector<ModuleSpec> specs;
  specs.reserve(list.size());
  for (const auto& item : list) specs.push_back(spec_from_json(item));
  return specs;
}

void save_module_library(const std::vector<ModuleSpec>& specs,
                         const std::string& path) {
  json list = json::array();
  for (const auto& m : specs) list.push_back(spec_to_json(m));
  write_json_file(list, path);
}

Composition composition_from_ids(const std::vector<ModuleSpec>& library,
                                 const std::vector<std::string>& ids) {
  std::unordered_map<std::string, const ModuleSpec*> by_id;
  for (const auto& m : library) {
    if (!by_id.emplace(m.id, &m).second)
      throw std::invalid_argument("duplicate module id in library: " + m.id);
  }
  std::vector<ModuleSpec> modules;
  modules.reserve(ids.size());
  for (const auto& id : ids) {
    auto it = by_id.find(id);
    if (it == by_id.end())
      throw std::invalid_argument("unknown module id: " + id);
    modules.push_back(*it->second);
  }
  return Composition(std::move(modules));
}

std::vector<std::string> load_composition_ids(const std::string& path) {
  const json j = load_json_file(path);
  const json& list = j.is_array() ? j : j.at("modules");
  std::vector<std::string> ids;
  for (const auto& item : list) ids.push_back(item.get<std::string>());
  return ids;
}

void save_composition_ids(const std::vector<std::string>& ids,
                          const std::string& path) {
  json j;
  j["schema"] = "cellforge-composition/1";
  j["modules"] = ids;
  write_json_file(j, path);
}

}  // namespace cellforge::model
