#include "cellforge/model/types.hpp"

#include <cmath>
#include <stdexcept>

namespace cellforge::model {

void ModuleSpec::validate() const {
  if (id.empty()) throw std::invalid_argument("module id must be non-empty");
  auto finite_pos = [](double v) { return std::isfinite(v) && v > 0.0; };
  auto finite_nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
  if (kind == ModuleKind::joint) {
    if (!finite_pos(v_max) || !finite_pos(a_max) || !finite_pos(tau_max))
      throw std::invalid_argument("joint module '" + id + "' needs positive v_max, a_max, tau_max");
    if (!finite_nonneg(mass))
      throw std::invalid_argument("joint module '" + id + "' needs mass >= 0");
    if (length != 0.0)
      throw std::invalid_argument("joint module '" + id + "' must not set length");
  } else {
    if (!finite_pos(length))
      throw std::invalid_argument("link module '" + id + "' needs positive length");
    if (!finite_nonneg(mass))
      throw std::invalid_argument("link module '" + id + "' needs mass >= 0");
    if (v_max != 0.0 || a_max != 0.0 || tau_max != 0.0)
      throw std::invalid_argument("link module '" + id + "' must not set joint limits");
  }
}

ModuleSpec ModuleSpec::joint(std::string id, double v_max, double a_max,
                             double tau_max, double mass) {
  ModuleSpec m;
  m.id = std::move(id);
  m.kind = ModuleKind::joint;
  m.v_max = v_max;
  m.a_max = a_max;
  m.tau_max = tau_max;
  m.mass = mass;
  m.validate();
  return m;
}

ModuleSpec ModuleSpec::link(std::string id, double length, double mass) {
  ModuleSpec m;
  m.id = std::move(id);
  m.kind = ModuleKind::link;
  m.length = length;
  m.mass = mass;
  m.validate();
  return m;
}

Composition::Composition(std::vector<ModuleSpec> modules)
    : modules_(std::move(modules)) {
  if (modules_.empty()) throw std::invalid_argument("composition must not be empty");
  if (modules_.front().kind != ModuleKind::joint)
    throw std::invalid_argument("composition must start with a joint module");
  for (const auto& m : modules_) m.validate();

  for (const auto& m : modules_) {
    if (m.kind == ModuleKind::joint) {
      v_max_.push_back(m.v_max);
      a_max_.push_back(m.a_max);
      tau_max_.push_back(m.tau_max);
      joint_mass_.push_back(m.mass);
      link_lengths_.push_back(0.0);
      link_mass_.push_back(0.0);
    } else {
      link_lengths_.back() += m.length;
      link_mass_.back() += m.mass;
    }
  }
  for (double l : link_lengths_) total_reach_ += l;
}

std::string Composition::id() const {
  std::string s;
  for (std::size_t i = 0; i < modules_.size(); ++i) {
    if (i) s += '-';
    s += modules_[i].id;
  }
  return s;
}

}  // namespace cellforge::model
