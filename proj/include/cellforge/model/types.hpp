#pragma once

#include <span>
#include <string>
#include <vector>

#include "cellforge/common.hpp"

namespace cellforge::model {

enum class ModuleKind { joint, link };

// One entry of a module library: either a revolute joint (velocity,
// acceleration and torque limits) or a rigid link of fixed length.
struct ModuleSpec {
  std::string id;
  ModuleKind kind = ModuleKind::joint;
  // joint fields
  double v_max = 0.0;    // rad/s
  double a_max = 0.0;    // rad/s^2
  double tau_max = 0.0;  // N*m
  // link field
  double length = 0.0;  // m
  // both
  double mass = 0.0;  // kg

  void validate() const;

  static ModuleSpec joint(std::string id, double v_max, double a_max,
                          double tau_max, double mass = 0.0);
  static ModuleSpec link(std::string id, double length, double mass = 0.0);
};

// An ordered module sequence forming a planar serial arm, with the kinematic
// parameters derived from it: joint limits in base-to-tip order and one
// (possibly zero-length) segment after each joint.
class Composition {
 public:
  Composition() = default;
  explicit Composition(std::vector<ModuleSpec> modules);

  const std::vector<ModuleSpec>& modules() const { return modules_; }
  std::size_t n_q() const { return v_max_.size(); }
  const std::vector<double>& v_max() const { return v_max_; }
  const std::vector<double>& a_max() const { return a_max_; }
  const std::vector<double>& tau_max() const { return tau_max_; }
  const std::vector<double>& joint_mass() const { return joint_mass_; }
  // Length of the segment that follows joint i (0 when two joints are
  // mounted back to back).
  const std::vector<double>& link_lengths() const { return link_lengths_; }
  // Mass of the structure lumped on segment i (sum of the link modules in it).
  const std::vector<double>& link_mass() const { return link_mass_; }
  double total_reach() const { return total_reach_; }

  // "j1-l2-j1" style identity used in reports and for seed derivation.
  std::string id() const;

 private:
  std::vector<ModuleSpec> modules_;
  std::vector<double> v_max_, a_max_, tau_max_, joint_mass_;
  std::vector<double> link_lengths_, link_mass_;
  double total_reach_ = 0.0;
};

struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double phi = 0.0;  // rad, canonical (-pi, pi]

  Vec2 position() const { return {x, y}; }
};

// Canonical joint configuration: every component in (-pi, pi].
struct JointConfig {
  std::vector<double> q;

  bool operator==(const JointConfig&) const = default;
};

// Absolute joint target measured against an origin configuration; encodes
// the chosen turn direction per joint. |q_abs[i] - origin[i]| <= 2*pi.
struct UnwrappedTarget {
  std::vector<double> q_abs;
  JointConfig origin;
};

struct IkConfig {
  int n_starts = 32;
  double tol_pos = 1e-4;     // m
  double tol_ang = 1e-4;     // rad
  int max_iters = 120;
  double damping = 0.1;      // damped-least-squares lambda
  double step_clamp = 0.5;   // rad, per-iteration per-joint cap
  double dedup_radius = 1e-3;  // rad, componentwise wrapped distance
  int polish_iters = 12;
  std::uint64_t start_seed = 0;  // offsets the low-discrepancy start sequence
};

}  // namespace cellforge::model
