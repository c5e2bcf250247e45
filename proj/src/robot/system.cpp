#include "cga/robot/system.hpp"

#include <set>

namespace cga::robot {

const char* to_string(JointKind kind) {
  switch (kind) {
    case JointKind::fixed: return "fixed";
    case JointKind::revolute: return "revolute";
    case JointKind::prismatic: return "prismatic";
  }
  return "unknown";
}

std::optional<JointKind> parse_joint_kind(std::string_view s) {
  if (s == "fixed") return JointKind::fixed;
  if (s == "revolute") return JointKind::revolute;
  if (s == "prismatic") return JointKind::prismatic;
  return std::nullopt;
}

GeneratorD Joint::twist() const {
  switch (kind) {
    case JointKind::revolute: return GeneratorD::from_twist(axis, Vec3::Zero());
    case JointKind::prismatic: return GeneratorD::from_twist(Vec3::Zero(), axis);
    case JointKind::fixed: break;
  }
  return GeneratorD();
}

MotorD Joint::motor(double q, bool enforce_limits) const {
  if (kind == JointKind::fixed) return frame;
  if (enforce_limits && limits && (q < limits->lower || q > limits->upper)) {
    throw JointLimitViolation("joint '" + name + "': position " + std::to_string(q) + " outside [" +
                              std::to_string(limits->lower) + ", " + std::to_string(limits->upper) + "]");
  }
  return MotorD(MotorD::Base::project(frame * MotorD::exp(twist() * q)));
}

KinematicChain::KinematicChain(std::string name, std::vector<const Joint*> joints)
    : name_(std::move(name)), joints_(std::move(joints)) {
  for (const Joint* j : joints_)
    if (j->actuated()) ++dof_;
}

System::System(const System& other)
    : name_(other.name_),
      links_(other.links_),
      joints_(other.joints_),
      link_index_(other.link_index_),
      joint_index_(other.joint_index_),
      chain_specs_(other.chain_specs_),
      parent_joint_of_link_(other.parent_joint_of_link_),
      base_link_(other.base_link_),
      world_to_base_(other.world_to_base_),
      finalized_(other.finalized_) {
  if (finalized_) rebuild_chains();
}

System& System::operator=(const System& other) {
  if (this != &other) {
    System copy(other);
    *this = std::move(copy);
  }
  return *this;
}

void System::add_link(Link link) {
  if (link_index_.count(link.name)) throw DuplicateName("link '" + link.name + "' already exists");
  if (link.mass < 0.0) throw std::invalid_argument("link '" + link.name + "': negative mass");
  finalized_ = false;
  link_index_[link.name] = links_.size();
  links_.push_back(std::move(link));
}

void System::add_joint(Joint joint) {
  if (joint_index_.count(joint.name)) throw DuplicateName("joint '" + joint.name + "' already exists");
  if (joint.actuated()) {
    const double n = joint.axis.norm();
    if (n < 1e-12) throw std::invalid_argument("joint '" + joint.name + "': zero axis");
    joint.axis /= n;
  }
  if (joint.limits && joint.limits->lower > joint.limits->upper)
    throw std::invalid_argument("joint '" + joint.name + "': lower limit exceeds upper limit");
  finalized_ = false;
  joint_index_[joint.name] = joints_.size();
  joints_.push_back(std::move(joint));
}

void System::add_kinematic_chain(std::string name, std::vector<std::string> joint_names) {
  if (chain_specs_.count(name)) throw DuplicateName("kinematic chain '" + name + "' already exists");
  finalized_ = false;
  chain_specs_[std::move(name)] = std::move(joint_names);
}

void System::finalize() {
  parent_joint_of_link_.clear();
  for (std::size_t j = 0; j < joints_.size(); ++j) {
    const Joint& joint = joints_[j];
    if (!link_index_.count(joint.parent_link))
      throw DanglingReference("joint '" + joint.name + "' references missing parent link '" + joint.parent_link + "'");
    if (!link_index_.count(joint.child_link))
      throw DanglingReference("joint '" + joint.name + "' references missing child link '" + joint.child_link + "'");
    auto [it, inserted] = parent_joint_of_link_.emplace(joint.child_link, j);
    if (!inserted)
      throw CycleDetected("link '" + joint.child_link + "' is the child of both '" + joints_[it->second].name + "' and '" +
                          joint.name + "'");
  }

  std::vector<std::string> roots;
  for (const Link& l : links_)
    if (!parent_joint_of_link_.count(l.name)) roots.push_back(l.name);
  if (links_.empty()) throw DanglingReference("system has no links");
  if (roots.empty()) throw CycleDetected("every link has a parent joint; the joint graph contains a cycle");

  // Walk to the root from every link; revisiting a link means a cycle.
  for (const Link& l : links_) {
    std::set<std::string> seen;
    std::string current = l.name;
    while (true) {
      if (!seen.insert(current).second) throw CycleDetected("cycle through link '" + current + "'");
      auto it = parent_joint_of_link_.find(current);
      if (it == parent_joint_of_link_.end()) break;
      current = joints_[it->second].parent_link;
    }
  }
  if (roots.size() > 1)
    throw DanglingReference("link '" + roots[1] + "' is not connected to base link '" + roots[0] + "'");
  base_link_ = roots.front();

  for (const auto& [name, joint_names] : chain_specs_) {
    if (joint_names.empty()) throw NonSerialChain("kinematic chain '" + name + "' is empty");
    for (std::size_t k = 0; k < joint_names.size(); ++k) {
      if (!joint_index_.count(joint_names[k]))
        throw DanglingReference("kinematic chain '" + name + "' references missing joint '" + joint_names[k] + "'");
      if (k > 0) {
        const Joint& prev = joints_[joint_index_.at(joint_names[k - 1])];
        const Joint& cur = joints_[joint_index_.at(joint_names[k])];
        if (prev.child_link != cur.parent_link)
          throw NonSerialChain("kinematic chain '" + name + "': joint '" + cur.name + "' does not follow '" + prev.name + "'");
      }
    }
  }
  finalized_ = true;
  rebuild_chains();
}

void System::rebuild_chains() {
  chains_.clear();
  for (const auto& [name, joint_names] : chain_specs_) {
    std::vector<const Joint*> js;
    for (const auto& jn : joint_names) js.push_back(&joints_[joint_index_.at(jn)]);
    chains_.emplace(name, KinematicChain(name, std::move(js)));
  }
}

const Link& System::link(const std::string& name) const {
  auto it = link_index_.find(name);
  if (it == link_index_.end()) throw DanglingReference("no link named '" + name + "'");
  return links_[it->second];
}

const Joint& System::joint(const std::string& name) const {
  auto it = joint_index_.find(name);
  if (it == joint_index_.end()) throw NoSuchJoint("no joint named '" + name + "'");
  return joints_[it->second];
}

const KinematicChain& System::chain(const std::string& name) const {
  auto it = chains_.find(name);
  if (it == chains_.end()) throw DanglingReference("no kinematic chain named '" + name + "'");
  return it->second;
}

std::vector<const Joint*> System::path_to_joint(const std::string& joint_name) const {
  if (!finalized_) throw std::logic_error("system must be finalized before querying paths");
  const Joint* current = &joint(joint_name);
  std::vector<const Joint*> path{current};
  while (true) {
    auto it = parent_joint_of_link_.find(current->parent_link);
    if (it == parent_joint_of_link_.end()) break;
    current = &joints_[it->second];
    path.push_back(current);
  }
  if (path.back()->parent_link != base_link_)
    throw NonSerialChain("joint '" + joint_name + "' is not connected to base link '" + base_link_ + "'");
  return {path.rbegin(), path.rend()};
}

}  // namespace cga::robot
