#pragma once

#include <Eigen/Core>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cga/versors.hpp"

namespace cga::robot {

using Vec3 = cga::Vec3<double>;
using Mat3 = Eigen::Matrix3d;
using MotorD = cga::Motor<double>;
using GeneratorD = cga::MotorGenerator<double>;

enum class JointKind { fixed, revolute, prismatic };

const char* to_string(JointKind kind);
std::optional<JointKind> parse_joint_kind(std::string_view s);

struct JointLimits {
  double lower = 0.0;
  double upper = 0.0;
  double velocity = 0.0;
  double effort = 0.0;
};

struct Joint {
  std::string name;
  JointKind kind = JointKind::fixed;
  std::string parent_link;
  std::string child_link;
  /// Fixed transform from the parent link frame to the joint frame.
  MotorD frame;
  /// Unit axis in the joint frame (unused for fixed joints).
  Vec3 axis = Vec3::UnitZ();
  std::optional<JointLimits> limits;

  bool actuated() const { return kind != JointKind::fixed; }

  /// Unit generator of the joint motion in the joint frame: the rotation
  /// bivector of the axis (revolute) or axis ^ einf (prismatic).
  GeneratorD twist() const;

  /// frame * exp(-q B / 2); fixed joints ignore q.
  MotorD motor(double q, bool enforce_limits = false) const;
};

struct Link {
  std::string name;
  double mass = 0.0;
  /// Centre of mass in the link frame.
  Vec3 center_of_mass = Vec3::Zero();
  /// Rotational inertia about the centre of mass, link-frame axes.
  Mat3 inertia = Mat3::Zero();
};

class KinematicChain {
 public:
  KinematicChain() = default;
  KinematicChain(std::string name, std::vector<const Joint*> joints);

  const std::string& name() const { return name_; }
  /// All joints base to tip, fixed ones included.
  const std::vector<const Joint*>& joints() const { return joints_; }
  /// Number of actuated joints.
  int dof() const { return dof_; }

 private:
  std::string name_;
  std::vector<const Joint*> joints_;
  int dof_ = 0;
};

/// Joint/link tree. Elements are added individually; the relation graph is
/// validated by finalize(), after which the system is immutable.
class System {
 public:
  System() = default;
  System(const System& other);
  System& operator=(const System& other);
  System(System&&) = default;
  System& operator=(System&&) = default;

  void set_name(std::string name) { name_ = std::move(name); }
  const std::string& name() const { return name_; }

  void add_link(Link link);
  void add_joint(Joint joint);
  void add_kinematic_chain(std::string name, std::vector<std::string> joint_names);

  /// Optional pose of the base link in the world frame.
  void set_world_to_base(const MotorD& m) { world_to_base_ = m; }
  const MotorD& world_to_base() const { return world_to_base_; }

  /// Validates references, the tree property and chains. Throws
  /// DanglingReference, CycleDetected or NonSerialChain.
  void finalize();
  bool finalized() const { return finalized_; }

  const std::vector<Link>& links() const { return links_; }
  const std::vector<Joint>& joints() const { return joints_; }
  const Link& link(const std::string& name) const;
  const Joint& joint(const std::string& name) const;
  bool has_link(const std::string& name) const { return link_index_.count(name) != 0; }
  bool has_joint(const std::string& name) const { return joint_index_.count(name) != 0; }

  const std::string& base_link() const { return base_link_; }
  const KinematicChain& chain(const std::string& name) const;
  const std::map<std::string, KinematicChain>& chains() const { return chains_; }

  /// Joints from the base link to (and including) the named joint.
  std::vector<const Joint*> path_to_joint(const std::string& joint_name) const;

 private:
  void rebuild_chains();

  std::string name_;
  std::vector<Link> links_;
  std::vector<Joint> joints_;
  std::map<std::string, std::size_t> link_index_;
  std::map<std::string, std::size_t> joint_index_;
  std::map<std::string, std::vector<std::string>> chain_specs_;
  std::map<std::string, KinematicChain> chains_;
  std::map<std::string, std::size_t> parent_joint_of_link_;
  std::string base_link_;
  MotorD world_to_base_;
  bool finalized_ = false;
};

}  // namespace cga::robot
