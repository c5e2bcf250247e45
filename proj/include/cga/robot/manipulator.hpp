#pragma once

#include <Eigen/Core>
#include <memory>
#include <vector>

#include "cga/robot/system.hpp"

namespace cga::robot {

using VectorX = Eigen::VectorXd;
using MatrixX = Eigen::MatrixXd;

inline const Vec3 kDefaultGravity(0.0, 0.0, -9.81);

/// Serial manipulator: a finalized System plus the chain from the base link
/// to a designated end-effector joint.
class Manipulator {
 public:
  Manipulator(System system, const std::string& end_effector_joint);

  const System& system() const { return *system_; }
  const KinematicChain& chain() const { return chain_; }
  const std::string& end_effector_joint() const { return ee_joint_; }
  int dof() const { return chain_.dof(); }

  /// Throws JointLimitViolation naming the first joint outside its limits.
  void check_limits(const VectorX& q) const;

  /// Motor of each chain joint at q (base to tip, fixed joints included).
  std::vector<MotorD> joint_motors(const VectorX& q) const;

  /// End-effector motor: world_to_base * prod_i M_i(q_i).
  MotorD forward_kinematics(const VectorX& q) const;

  /// Column i is joint i's unit twist transported to the base frame by the
  /// motor of the chain up to and including joint i.
  std::vector<GeneratorD> geometric_jacobian(const VectorX& q) const;

  /// Column i = d M_ee / d q_i = M_1..i (-B_i / 2) M_i+1..n.
  std::vector<MotorD> analytic_jacobian(const VectorX& q) const;

  /// Geometric Jacobian columns expressed in the end-effector frame.
  std::vector<GeneratorD> frame_jacobian(const VectorX& q) const;

  /// Recursive Newton-Euler inverse dynamics.
  VectorX inverse_dynamics(const VectorX& q, const VectorX& qd, const VectorX& qdd,
                           const Vec3& gravity = kDefaultGravity) const;

  /// Articulated-body forward dynamics. Throws SingularInertia.
  VectorX forward_dynamics(const VectorX& q, const VectorX& qd, const VectorX& tau,
                           const Vec3& gravity = kDefaultGravity) const;

  /// Joint-space mass matrix assembled column-wise from inverse dynamics.
  MatrixX mass_matrix(const VectorX& q) const;

 private:
  void require_size(const VectorX& v, const char* what) const;

  std::shared_ptr<const System> system_;
  std::string ee_joint_;
  KinematicChain chain_;
};

}  // namespace cga::robot
