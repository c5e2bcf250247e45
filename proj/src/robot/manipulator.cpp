#include "cga/robot/manipulator.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "cga/robot/spatial.hpp"

namespace cga::robot {

namespace {

MotorD mul(const MotorD& a, const MotorD& b) { return MotorD(MotorD::Base::project(a * b)); }

}  // namespace

Manipulator::Manipulator(System system, const std::string& end_effector_joint) : ee_joint_(end_effector_joint) {
  if (!system.finalized()) system.finalize();
  system_ = std::make_shared<const System>(std::move(system));
  if (!system_->has_joint(end_effector_joint))
    throw NoSuchJoint("end-effector joint '" + end_effector_joint + "' does not exist");
  chain_ = KinematicChain(end_effector_joint, system_->path_to_joint(end_effector_joint));
  if (chain_.dof() < 1)
    throw NonSerialChain("chain to end-effector joint '" + end_effector_joint + "' has no actuated joints");
}

void Manipulator::require_size(const VectorX& v, const char* what) const {
  if (v.size() != dof())
    throw DimensionMismatch(std::string(what) + " has length " + std::to_string(v.size()) + ", expected dof " +
                            std::to_string(dof()));
}

void Manipulator::check_limits(const VectorX& q) const {
  require_size(q, "q");
  int k = 0;
  for (const Joint* j : chain_.joints()) {
    if (!j->actuated()) continue;
    j->motor(q[k++], true);
  }
}

std::vector<MotorD> Manipulator::joint_motors(const VectorX& q) const {
  require_size(q, "q");
  std::vector<MotorD> out;
  out.reserve(chain_.joints().size());
  int k = 0;
  for (const Joint* j : chain_.joints()) out.push_back(j->motor(j->actuated() ? q[k++] : 0.0));
  return out;
}

MotorD Manipulator::forward_kinematics(const VectorX& q) const {
  MotorD m = system_->world_to_base();
  for (const MotorD& jm : joint_motors(q)) m = mul(m, jm);
  return m;
}

std::vector<GeneratorD> Manipulator::geometric_jacobian(const VectorX& q) const {
  std::vector<GeneratorD> cols;
  cols.reserve(dof());
  MotorD partial = system_->world_to_base();
  const auto motors = joint_motors(q);
  for (std::size_t i = 0; i < motors.size(); ++i) {
    partial = mul(partial, motors[i]);
    const Joint& j = *chain_.joints()[i];
    if (j.actuated()) cols.push_back(sandwich(partial, j.twist()));
  }
  return cols;
}

std::vector<MotorD> Manipulator::analytic_jacobian(const VectorX& q) const {
  const auto motors = joint_motors(q);
  const std::size_t n = motors.size();
  // prefix[i] = W * M_0..i, suffix[i] = M_i..n-1
  std::vector<MotorD> prefix(n), suffix(n + 1);
  MotorD acc = system_->world_to_base();
  for (std::size_t i = 0; i < n; ++i) prefix[i] = acc = mul(acc, motors[i]);
  suffix[n] = MotorD();
  for (std::size_t i = n; i-- > 0;) suffix[i] = mul(motors[i], suffix[i + 1]);

  std::vector<MotorD> cols;
  cols.reserve(dof());
  for (std::size_t i = 0; i < n; ++i) {
    const Joint& j = *chain_.joints()[i];
    if (!j.actuated()) continue;
    const auto left = prefix[i] * (j.twist() * -0.5);
    cols.push_back(MotorD(MotorD::Base::project(left * suffix[i + 1])));
  }
  return cols;
}

std::vector<GeneratorD> Manipulator::frame_jacobian(const VectorX& q) const {
  const MotorD ee = forward_kinematics(q);
  const MotorD ee_rev = ee.reverse();
  auto cols = geometric_jacobian(q);
  for (auto& c : cols) c = sandwich(ee_rev, c);
  return cols;
}

// Both recursions run over every joint of the chain; fixed joints rigidly
// attach their child link and carry no motion subspace.
VectorX Manipulator::inverse_dynamics(const VectorX& q, const VectorX& qd, const VectorX& qdd,
                                      const Vec3& gravity) const {
  using namespace spatial;
  require_size(qd, "qd");
  require_size(qdd, "qdd");
  const auto motors = joint_motors(q);
  const auto& joints = chain_.joints();
  const std::size_t n = joints.size();

  const Vec3 g_base = sandwich(system_->world_to_base().reverse(), GeneratorD::from_twist(Vec3::Zero(), gravity)).linear();
  Twist v_parent;
  Twist a_parent = twist(Vec3::Zero(), -g_base);
  std::vector<Wrench> forces(n);
  std::vector<int> index(n, -1);

  int k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Joint& j = *joints[i];
    const MotorD inv = motors[i].reverse();
    Twist v = transport(inv, v_parent);
    Twist a = transport(inv, a_parent);
    if (j.actuated()) {
      index[i] = k;
      const Twist s = j.twist();
      const Twist sqd(s * qd[k]);
      v += sqd;
      a += Twist(s * qdd[k]) + cross(v, sqd);
      ++k;
    }
    const Matrix6 inertia = inertia_matrix(system_->link(j.child_link));
    forces[i] = apply_inertia(inertia, a) + cross(v, apply_inertia(inertia, v));
    v_parent = v;
    a_parent = a;
  }

  VectorX tau(dof());
  for (std::size_t i = n; i-- > 0;) {
    const Joint& j = *joints[i];
    if (j.actuated()) tau[index[i]] = power(j.twist(), forces[i]);
    if (i > 0) forces[i - 1] += transport(motors[i], forces[i]);
  }
  return tau;
}

VectorX Manipulator::forward_dynamics(const VectorX& q, const VectorX& qd, const VectorX& tau,
                                      const Vec3& gravity) const {
  using namespace spatial;
  require_size(qd, "qd");
  require_size(tau, "tau");
  const auto motors = joint_motors(q);
  const auto& joints = chain_.joints();
  const std::size_t n = joints.size();

  std::vector<Twist> v(n), c(n);
  std::vector<Matrix6> ia(n);
  std::vector<Vector6> pa(n), u_vec(n);
  std::vector<double> d(n, 0.0), u(n, 0.0);
  std::vector<int> index(n, -1);

  Twist v_parent;
  int k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Joint& j = *joints[i];
    v[i] = transport(motors[i].reverse(), v_parent);
    if (j.actuated()) {
      index[i] = k;
      const Twist sqd(j.twist() * qd[k]);
      v[i] += sqd;
      c[i] = cross(v[i], sqd);
      ++k;
    }
    ia[i] = inertia_matrix(system_->link(j.child_link));
    pa[i] = coordinates(cross(v[i], apply_inertia(ia[i], v[i])));
    v_parent = v[i];
  }

  for (std::size_t i = n; i-- > 0;) {
    const Joint& j = *joints[i];
    Matrix6 ia_child = ia[i];
    Vector6 pa_child = pa[i];
    if (j.actuated()) {
      const Vector6 s = coordinates(j.twist());
      u_vec[i] = ia[i] * s;
      d[i] = s.dot(u_vec[i]);
      if (std::abs(d[i]) < 1e-12)
        throw SingularInertia("joint '" + j.name + "': articulated inertia about the joint axis is singular");
      u[i] = tau[index[i]] - s.dot(pa[i]);
      ia_child -= u_vec[i] * u_vec[i].transpose() / d[i];
      pa_child += u_vec[i] * (u[i] / d[i]);
    }
    pa_child += ia_child * coordinates(c[i]);
    if (i > 0) {
      const Matrix6 to_parent_force = wrench_transport_matrix(motors[i]);
      const Matrix6 to_child_motion = twist_transport_matrix(motors[i].reverse());
      ia[i - 1] += to_parent_force * ia_child * to_child_motion;
      pa[i - 1] += to_parent_force * pa_child;
    }
  }

  const Vec3 g_base = sandwich(system_->world_to_base().reverse(), GeneratorD::from_twist(Vec3::Zero(), gravity)).linear();
  Twist a_parent = twist(Vec3::Zero(), -g_base);
  VectorX qdd(dof());
  for (std::size_t i = 0; i < n; ++i) {
    const Joint& j = *joints[i];
    Twist a = transport(motors[i].reverse(), a_parent);
    a += c[i];
    if (j.actuated()) {
      const double acc = (u[i] - u_vec[i].dot(coordinates(a))) / d[i];
      qdd[index[i]] = acc;
      a += Twist(j.twist() * acc);
    }
    a_parent = a;
  }
  return qdd;
}

MatrixX Manipulator::mass_matrix(const VectorX& q) const {
  const int n = dof();
  MatrixX m(n, n);
  const VectorX zero = VectorX::Zero(n);
  for (int k = 0; k < n; ++k) m.col(k) = inverse_dynamics(q, zero, VectorX::Unit(n, k), Vec3::Zero());
  return m;
}

}  // namespace cga::robot
