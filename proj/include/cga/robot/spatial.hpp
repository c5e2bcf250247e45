#pragma once

#include <Eigen/Core>

#include "cga/robot/system.hpp"

// Twists, wrenches and rigid-body inertia on top of motors.
//
// A twist is a motor generator bivector (e12, e13, e23, e1i, e2i, e3i); its
// coordinate vector is (omega, v) with v the velocity of the frame origin.
// A wrench is the dual of the force-line trivector n ^ einf + e0 ^ f ^ einf;
// its coordinate vector is (n, f) with n the moment about the frame origin.
// Both are carried between frames by the motor sandwich, and both evolve
// under a twist V by the same bracket (X V - V X) / 2.
namespace cga::robot::spatial {

using Vector6 = Eigen::Matrix<double, 6, 1>;
using Matrix6 = Eigen::Matrix<double, 6, 6>;

using Twist = GeneratorD;
using WrenchLine = cga::Multivector<double, cga::masks::line>;
using Wrench = decltype(cga::dual(WrenchLine{}));

Vector6 coordinates(const Twist& v);
Twist twist(const Vector6& omega_v);
Twist twist(const Vec3& omega, const Vec3& v);

Vector6 coordinates(const Wrench& w);
Wrench wrench(const Vector6& moment_force);

/// V sandwiched by m (frame change child -> parent when m maps parent to child).
Twist transport(const MotorD& m, const Twist& v);
Wrench transport(const MotorD& m, const Wrench& w);

/// Bracket (X V - V X) / 2: the rate of change of X under the motion V.
Twist cross(const Twist& v, const Twist& x);
Wrench cross(const Twist& v, const Wrench& w);

/// Power pairing omega.n + v.f.
double power(const Twist& v, const Wrench& w);

/// 6x6 spatial inertia about the frame origin in (omega, v) -> (n, f) coordinates.
Matrix6 inertia_matrix(const Link& link);

Wrench apply_inertia(const Matrix6& inertia, const Twist& v);

/// Coordinate matrices of the sandwich by m acting on twists and wrenches.
Matrix6 twist_transport_matrix(const MotorD& m);
Matrix6 wrench_transport_matrix(const MotorD& m);

}  // namespace cga::robot::spatial
