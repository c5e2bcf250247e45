#include "cga/robot/spatial.hpp"

namespace cga::robot::spatial {

namespace {

Mat3 skew(const Vec3& v) {
  Mat3 s;
  s << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return s;
}

template <std::uint32_t M, std::uint32_t V>
Multivector<double, M> bracket(const Multivector<double, V>& v, const Multivector<double, M>& x) {
  const auto xv = product<ProductKind::geometric, M>(x, v);
  const auto vx = product<ProductKind::geometric, M>(v, x);
  return Multivector<double, M>(xv - vx) * 0.5;
}

}  // namespace

Vector6 coordinates(const Twist& v) {
  Vector6 out;
  out << v.angular(), v.linear();
  return out;
}

Twist twist(const Vector6& omega_v) { return Twist::from_twist(omega_v.head<3>(), omega_v.tail<3>()); }
Twist twist(const Vec3& omega, const Vec3& v) { return Twist::from_twist(omega, v); }

Vector6 coordinates(const Wrench& w) {
  const auto line = WrenchLine::project(undual(w));
  Vector6 out;
  out << line.get<blade::e23i>(), -line.get<blade::e13i>(), line.get<blade::e12i>(),  //
      line.get<blade::e01i>(), line.get<blade::e02i>(), line.get<blade::e03i>();
  return out;
}

Wrench wrench(const Vector6& moment_force) {
  WrenchLine line;
  line.set<blade::e23i>(moment_force[0]);
  line.set<blade::e13i>(-moment_force[1]);
  line.set<blade::e12i>(moment_force[2]);
  line.set<blade::e01i>(moment_force[3]);
  line.set<blade::e02i>(moment_force[4]);
  line.set<blade::e03i>(moment_force[5]);
  return dual(line);
}

Twist transport(const MotorD& m, const Twist& v) { return sandwich(m, v); }
Wrench transport(const MotorD& m, const Wrench& w) { return sandwich(m, w); }

Twist cross(const Twist& v, const Twist& x) { return Twist(bracket(v, static_cast<const Twist::Base&>(x))); }
Wrench cross(const Twist& v, const Wrench& w) { return bracket(static_cast<const Twist::Base&>(v), w); }

double power(const Twist& v, const Wrench& w) { return coordinates(v).dot(coordinates(w)); }

Matrix6 inertia_matrix(const Link& link) {
  const Mat3 c = skew(link.center_of_mass);
  Matrix6 out;
  out.topLeftCorner<3, 3>() = link.inertia + link.mass * c * c.transpose();
  out.topRightCorner<3, 3>() = link.mass * c;
  out.bottomLeftCorner<3, 3>() = link.mass * c.transpose();
  out.bottomRightCorner<3, 3>() = link.mass * Mat3::Identity();
  return out;
}

Wrench apply_inertia(const Matrix6& inertia, const Twist& v) { return wrench(inertia * coordinates(v)); }

Matrix6 twist_transport_matrix(const MotorD& m) {
  Matrix6 out;
  for (int k = 0; k < 6; ++k) out.col(k) = coordinates(transport(m, twist(Vector6::Unit(k))));
  return out;
}

Matrix6 wrench_transport_matrix(const MotorD& m) {
  Matrix6 out;
  for (int k = 0; k < 6; ++k) out.col(k) = coordinates(transport(m, wrench(Vector6::Unit(k))));
  return out;
}

}  // namespace cga::robot::spatial
