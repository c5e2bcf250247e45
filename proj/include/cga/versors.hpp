#pragma once

#include <cmath>

#include "cga/multivector.hpp"
#include "cga/primitives.hpp"

namespace cga {

namespace masks {
inline constexpr std::uint32_t rotor = mask_of({scalar, e12, e13, e23});
inline constexpr std::uint32_t translator = mask_of({scalar, e1i, e2i, e3i});
inline constexpr std::uint32_t motor = mask_of({scalar, e12, e13, e23, e1i, e2i, e3i, e123i});
inline constexpr std::uint32_t dilator = mask_of({scalar, e0i});
inline constexpr std::uint32_t rotor_generator = mask_of({e12, e13, e23});
inline constexpr std::uint32_t motor_generator = mask_of({e12, e13, e23, e1i, e2i, e3i});
}  // namespace masks

namespace tolerance {
inline constexpr double log_branch = 1e-7;
inline constexpr double unit_versor = 1e-8;
inline constexpr double small_angle = 1e-6;
}  // namespace tolerance

/// Euclidean bivector b12 e12 + b13 e13 + b23 e23.
template <typename T>
using RotorGenerator = Multivector<T, masks::rotor_generator>;

/// Screw generator: rotation bivector (e12, e13, e23) plus translation
/// directions (e1i, e2i, e3i).
template <typename T>
class MotorGenerator : public Multivector<T, masks::motor_generator> {
 public:
  using Base = Multivector<T, masks::motor_generator>;
  using Base::Base;
  MotorGenerator() = default;
  MotorGenerator(const Base& b) : Base(b) {}

  /// Generator whose exponential rotates by |omega| about omega and translates
  /// along v (exp of a pure v generator is the translation by v).
  static MotorGenerator from_twist(const Vec3<T>& omega, const Vec3<T>& v) {
    return MotorGenerator(Base({omega.z(), -omega.y(), omega.x(), v.x(), v.y(), v.z()}));
  }
  Vec3<T> angular() const { return {(*this)[2], -(*this)[1], (*this)[0]}; }
  Vec3<T> linear() const { return {(*this)[3], (*this)[4], (*this)[5]}; }
};

/// Bivector of a rotation by |axis_angle| about axis_angle.
template <typename T>
RotorGenerator<T> rotation_bivector(const Vec3<T>& axis_angle) {
  return RotorGenerator<T>({axis_angle.z(), -axis_angle.y(), axis_angle.x()});
}

namespace detail {

// sin(x/2)/x
template <typename T>
T half_sinc(T x) {
  if (std::abs(x) < T(tolerance::small_angle)) return T(0.5) - x * x / T(48) + x * x * x * x / T(3840);
  return std::sin(x / 2) / x;
}

// (cos(x/2)/2 - sin(x/2)/x) / x^2
template <typename T>
T motor_exp_axial(T x) {
  if (std::abs(x) < T(tolerance::small_angle)) return -T(1) / T(24) + x * x / T(960);
  return (std::cos(x / 2) / 2 - std::sin(x / 2) / x) / (x * x);
}

// (2 cos(x/2) - x / sin(x/2)) / x^2
template <typename T>
T motor_log_axial(T x) {
  if (std::abs(x) < T(tolerance::small_angle)) return -T(1) / T(3) + x * x / T(360);
  return (2 * std::cos(x / 2) - x / std::sin(x / 2)) / (x * x);
}

template <typename T, std::uint32_t M>
void require_unit(const Multivector<T, M>& v) {
  const auto p = v * v.reverse();
  using P = decltype(p);
  constexpr auto list = blade_list<P::mask>;
  T err = 0;
  for (std::size_t k = 0; k < P::size; ++k) err = std::max<T>(err, std::abs(p[k] - (list[k] == 0 ? T(1) : T(0))));
  if (err > T(tolerance::unit_versor)) throw NotUnitVersor("versor is not unit: |V ~V - 1| = " + std::to_string(err));
}

}  // namespace detail

#define CGA_VERSOR_BASICS(Name, MaskValue) \
  using Base = Multivector<T, MaskValue>;  \
  using Base::Base;                        \
  Name(const Base& b) : Base(b) {}

/// Rotation exp(-B/2).
template <typename T>
class Rotor : public Multivector<T, masks::rotor> {
 public:
  CGA_VERSOR_BASICS(Rotor, masks::rotor)
  Rotor() : Base({T(1), T(0), T(0), T(0)}) {}

  static Rotor exp(const RotorGenerator<T>& b) {
    const T theta = std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
    const T s = detail::half_sinc(theta);
    return Rotor(Base({std::cos(theta / 2), -s * b[0], -s * b[1], -s * b[2]}));
  }

  static Rotor from_axis_angle(const Vec3<T>& axis, T angle) {
    return exp(rotation_bivector<T>(axis.normalized() * angle));
  }

  /// Generator B with exp(B) == *this, rotation angle in [0, 2pi).
  RotorGenerator<T> log() const {
    const T bn = std::sqrt((*this)[1] * (*this)[1] + (*this)[2] * (*this)[2] + (*this)[3] * (*this)[3]);
    const T n = std::sqrt((*this)[0] * (*this)[0] + bn * bn);
    if ((*this)[0] / n <= T(-1) + T(tolerance::log_branch)) throw LogBranchSingularity("rotor log at rotation angle 2*pi branch");
    const T theta = 2 * std::atan2(bn, (*this)[0]);
    const T s = detail::half_sinc(theta) * n;
    return RotorGenerator<T>({-(*this)[1] / s, -(*this)[2] / s, -(*this)[3] / s});
  }

  T angle() const {
    const T bn = std::sqrt((*this)[1] * (*this)[1] + (*this)[2] * (*this)[2] + (*this)[3] * (*this)[3]);
    return 2 * std::atan2(bn, (*this)[0]);
  }
};

/// Translation 1 - t einf / 2.
template <typename T>
class Translator : public Multivector<T, masks::translator> {
 public:
  CGA_VERSOR_BASICS(Translator, masks::translator)
  Translator() : Base({T(1), T(0), T(0), T(0)}) {}
  explicit Translator(const Vec3<T>& t) : Base({T(1), -t.x() / 2, -t.y() / 2, -t.z() / 2}) {}

  static Translator exp(const Vec3<T>& t) { return Translator(t); }
  Vec3<T> log() const { return Vec3<T>((*this)[1], (*this)[2], (*this)[3]) * T(-2); }
};

/// Rigid motion T R. Stored with the e123i blade so products of motors stay
/// in one layout.
template <typename T>
class Motor : public Multivector<T, masks::motor> {
 public:
  CGA_VERSOR_BASICS(Motor, masks::motor)
  Motor() : Base({T(1), T(0), T(0), T(0), T(0), T(0), T(0), T(0)}) {}
  Motor(const Translator<T>& t, const Rotor<T>& r) : Base(Base::project(t * r)) {}
  Motor(const Rotor<T>& r) : Base(r) {}
  Motor(const Translator<T>& t) : Base(t) {}

  /// Screw exponential exp(-G/2).
  static Motor exp(const MotorGenerator<T>& g) {
    const Vec3<T> axis(g[2], -g[1], g[0]);
    const Vec3<T> u(g[3], g[4], g[5]);
    const T theta = axis.norm();
    const T s = detail::half_sinc(theta);
    const T c = std::cos(theta / 2);
    const T au = axis.dot(u);
    const Vec3<T> w = s * u + detail::motor_exp_axial(theta) * au * axis;
    return Motor(Base({c, -s * g[0], -s * g[1], -s * g[2], -w.x(), -w.y(), -w.z(), s * au / 2}));
  }

  /// Screw logarithm; the rotation angle is taken in [0, 2pi).
  MotorGenerator<T> log() const {
    const Base& m = *this;
    const T bn = std::sqrt(m[1] * m[1] + m[2] * m[2] + m[3] * m[3]);
    const T n = std::sqrt(m[0] * m[0] + bn * bn);
    if (m[0] / n <= T(-1) + T(tolerance::log_branch)) throw LogBranchSingularity("motor log at rotation angle 2*pi branch");
    const T theta = 2 * std::atan2(bn, m[0]);
    const T s = detail::half_sinc(theta);
    // rotation bivector B = -R_2 / s and its axis
    const T b12 = -m[1] / (n * s), b13 = -m[2] / (n * s), b23 = -m[3] / (n * s);
    const Vec3<T> axis(b23, -b13, b12);
    const Vec3<T> w = -Vec3<T>(m[4], m[5], m[6]) / n;
    const T w3 = -m[7] / n;
    const Vec3<T> u = w / s + detail::motor_log_axial(theta) * w.dot(axis) * axis - 2 * s * w3 * axis;
    return MotorGenerator<T>(typename MotorGenerator<T>::Base({b12, b13, b23, u.x(), u.y(), u.z()}));
  }

  Rotor<T> rotor() const { return Rotor<T>(Rotor<T>::Base::project(static_cast<const Base&>(*this))); }
  Translator<T> translator() const {
    return Translator<T>(Translator<T>::Base::project(static_cast<const Base&>(*this) * rotor().reverse()));
  }
  Vec3<T> translation() const { return translator().log(); }
};

/// Uniform scaling about the origin by lambda: exp(ln(lambda)/2 e0i).
template <typename T>
class Dilator : public Multivector<T, masks::dilator> {
 public:
  CGA_VERSOR_BASICS(Dilator, masks::dilator)
  Dilator() : Base({T(1), T(0)}) {}

  static Dilator exp(T log_scale) {
    const T a = log_scale / 2;
    return Dilator(Base({std::cosh(a), std::sinh(a)}));
  }
  static Dilator from_scale(T scale) {
    if (!(scale > T(0))) throw std::invalid_argument("dilation scale must be positive");
    return exp(std::log(scale));
  }
  T log() const { return 2 * std::atanh((*this)[1] / (*this)[0]); }
  T scale() const { return std::exp(log()); }
};

#undef CGA_VERSOR_BASICS

// ---------------------------------------------------------------- sandwich

/// V X ~V evaluated only on the blades of X. No unit check.
template <typename T, std::uint32_t V, typename X>
X sandwich(const Multivector<T, V>& v, const X& x) {
  const auto left = v * static_cast<const Multivector<T, X::mask>&>(x);
  return X(product<ProductKind::geometric, X::mask>(left, v.reverse()));
}

/// Applies a unit versor to X; the result keeps X's type and blade set.
template <typename T, std::uint32_t V, typename X>
X apply(const Multivector<T, V>& v, const X& x) {
  detail::require_unit(v);
  return sandwich(v, x);
}

namespace detail {
template <typename T, std::uint32_t M>
auto as_versor(const Multivector<T, M>& m) {
  if constexpr ((M & ~masks::rotor) == 0) {
    return Rotor<T>(typename Rotor<T>::Base(m));
  } else if constexpr ((M & ~masks::translator) == 0) {
    return Translator<T>(typename Translator<T>::Base(m));
  } else if constexpr ((M & ~masks::motor) == 0) {
    return Motor<T>(typename Motor<T>::Base(m));
  } else if constexpr ((M & ~masks::dilator) == 0) {
    return Dilator<T>(typename Dilator<T>::Base(m));
  } else {
    return m;
  }
}
}  // namespace detail

/// Product of two versors, typed by its blade set: Rotor*Rotor -> Rotor,
/// Translator*Rotor -> Motor, Motor*Motor -> Motor, and so on.
template <typename T, std::uint32_t A, std::uint32_t B>
auto compose(const Multivector<T, A>& a, const Multivector<T, B>& b) {
  return detail::as_versor(a * b);
}

}  // namespace cga
