#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <utility>

#include "cga/multivector.hpp"

namespace cga {

template <typename T>
using Vec3 = Eigen::Matrix<T, 3, 1>;

constexpr std::uint32_t mask_of(std::initializer_list<BladeIndex> blades) { return BladeSet::of(blades).mask; }

namespace masks {
using namespace blade;
inline constexpr std::uint32_t vector = mask_of({e1, e2, e3});
inline constexpr std::uint32_t direction_vector = mask_of({e1i, e2i, e3i});
inline constexpr std::uint32_t point = grade_mask(1);
inline constexpr std::uint32_t dual_sphere = grade_mask(1);
inline constexpr std::uint32_t dual_plane = mask_of({e1, e2, e3, ei});
inline constexpr std::uint32_t point_pair = grade_mask(2);
inline constexpr std::uint32_t tangent_vector = grade_mask(2);
inline constexpr std::uint32_t line = mask_of({e01i, e02i, e03i, e12i, e13i, e23i});
inline constexpr std::uint32_t circle = grade_mask(3);
inline constexpr std::uint32_t plane = mask_of({e0 | e1 | e2 | ei, e0 | e1 | e3 | ei, e0 | e2 | e3 | ei, e123i});
inline constexpr std::uint32_t sphere = grade_mask(4);
inline constexpr std::uint32_t infinity = mask_of({ei});
inline constexpr std::uint32_t origin = mask_of({e0});
}  // namespace masks

namespace tolerance {
inline constexpr double degenerate = 1e-10;
}

template <typename T>
constexpr Multivector<T, masks::infinity> e_inf() {
  return Multivector<T, masks::infinity>({T(1)});
}
template <typename T>
constexpr Multivector<T, masks::origin> e_origin() {
  return Multivector<T, masks::origin>({T(1)});
}

/// Euclidean 2-norm of the stored coefficients (not the algebra norm).
template <typename T, std::uint32_t M>
T coefficient_norm(const Multivector<T, M>& a) {
  T s = 0;
  for (std::size_t k = 0; k < a.size; ++k) s += a[k] * a[k];
  return std::sqrt(s);
}

namespace detail {

// Scale-aware degeneracy test for outer-product constructions.
template <typename T, std::uint32_t M, typename... Inputs>
void require_non_degenerate(const Multivector<T, M>& blade_, const char* what, const Inputs&... inputs) {
  const T scale = (T(1) * ... * std::max<T>(T(1), coefficient_norm(inputs)));
  if (coefficient_norm(blade_) < T(tolerance::degenerate) * scale)
    throw DegenerateConfiguration(std::string(what) + ": defining points are coincident or collinear");
}

template <typename T, std::uint32_t M>
void require_non_zero(const Multivector<T, M>& a, const char* what) {
  if (coefficient_norm(a) < T(tolerance::degenerate))
    throw DegeneratePrimitive(std::string(what) + " has zero norm");
}

}  // namespace detail

#define CGA_PRIMITIVE_BASICS(Name, MaskValue)                                 \
  using Base = Multivector<T, MaskValue>;                                     \
  using Base::Base;                                                           \
  Name() = default;                                                           \
  Name(const Base& b) : Base(b) {}

/// Euclidean vector x1 e1 + x2 e2 + x3 e3.
template <typename T>
class Vector : public Multivector<T, masks::vector> {
 public:
  CGA_PRIMITIVE_BASICS(Vector, masks::vector)
  Vector(T x, T y, T z) : Base({x, y, z}) {}
  explicit Vector(const Vec3<T>& v) : Base({v.x(), v.y(), v.z()}) {}
  Vec3<T> euclidean() const { return {(*this)[0], (*this)[1], (*this)[2]}; }
};

/// Free direction v ^ einf; invariant under translation.
template <typename T>
class DirectionVector : public Multivector<T, masks::direction_vector> {
 public:
  CGA_PRIMITIVE_BASICS(DirectionVector, masks::direction_vector)
  DirectionVector(T x, T y, T z) : Base({x, y, z}) {}
  explicit DirectionVector(const Vec3<T>& v) : Base({v.x(), v.y(), v.z()}) {}
  Vec3<T> euclidean() const { return {(*this)[0], (*this)[1], (*this)[2]}; }
};

/// Conformal point x + 0.5|x|^2 einf + e0.
template <typename T>
class Point : public Multivector<T, masks::point> {
 public:
  CGA_PRIMITIVE_BASICS(Point, masks::point)

  /// The origin e0.
  static Point origin() { return Point(T(0), T(0), T(0)); }

  Point(T x, T y, T z) : Base({T(1), x, y, z, T(0.5) * (x * x + y * y + z * z)}) {}
  explicit Point(const Vec3<T>& x) : Point(x.x(), x.y(), x.z()) {}

  /// Euclidean coordinates after normalising the e0 coefficient to one.
  Vec3<T> euclidean() const {
    const T w = this->template get<blade::e0>();
    if (std::abs(w) < T(tolerance::degenerate)) throw DegeneratePoint("point has vanishing e0 coefficient (point at infinity)");
    return Vec3<T>((*this)[1], (*this)[2], (*this)[3]) / w;
  }

  Point normalized() const {
    const T w = this->template get<blade::e0>();
    if (std::abs(w) < T(tolerance::degenerate)) throw DegeneratePoint("point has vanishing e0 coefficient (point at infinity)");
    return Point(static_cast<const Base&>(*this) / w);
  }
};

/// Point-anchored direction P ^ (P . (v ^ einf)).
template <typename T>
class TangentVector : public Multivector<T, masks::tangent_vector> {
 public:
  CGA_PRIMITIVE_BASICS(TangentVector, masks::tangent_vector)
  TangentVector(const Point<T>& p, const Vec3<T>& direction)
      : Base(Base::project(p ^ (p | DirectionVector<T>(direction)))) {}
};

/// Primal point pair P1 ^ P2.
template <typename T>
class PointPair : public Multivector<T, masks::point_pair> {
 public:
  CGA_PRIMITIVE_BASICS(PointPair, masks::point_pair)

  PointPair(const Point<T>& p1, const Point<T>& p2) : Base(p1 ^ p2) {
    detail::require_non_degenerate(static_cast<const Base&>(*this), "point pair", p1, p2);
  }

  /// Splits a real point pair into its two points: (PP -+ sqrt(PP^2)) (einf . PP)^-1.
  /// Callers should treat the result as an unordered pair.
  std::pair<Point<T>, Point<T>> points() const {
    detail::require_non_zero(static_cast<const Base&>(*this), "point pair");
    const T sq = square(static_cast<const Base&>(*this));
    const T scale = coefficient_norm(static_cast<const Base&>(*this));
    if (sq < -T(tolerance::degenerate) * scale * scale) throw ImaginaryRadius("point pair is imaginary (no real split)");
    const T root = std::sqrt(std::max<T>(sq, T(0)));
    const auto axis = e_inf<T>() | static_cast<const Base&>(*this);
    const auto axis_inv = inverse(Multivector<T, masks::point>::project(axis));
    const Base& self = *this;
    const auto plus = Multivector<T, masks::point>::project((self - ScalarMv<T>::scalar(root)) * axis_inv);
    const auto minus = Multivector<T, masks::point>::project((self + ScalarMv<T>::scalar(root)) * axis_inv);
    return {Point<T>(plus).normalized(), Point<T>(minus).normalized()};
  }
};

/// Primal line P1 ^ P2 ^ einf.
template <typename T>
class Line : public Multivector<T, masks::line> {
 public:
  CGA_PRIMITIVE_BASICS(Line, masks::line)

  Line(const Point<T>& p1, const Point<T>& p2) : Base(Base::project(p1 ^ p2 ^ e_inf<T>())) {
    detail::require_non_degenerate(static_cast<const Base&>(*this), "line", p1, p2);
  }

  /// Unnormalised direction (coefficients of e0 ^ ek ^ einf).
  Vec3<T> direction() const {
    return {this->template get<blade::e01i>(), this->template get<blade::e02i>(), this->template get<blade::e03i>()};
  }

  /// Point on the line closest to the origin and unit direction.
  std::pair<Vec3<T>, Vec3<T>> decode() const {
    const Vec3<T> d = direction();
    const T dd = d.squaredNorm();
    if (dd < T(tolerance::degenerate) * T(tolerance::degenerate)) throw DegeneratePrimitive("line has zero direction");
    // moment bivector m = x ^ d stored as e12i, e13i, e23i; as a vector x × d
    const Vec3<T> moment(this->template get<blade::e23i>(), -this->template get<blade::e13i>(),
                         this->template get<blade::e12i>());
    return {d.cross(moment) / dd, d / std::sqrt(dd)};
  }

  Line normalized() const {
    const T n = direction().norm();
    if (n < T(tolerance::degenerate)) throw DegeneratePrimitive("line has zero direction");
    return Line(static_cast<const Base&>(*this) / n);
  }
};

/// Dual (inner-product null space) plane n + d einf; points x with n.x = d.
template <typename T>
class DualPlane : public Multivector<T, masks::dual_plane> {
 public:
  CGA_PRIMITIVE_BASICS(DualPlane, masks::dual_plane)

  DualPlane(const Vec3<T>& normal, T distance) : Base() {
    const T n = normal.norm();
    if (n < T(tolerance::degenerate)) throw DegeneratePrimitive("plane normal has zero length");
    const Vec3<T> u = normal / n;
    *this = DualPlane(Base({u.x(), u.y(), u.z(), distance}));
  }

  /// Unit normal and signed distance from the origin.
  std::pair<Vec3<T>, T> decode() const {
    const Vec3<T> n((*this)[0], (*this)[1], (*this)[2]);
    const T len = n.norm();
    if (len < T(tolerance::degenerate)) throw DegeneratePrimitive("plane normal has zero length");
    return {n / len, (*this)[3] / len};
  }
};

/// Primal plane P1 ^ P2 ^ P3 ^ einf.
template <typename T>
class Plane : public Multivector<T, masks::plane> {
 public:
  CGA_PRIMITIVE_BASICS(Plane, masks::plane)

  Plane(const Point<T>& p1, const Point<T>& p2, const Point<T>& p3) : Base(Base::project(p1 ^ p2 ^ p3 ^ e_inf<T>())) {
    detail::require_non_degenerate(static_cast<const Base&>(*this), "plane", p1, p2, p3);
  }

  DualPlane<T> dual() const { return DualPlane<T>(DualPlane<T>::Base::project(cga::dual(static_cast<const Base&>(*this)))); }
  std::pair<Vec3<T>, T> decode() const { return dual().decode(); }
};

/// Dual sphere c - 0.5 r^2 einf (grade 1).
template <typename T>
class DualSphere : public Multivector<T, masks::dual_sphere> {
 public:
  CGA_PRIMITIVE_BASICS(DualSphere, masks::dual_sphere)

  DualSphere(const Point<T>& center, T radius) : Base() {
    if (!(radius >= T(0))) throw std::invalid_argument("sphere radius must be non-negative");
    const Point<T> c = center.normalized();
    *this = DualSphere(static_cast<const Base&>(c) - T(0.5) * radius * radius * e_inf<T>());
  }

  /// Signed squared radius; negative for imaginary spheres.
  T squared_radius() const {
    const T w = this->template get<blade::e0>();
    if (std::abs(w) < T(tolerance::degenerate)) throw DegeneratePrimitive("sphere has vanishing e0 coefficient (flat)");
    const Base n = static_cast<const Base&>(*this) / w;
    return square(n);
  }

  std::pair<Vec3<T>, T> decode() const {
    const T w = this->template get<blade::e0>();
    if (std::abs(w) < T(tolerance::degenerate)) throw DegeneratePrimitive("sphere has vanishing e0 coefficient (flat)");
    const T r2 = squared_radius();
    const T scale = std::max<T>(T(1), coefficient_norm(static_cast<const Base&>(*this)) / std::abs(w));
    if (r2 < -T(tolerance::degenerate) * scale * scale) throw ImaginaryRadius("sphere has imaginary radius");
    return {Vec3<T>((*this)[1], (*this)[2], (*this)[3]) / w, std::sqrt(std::max<T>(r2, T(0)))};
  }
};

/// Primal sphere P1 ^ P2 ^ P3 ^ P4 (grade 4).
template <typename T>
class Sphere : public Multivector<T, masks::sphere> {
 public:
  CGA_PRIMITIVE_BASICS(Sphere, masks::sphere)

  Sphere(const Point<T>& p1, const Point<T>& p2, const Point<T>& p3, const Point<T>& p4) : Base(p1 ^ p2 ^ p3 ^ p4) {
    detail::require_non_degenerate(static_cast<const Base&>(*this), "sphere", p1, p2, p3, p4);
  }

  DualSphere<T> dual() const { return DualSphere<T>(cga::dual(static_cast<const Base&>(*this))); }
  std::pair<Vec3<T>, T> decode() const { return dual().decode(); }
};

/// Primal circle P1 ^ P2 ^ P3.
template <typename T>
class Circle : public Multivector<T, masks::circle> {
 public:
  CGA_PRIMITIVE_BASICS(Circle, masks::circle)

  Circle(const Point<T>& p1, const Point<T>& p2, const Point<T>& p3) : Base(p1 ^ p2 ^ p3) {
    detail::require_non_degenerate(static_cast<const Base&>(*this), "circle", p1, p2, p3);
  }

  /// Carrier plane C ^ einf.
  Plane<T> plane() const { return Plane<T>(Plane<T>::Base::project(static_cast<const Base&>(*this) ^ e_inf<T>())); }

  struct Decoded {
    Vec3<T> center;
    T radius;
    Vec3<T> normal;
  };

  Decoded decode() const {
    const Base& c = *this;
    detail::require_non_zero(c, "circle");
    const auto carrier = DualPlane<T>::Base::project(cga::dual(c ^ e_inf<T>()));
    const auto [normal, offset] = DualPlane<T>(carrier).decode();
    (void)offset;
    // The centre is the sandwich C einf C, a (scaled) conformal point.
    const Point<T> center(Point<T>::Base::project(c * e_inf<T>() * c));
    // Squared radius from C^2 / (einf . C)^2 with the sign of a real round.
    const auto einf_c = e_inf<T>() | c;
    const T denom = square(einf_c);
    if (std::abs(denom) < T(tolerance::degenerate)) throw DegeneratePrimitive("circle is flat (a line)");
    const T r2 = -square(c) / denom;
    if (r2 < -T(tolerance::degenerate) * std::max<T>(T(1), std::abs(square(c) / denom))) throw ImaginaryRadius("circle has imaginary radius");
    return {center.euclidean(), std::sqrt(std::max<T>(r2, T(0))), normal};
  }
};

#undef CGA_PRIMITIVE_BASICS

// ------------------------------------------------------------- incidence

/// Intersection of two primal primitives: dual(dual(b) ^ dual(a)).
template <typename T, std::uint32_t A, std::uint32_t B>
auto meet(const Multivector<T, A>& a, const Multivector<T, B>& b) {
  detail::require_non_zero(a, "meet operand");
  detail::require_non_zero(b, "meet operand");
  return dual(dual(b) ^ dual(a));
}

/// Projection (a . b) b^-1.
template <typename T, std::uint32_t A, std::uint32_t B>
auto project(const Multivector<T, A>& a, const Multivector<T, B>& b) {
  detail::require_non_zero(b, "projection target");
  return (a | b) * inverse(b);
}

/// Reflection of a in the dual-form reflector b: b â b^-1, evaluated on a's blades only.
template <typename X, typename T, std::uint32_t B>
  requires std::is_base_of_v<Multivector<T, X::mask>, X>
X reflect(const X& a, const Multivector<T, B>& b) {
  detail::require_non_zero(b, "reflector");
  const auto left = b * a.involute();
  return X(product<ProductKind::geometric, X::mask>(left, inverse(b)));
}

}  // namespace cga
