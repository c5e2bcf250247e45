#include "cga/optim/costs.hpp"

#include <array>

namespace cga::optim {

namespace {

using robot::MotorD;
using MotorBase = MotorD::Base;

template <std::uint32_t M>
Eigen::Map<const Eigen::Matrix<double, int(Multivector<double, M>::size), 1>> coeffs(const Multivector<double, M>& a) {
  return Eigen::Map<const Eigen::Matrix<double, int(Multivector<double, M>::size), 1>>(a.data());
}

Eigen::Matrix<double, 6, 1> log_coefficients(const MotorBase& m) {
  const MotorD canonical(m[0] < 0.0 ? MotorBase(-m) : m);
  return coeffs(canonical.log());
}

// Differential of the canonical log at m by forward differences over the
// eight motor coefficients.
Eigen::Matrix<double, 6, 8> log_differential(const MotorBase& m) {
  constexpr double h = 1e-7;
  const MotorBase base = m[0] < 0.0 ? MotorBase(-m) : m;
  const Eigen::Matrix<double, 6, 1> f0 = log_coefficients(base);
  Eigen::Matrix<double, 6, 8> d;
  for (int k = 0; k < 8; ++k) {
    MotorBase p = base;
    p[k] += h;
    d.col(k) = (log_coefficients(p) - f0) / h;
  }
  return d;
}

}  // namespace

MotorCost::MotorCost(robot::Manipulator manipulator, const robot::MotorD& target)
    : manipulator_(std::move(manipulator)), target_(target), target_reverse_(target.reverse()) {
  detail::require_unit(target_);
}

VectorX MotorCost::residual(const VectorX& q) const {
  const MotorBase rel = MotorBase::project(target_reverse_ * manipulator_.forward_kinematics(q));
  return log_coefficients(rel);
}

MatrixX MotorCost::jacobian(const VectorX& q) const {
  const MotorBase rel = MotorBase::project(target_reverse_ * manipulator_.forward_kinematics(q));
  Eigen::Matrix<double, 6, 8> dlog = log_differential(rel);
  if (rel[0] < 0.0) dlog = -dlog;
  const auto columns = manipulator_.analytic_jacobian(q);
  Eigen::Matrix<double, 8, Eigen::Dynamic> dm(8, columns.size());
  for (std::size_t i = 0; i < columns.size(); ++i)
    dm.col(i) = coeffs(MotorBase::project(target_reverse_ * columns[i]));
  return dlog * dm;
}

namespace {

template <typename X>
X move(const MotorBase& m, const X& x) {
  return sandwich(m, x);
}

// d/dq (M X ~M) = dM X ~M + M X ~dM
template <typename X>
X move_derivative(const MotorBase& m, const MotorBase& dm, const X& x) {
  const auto xb = static_cast<const Multivector<double, X::mask>&>(x);
  const auto a = product<ProductKind::geometric, X::mask>(dm * xb, m.reverse());
  const auto b = product<ProductKind::geometric, X::mask>(m * xb, dm.reverse());
  return X(a + b);
}

template <typename ToolT, typename TargetT>
constexpr bool same_kind = std::is_same_v<ToolT, TargetT>;

// Residual of a moved tool against the target, linear in the tool.
template <typename ToolT, typename TargetT>
VectorX pair_residual(const ToolT& tool, const TargetT& target) {
  if constexpr (same_kind<ToolT, TargetT>) {
    return VectorX(coeffs(tool - target));
  } else if constexpr (std::is_same_v<ToolT, Line<double>>) {
    return VectorX(coeffs(target ^ tool));
  } else {
    return VectorX(coeffs(tool ^ target));
  }
}

template <typename ToolT, typename TargetT>
constexpr bool supported_pair =
    std::is_same_v<ToolT, Point<double>> || std::is_same_v<TargetT, Point<double>> || std::is_same_v<TargetT, Line<double>>;

template <typename P>
P normalize_primitive(const P& p, const char* what) {
  detail::require_non_zero(p, what);
  if constexpr (std::is_same_v<P, Point<double>>) {
    if (std::abs(p.template get<blade::e0>()) < tolerance::degenerate)
      throw DegeneratePrimitive(std::string(what) + " point has no finite position");
    return p.normalized();
  } else if constexpr (std::is_same_v<P, Line<double>>) {
    return p.normalized();
  } else {
    return P(p / coefficient_norm(p));
  }
}

}  // namespace

PrimitiveTargetCost::PrimitiveTargetCost(robot::Manipulator manipulator, Tool tool, Target target)
    : manipulator_(std::move(manipulator)) {
  tool_ = std::visit([](const auto& t) -> Tool { return normalize_primitive(t, "tool"); }, tool);
  target_ = std::visit([](const auto& t) -> Target { return normalize_primitive(t, "target"); }, target);
  std::visit(
      [](const auto& a, const auto& b) {
        using A = std::decay_t<decltype(a)>;
        using B = std::decay_t<decltype(b)>;
        if constexpr (!supported_pair<A, B>) throw std::invalid_argument("unsupported tool/target primitive pair");
      },
      tool_, target_);
}

int PrimitiveTargetCost::residual_size() const {
  return std::visit(
      [](const auto& a, const auto& b) -> int {
        using A = std::decay_t<decltype(a)>;
        using B = std::decay_t<decltype(b)>;
        if constexpr (supported_pair<A, B>)
          return int(pair_residual(a, b).size());
        else
          return 0;
      },
      tool_, target_);
}

Tool PrimitiveTargetCost::tool_at(const VectorX& q) const {
  const MotorBase m = manipulator_.forward_kinematics(q);
  return std::visit([&](const auto& t) -> Tool { return move(m, t); }, tool_);
}

VectorX PrimitiveTargetCost::residual(const VectorX& q) const {
  const MotorBase m = manipulator_.forward_kinematics(q);
  return std::visit(
      [&](const auto& a, const auto& b) -> VectorX {
        using A = std::decay_t<decltype(a)>;
        using B = std::decay_t<decltype(b)>;
        if constexpr (supported_pair<A, B>)
          return pair_residual(move(m, a), b);
        else
          return VectorX();
      },
      tool_, target_);
}

MatrixX PrimitiveTargetCost::jacobian(const VectorX& q) const {
  const MotorBase m = manipulator_.forward_kinematics(q);
  const auto columns = manipulator_.analytic_jacobian(q);
  return std::visit(
      [&](const auto& a, const auto& b) -> MatrixX {
        using A = std::decay_t<decltype(a)>;
        using B = std::decay_t<decltype(b)>;
        if constexpr (supported_pair<A, B>) {
          MatrixX j(pair_residual(a, b).size(), columns.size());
          for (std::size_t i = 0; i < columns.size(); ++i) {
            const A d = move_derivative(m, columns[i], a);
            if constexpr (same_kind<A, B>)
              j.col(i) = coeffs(d);
            else
              j.col(i) = pair_residual(d, b);
          }
          return j;
        } else {
          return MatrixX();
        }
      },
      tool_, target_);
}

}  // namespace cga::optim
