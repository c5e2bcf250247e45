#pragma once

#include <variant>

#include "cga/robot/manipulator.hpp"

namespace cga::optim {

using robot::MatrixX;
using robot::VectorX;

/// Nonlinear least-squares objective 0.5 |r(q)|^2 over joint positions.
class Cost {
 public:
  virtual ~Cost() = default;

  virtual int dof() const = 0;
  virtual int residual_size() const = 0;
  virtual VectorX residual(const VectorX& q) const = 0;
  virtual MatrixX jacobian(const VectorX& q) const = 0;

  double value(const VectorX& q) const { return 0.5 * residual(q).squaredNorm(); }
  VectorX gradient(const VectorX& q) const { return jacobian(q).transpose() * residual(q); }
  /// Gauss-Newton approximation J^T J.
  MatrixX hessian(const VectorX& q) const {
    const MatrixX j = jacobian(q);
    return j.transpose() * j;
  }
};

/// Pose error log(~M_d M_ee(q)) as six generator coefficients. The relative
/// motor is sign-canonicalized (non-negative scalar part) before the log.
class MotorCost final : public Cost {
 public:
  MotorCost(robot::Manipulator manipulator, const robot::MotorD& target);

  int dof() const override { return manipulator_.dof(); }
  int residual_size() const override { return 6; }
  VectorX residual(const VectorX& q) const override;
  MatrixX jacobian(const VectorX& q) const override;

  const robot::MotorD& target() const { return target_; }

 private:
  robot::Manipulator manipulator_;
  robot::MotorD target_;
  robot::MotorD target_reverse_;
};

using Tool = std::variant<Point<double>, Line<double>>;
using Target = std::variant<Point<double>, PointPair<double>, Line<double>, Circle<double>, Plane<double>, Sphere<double>>;

/// Drives a tool primitive, fixed in the end-effector frame, onto a target
/// primitive given in the world frame.
///
///   point -> point       P' - P_t
///   line  -> line        L' - L_t           (both normalized)
///   otherwise            P' ^ X             (outer product with the primal target)
///
/// The supported pairs are point -> {point, point pair, line, circle, plane,
/// sphere} and line -> {point, line}.
class PrimitiveTargetCost final : public Cost {
 public:
  /// Throws DegeneratePrimitive for a zero or degenerate tool/target and
  /// std::invalid_argument for an unsupported pair.
  PrimitiveTargetCost(robot::Manipulator manipulator, Tool tool, Target target);

  int dof() const override { return manipulator_.dof(); }
  int residual_size() const override;
  VectorX residual(const VectorX& q) const override;
  MatrixX jacobian(const VectorX& q) const override;

  /// Tool primitive moved to the world frame at q.
  Tool tool_at(const VectorX& q) const;

 private:
  robot::Manipulator manipulator_;
  Tool tool_;
  Target target_;
};

}  // namespace cga::optim
