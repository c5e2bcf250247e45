#include <doctest.h>

#include "cga/io/model.hpp"
#include "cga/optim/solver.hpp"
#include "support/models.hpp"

using namespace cga;
using namespace cga::optim;
using robot::Manipulator;
using robot::MotorD;
using V3 = Eigen::Vector3d;
using P = Point<double>;

namespace {

Manipulator load(const io::ModelDocument& d) { return io::load_manipulator(d); }

const io::ModelDocument franka = io::read_model(testing::model_file("franka"));

// Central-difference gradient of the cost value.
VectorX fd_gradient(const Cost& c, const VectorX& q, double h = 1e-6) {
  VectorX g(q.size());
  for (int i = 0; i < q.size(); ++i) {
    const VectorX e = VectorX::Unit(q.size(), i) * h;
    g[i] = (c.value(q + e) - c.value(q - e)) / (2 * h);
  }
  return g;
}

MatrixX fd_jacobian(const Cost& c, const VectorX& q, double h = 1e-6) {
  MatrixX j(c.residual_size(), q.size());
  for (int i = 0; i < q.size(); ++i) {
    const VectorX e = VectorX::Unit(q.size(), i) * h;
    j.col(i) = (c.residual(q + e) - c.residual(q - e)) / (2 * h);
  }
  return j;
}

V3 tip_position(const Manipulator& m, const VectorX& q) { return apply(m.forward_kinematics(q), P::origin()).euclidean(); }

double wrap(double a) { return std::remainder(a, 2 * M_PI); }

}  // namespace

TEST_CASE("motor cost vanishes at the target pose") {
  const auto arm = load(franka);
  testing::Random rng(40);
  const VectorX q = rng.vector(7, -2, 2);
  const MotorCost cost(arm, arm.forward_kinematics(q));
  CHECK(cost.residual(q).norm() < 1e-12);
  CHECK(cost.value(q) < 1e-12);
  CHECK(cost.residual_size() == 6);
  CHECK(cost.dof() == 7);
  // The sign of the target motor does not matter.
  const MotorCost flipped(arm, MotorD(arm.forward_kinematics(q) * -1.0));
  CHECK(flipped.value(q) < 1e-12);
  CHECK_THROWS_AS(cost.residual(VectorX::Zero(3)), DimensionMismatch);
  CHECK_THROWS_AS(MotorCost(arm, MotorD(MotorD::Base({2.0, 0, 0, 0, 0, 0, 0, 0}))), NotUnitVersor);
}

TEST_CASE("motor cost residual encodes the relative screw") {
  // One revolute joint about z: the residual of target identity at q is the
  // generator of a rotation by q.
  auto d = testing::planar_2r();
  const auto arm = io::load_manipulator(d, "j1");
  const MotorCost cost(arm, MotorD());
  const VectorX q = VectorX::Constant(1, 0.8);
  const VectorX r = cost.residual(q);
  const auto expected = MotorGenerator<double>::from_twist(V3(0, 0, 0.8), V3::Zero());
  for (int k = 0; k < 6; ++k) CHECK(std::abs(r[k] - expected[k]) < 1e-12);
  CHECK(std::abs(cost.value(q) - 0.5 * 0.8 * 0.8) < 1e-12);
}

TEST_CASE("motor cost is invariant under a common change of world frame") {
  testing::Random rng(41);
  const auto arm = load(franka);
  for (int k = 0; k < 20; ++k) {
    const MotorD target = arm.forward_kinematics(rng.vector(7, -2, 2));
    const MotorD x = Motor<double>::exp(MotorGenerator<double>::from_twist(rng.vec3(-2, 2), rng.vec3(-1, 1)));
    auto system = io::load_system(franka);
    system.set_world_to_base(MotorD(MotorD::Base::project(x * system.world_to_base())));
    const Manipulator moved(std::move(system), "panda_joint8");
    const MotorCost a(arm, target);
    const MotorCost b(moved, MotorD(MotorD::Base::project(x * target)));
    const VectorX q = rng.vector(7, -2, 2);
    CHECK(std::abs(a.value(q) - b.value(q)) < 1e-10);
  }
}

TEST_CASE("motor cost gradient matches finite differences") {
  testing::Random rng(42);
  const auto arm = load(franka);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const MotorCost cost(arm, arm.forward_kinematics(rng.vector(7, -2, 2)));
    const VectorX q = rng.vector(7, -2, 2);
    worst = std::max(worst, (cost.gradient(q) - fd_gradient(cost, q)).cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-5);
}

TEST_CASE("primitive costs") {
  testing::Random rng(43);
  const auto doc = testing::random_chain(rng, 6);
  const auto arm = load(doc);
  const P tool_point(0.05, -0.02, 0.1);
  const Line<double> tool_line{P(0, 0, 0), P(0, 0, 1)};

  SUBCASE("point to point encodes squared distance") {
    const VectorX q = rng.vector(6, -2, 2);
    const P target(0.3, 0.2, -0.1);
    const PrimitiveTargetCost cost(arm, tool_point, target);
    const P moved = std::get<P>(cost.tool_at(q));
    const double d2 = (moved.euclidean() - target.euclidean()).squaredNorm();
    CHECK(std::abs(-2.0 * (moved | target).scalar_part() - d2) < 1e-10);
    CHECK(cost.value(q) > 0.0);
    const PrimitiveTargetCost at(arm, tool_point, moved);
    CHECK(at.value(q) < 1e-12);
  }

  SUBCASE("incidence pairs vanish when the moved tool lies on the target") {
    for (int k = 0; k < 20; ++k) {
      const VectorX q = rng.vector(6, -2, 2);
      const MotorD m = arm.forward_kinematics(q);
      const P x = apply(m, tool_point);
      const V3 c = x.euclidean();
      const V3 u = rng.unit3(), w = u.unitOrthogonal(), v = u.cross(w);
      const double r = rng.uniform(0.2, 1.0);
      const std::vector<Target> targets = {
          PointPair<double>{x, P(c + u)},
          Line<double>{x, P(c + u)},
          Circle<double>(x, P(c + r * (u + w)), P(c + r * (u - w) + 0.5 * r * v)),
          Plane<double>(x, P(c + u), P(c + w)),
          Sphere<double>(x, P(c + r * (u + w)), P(c + 2 * r * u), P(c + r * (u + v))),
      };
      for (const auto& t : targets) {
        const PrimitiveTargetCost cost(arm, tool_point, t);
        CHECK(cost.value(q) < 1e-12);
        // Moving away from the target makes the cost positive.
        CHECK(cost.value(q + VectorX::Constant(6, 0.3)) > 1e-8);
      }
      const Line<double> moved_line = apply(m, tool_line);
      const auto [foot, dir] = moved_line.decode();
      const PrimitiveTargetCost line_line(arm, tool_line, moved_line);
      CHECK(line_line.value(q) < 1e-12);
      const PrimitiveTargetCost line_point(arm, tool_line, P(foot + 0.7 * dir));
      CHECK(line_point.value(q) < 1e-12);
    }
  }

  SUBCASE("gradients of every pair match finite differences") {
    const P a(0.2, -0.3, 0.4), b(-0.5, 0.1, 0.3), c(0.1, 0.6, -0.2), e(0.4, 0.4, 0.4);
    const std::vector<std::pair<Tool, Target>> pairs = {
        {tool_point, a},
        {tool_point, PointPair<double>{a, b}},
        {tool_point, Line<double>{a, b}},
        {tool_point, Circle<double>(a, b, c)},
        {tool_point, Plane<double>(a, b, c)},
        {tool_point, Sphere<double>(a, b, c, e)},
        {tool_line, a},
        {tool_line, Line<double>{a, b}},
    };
    for (const auto& [tool, target] : pairs) {
      const PrimitiveTargetCost cost(arm, tool, target);
      double worst = 0.0, worst_j = 0.0;
      for (int k = 0; k < 100; ++k) {
        const VectorX q = rng.vector(6, -2.5, 2.5);
        worst = std::max(worst, (cost.gradient(q) - fd_gradient(cost, q)).cwiseAbs().maxCoeff());
        worst_j = std::max(worst_j, (cost.jacobian(q) - fd_jacobian(cost, q)).cwiseAbs().maxCoeff());
      }
      CHECK(worst < 1e-5);
      CHECK(worst_j < 1e-6);
    }
  }

  SUBCASE("invalid pairs and degenerate primitives are rejected") {
    const P a(0, 0, 0), b(1, 0, 0), c(0, 1, 0);
    CHECK_THROWS_AS(PrimitiveTargetCost(arm, tool_line, Plane<double>(a, b, c)), std::invalid_argument);
    CHECK_THROWS_AS(PrimitiveTargetCost(arm, tool_line, PointPair<double>{a, b}), std::invalid_argument);
    CHECK_THROWS_AS(PrimitiveTargetCost(arm, P(), a), DegeneratePrimitive);
    CHECK_THROWS_AS(PrimitiveTargetCost(arm, tool_point, Line<double>()), DegeneratePrimitive);
    P at_infinity;
    at_infinity.set<blade::ei>(1.0);
    CHECK_THROWS_AS(PrimitiveTargetCost(arm, at_infinity, a), DegeneratePrimitive);
  }
}

TEST_CASE("point invariance under a common rigid motion") {
  testing::Random rng(44);
  const auto doc = testing::random_chain(rng, 5);
  const auto arm = load(doc);
  for (int k = 0; k < 20; ++k) {
    const MotorD x = Motor<double>::exp(MotorGenerator<double>::from_twist(rng.vec3(-2, 2), rng.vec3(-1, 1)));
    auto system = io::load_system(doc);
    system.set_world_to_base(MotorD(MotorD::Base::project(x * system.world_to_base())));
    const Manipulator moved(std::move(system), "tip");
    const P target(rng.vec3(-1, 1));
    const PrimitiveTargetCost a(arm, P(0.1, 0, 0), target);
    const PrimitiveTargetCost b(moved, P(0.1, 0, 0), apply(x, target));
    const VectorX q = rng.vector(5, -2, 2);
    // The residual is a coefficient difference of normalized points, so the
    // comparable invariant is the encoded squared distance.
    const P ta = std::get<P>(a.tool_at(q)), tb = std::get<P>(b.tool_at(q));
    const double da = -2.0 * (ta | target).scalar_part();
    const double db = -2.0 * (tb | apply(x, target)).scalar_part();
    CHECK(std::abs(da - db) < 1e-10);
  }
}

TEST_CASE("gauss-newton on a planar arm") {
  const auto arm = load(testing::planar_2r());
  const PrimitiveTargetCost cost(arm, P::origin(), P(1, 1, 0));
  // Stop once the residual is below the position accuracy asked for.
  SolverConfig config;
  config.cost_tolerance = 0.5 * 1e-9 * 1e-9;
  const auto report = gauss_newton_solve(cost, Eigen::Vector2d(0.3, 0.5), config);
  CHECK(report.converged);
  CHECK((tip_position(arm, report.q) - V3(1, 1, 0)).norm() < 1e-8);
  // Closed-form elbow solutions for unit links: q2 = +-pi/2.
  const double q2 = report.q[1] > 0 ? M_PI / 2 : -M_PI / 2;
  const double q1 = std::atan2(1.0, 1.0) - std::atan2(std::sin(q2), 1.0 + std::cos(q2));
  CHECK(std::abs(wrap(report.q[0] - q1)) < 1e-6);
  CHECK(std::abs(wrap(report.q[1] - q2)) < 1e-6);
  for (std::size_t k = 1; k < report.residual_history.size(); ++k)
    CHECK(report.residual_history[k] <= report.residual_history[k - 1]);
  CHECK(report.iterations <= SolverConfig{}.max_iterations);
}

TEST_CASE("gauss-newton from the optimum stops immediately") {
  const auto arm = load(franka);
  testing::Random rng(45);
  const VectorX q = rng.vector(7, -2, 2);
  const MotorCost cost(arm, arm.forward_kinematics(q));
  const auto report = gauss_newton_solve(cost, q);
  CHECK(report.converged);
  CHECK(report.iterations <= 1);
  CHECK(report.final_cost < 1e-12);
}

TEST_CASE("point onto the unit sphere") {
  const auto arm = load(testing::planar_2r());
  const Sphere<double> unit(P(1, 0, 0), P(0, 1, 0), P(-1, 0, 0), P(0, 0, 1));
  const PrimitiveTargetCost cost(arm, P::origin(), unit);
  testing::Random rng(46);
  for (int k = 0; k < 10; ++k) {
    const auto report = gauss_newton_solve(cost, rng.vector(2, -2, 2));
    REQUIRE(report.converged);
    CHECK(std::abs(tip_position(arm, report.q).norm() - 1.0) < 1e-6);
  }
}

TEST_CASE("franka reaches reachable motor targets") {
  const auto arm = load(franka);
  testing::Random rng(47);
  SolverConfig config;
  config.cost_tolerance = 0.5 * 1e-6 * 1e-6;
  int reached = 0;
  bool monotone = true;
  for (int k = 0; k < 100; ++k) {
    const VectorX q_true = rng.vector(7, -2, 2);
    const MotorCost cost(arm, arm.forward_kinematics(q_true));
    const VectorX q0 = q_true + rng.vector(7, -0.5, 0.5);
    const auto report = gauss_newton_solve(cost, q0, config);
    if (cost.residual(report.q).norm() < 1e-6) ++reached;
    for (std::size_t i = 1; i < report.residual_history.size(); ++i)
      monotone = monotone && report.residual_history[i] <= report.residual_history[i - 1];
  }
  MESSAGE("reached " << reached << " of 100");
  CHECK(reached >= 95);
  CHECK(monotone);
}

TEST_CASE("solver errors") {
  const auto arm = load(testing::planar_2r());
  const PrimitiveTargetCost cost(arm, P::origin(), P(1, 1, 0));
  CHECK_THROWS_AS(gauss_newton_solve(cost, VectorX::Zero(3)), DimensionMismatch);
  SolverConfig bad;
  bad.shrink = 1.5;
  CHECK_THROWS_AS(gauss_newton_solve(cost, VectorX::Zero(2), bad), std::invalid_argument);

  // A tool point on the only joint axis has a zero Jacobian.
  const auto one = io::load_manipulator(testing::planar_2r(), "j1");
  const PrimitiveTargetCost stuck(one, P::origin(), P(1, 1, 0));
  SolverConfig undamped;
  undamped.damping = 0.0;
  CHECK_THROWS_AS(gauss_newton_solve(stuck, VectorX::Zero(1), undamped), LinearSolveFailure);
  // With damping the step is zero and the solver reports convergence on the
  // step tolerance without reaching the target.
  const auto report = gauss_newton_solve(stuck, VectorX::Zero(1));
  CHECK(report.final_cost > 0.1);
}
