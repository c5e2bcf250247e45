#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "cga/versors.hpp"
#include "support/dense_cga.hpp"
#include "support/random.hpp"

using namespace cga;
using V3 = Eigen::Vector3d;
using P = Point<double>;

namespace {

using Mat32 = Eigen::Matrix<double, 32, 32>;

Mat32 left_matrix(const oracle::Dense& x) {
  Mat32 m;
  for (unsigned b = 0; b < 32; ++b) {
    const auto col = oracle::geometric(x, oracle::basis(b));
    for (int r = 0; r < 32; ++r) m(r, b) = col[r];
  }
  return m;
}

// exp(x) via the matrix exponential of left multiplication.
oracle::Dense dense_exp(const oracle::Dense& x) {
  const Mat32 e = left_matrix(x).exp();
  oracle::Dense out{};
  for (int r = 0; r < 32; ++r) out[r] = e(r, 0);
  return out;
}

MotorGenerator<double> random_screw(testing::Random& rng, double max_angle) {
  const V3 axis = rng.unit3();
  const double angle = rng.uniform(0.0, max_angle);
  return MotorGenerator<double>::from_twist(axis * angle, rng.vec3(-2, 2));
}

Motor<double> random_motor(testing::Random& rng) { return Motor<double>::exp(random_screw(rng, 3.0)); }

template <typename X>
double outside_residual(const oracle::Dense& d) {
  double m = 0.0;
  for (unsigned b = 0; b < 32; ++b)
    if (!((X::mask >> b) & 1u)) m = std::max(m, std::abs(d[b]));
  return m;
}

template <typename X>
void check_sparsity(testing::Random& rng, double& worst) {
  for (int k = 0; k < 50; ++k) {
    const auto m = random_motor(rng);
    const auto x = rng.multivector<X::mask>();
    const auto dense = oracle::sandwich(oracle::to_dense(m), oracle::to_dense(x));
    worst = std::max(worst, outside_residual<X>(dense));
    // Inside the subspace the truncated sandwich equals the full one.
    const auto lib = sandwich(m, X(x));
    for (unsigned b = 0; b < 32; ++b)
      if ((X::mask >> b) & 1u) CHECK(std::abs(lib.coefficient(b) - dense[b]) < 1e-10);
  }
}

}  // namespace

TEST_CASE("rotor about z maps e1 to e2") {
  const auto r = Rotor<double>::from_axis_angle(V3::UnitZ(), M_PI / 2);
  const P p = apply(r, P(1, 0, 0));
  CHECK((p.euclidean() - V3(0, 1, 0)).norm() < 1e-15);
  CHECK(std::abs(r.angle() - M_PI / 2) < 1e-15);
}

TEST_CASE("rotor exp matches rotation matrices") {
  testing::Random rng(20);
  for (int k = 0; k < 100; ++k) {
    const V3 axis = rng.unit3();
    const double angle = rng.uniform(-3, 3);
    const V3 x = rng.vec3(-2, 2);
    const auto r = Rotor<double>::from_axis_angle(axis, angle);
    const V3 expected = Eigen::AngleAxisd(angle, axis) * x;
    CHECK((apply(r, P(x)).euclidean() - expected).norm() < 1e-12);
  }
}

TEST_CASE("rotor exp/log roundtrip") {
  testing::Random rng(21);
  for (int k = 0; k < 500; ++k) {
    const V3 axis = rng.unit3();
    const auto b = rotation_bivector<double>(axis * rng.uniform(0.0, M_PI - 1e-3));
    CHECK(max_abs_difference(Rotor<double>::exp(b).log(), b) < 1e-9);
  }
  CHECK(max_abs_difference(Rotor<double>().log(), RotorGenerator<double>()) == 0.0);
  const Rotor<double> minus_one(Rotor<double>::Base({-1.0, 0.0, 0.0, 0.0}));
  CHECK_THROWS_AS(minus_one.log(), LogBranchSingularity);
}

TEST_CASE("translator") {
  const Translator<double> t(V3(1, 2, 3));
  CHECK((apply(t, P(0, 0, 0)).euclidean() - V3(1, 2, 3)).norm() < 1e-15);
  CHECK((t.log() - V3(1, 2, 3)).norm() == 0.0);
  const auto line = apply(t, Line<double>(P(0, 0, 0), P(1, 0, 0)));
  const auto [x, u] = line.decode();
  CHECK((x - V3(0, 2, 3)).norm() < 1e-12);
  CHECK((u - V3::UnitX()).norm() < 1e-12);
}

TEST_CASE("dilator scales about the origin") {
  const auto d = Dilator<double>::from_scale(2.5);
  CHECK(std::abs(d.scale() - 2.5) < 1e-14);
  const DualSphere<double> s(P(1, 0, 0), 1.0);
  const auto [c, r] = DualSphere<double>(sandwich(d, s)).decode();
  CHECK((c - V3(2.5, 0, 0)).norm() < 1e-12);
  CHECK(std::abs(r - 2.5) < 1e-12);
  CHECK_THROWS_AS(Dilator<double>::from_scale(0.0), std::invalid_argument);
}

TEST_CASE("motor exp matches the series oracle") {
  testing::Random rng(22);
  for (int k = 0; k < 30; ++k) {
    const auto g = random_screw(rng, 3.0);
    const auto expected = dense_exp(oracle::scale(oracle::to_dense(g), -0.5));
    CHECK(oracle::max_abs_diff(oracle::to_dense(Motor<double>::exp(g)), expected) < 1e-12);
  }
  // Small angles use the series branch.
  for (double angle : {0.0, 1e-9, 1e-7, 5e-7}) {
    const auto g = MotorGenerator<double>::from_twist(V3(0.3, -0.5, 0.8).normalized() * angle, V3(1, 2, -1));
    const auto expected = dense_exp(oracle::scale(oracle::to_dense(g), -0.5));
    CHECK(oracle::max_abs_diff(oracle::to_dense(Motor<double>::exp(g)), expected) < 1e-14);
  }
}

TEST_CASE("motor from twist acts as a screw") {
  // Rotation by pi/2 about z combined with translation 1 along z.
  const auto m = Motor<double>::exp(MotorGenerator<double>::from_twist(V3(0, 0, M_PI / 2), V3(0, 0, 1)));
  CHECK((apply(m, P(1, 0, 0)).euclidean() - V3(0, 1, 1)).norm() < 1e-12);
  const Motor<double> tr(Translator<double>(V3(1, 0, 0)), Rotor<double>::from_axis_angle(V3::UnitZ(), M_PI / 2));
  CHECK((apply(tr, P(1, 0, 0)).euclidean() - V3(1, 1, 0)).norm() < 1e-12);
  CHECK((tr.translation() - V3(1, 0, 0)).norm() < 1e-12);
  CHECK(std::abs(tr.rotor().angle() - M_PI / 2) < 1e-12);
}

TEST_CASE("motor exp/log roundtrip") {
  testing::Random rng(23);
  for (int k = 0; k < 500; ++k) {
    const auto g = random_screw(rng, M_PI - 1e-3);
    const auto m = Motor<double>::exp(g);
    CHECK(max_abs_difference(m.log(), g) < 1e-9);
    CHECK(max_abs_difference(Motor<double>::exp(m.log()), m) < 1e-9);
  }
  // Pure translations.
  const auto g = MotorGenerator<double>::from_twist(V3::Zero(), V3(0.5, -1, 2));
  CHECK(max_abs_difference(Motor<double>::exp(g).log(), g) < 1e-15);
}

TEST_CASE("composed motors stay unit") {
  testing::Random rng(24);
  Motor<double> m;
  for (int k = 0; k < 100; ++k) m = compose(m, random_motor(rng));
  const auto p = m * m.reverse();
  CHECK(max_abs_difference(p, ScalarMv<double>::scalar(1.0)) < 1e-10);
  static_assert(std::is_same_v<decltype(compose(Rotor<double>(), Rotor<double>())), Rotor<double>>);
  static_assert(std::is_same_v<decltype(compose(Translator<double>(), Rotor<double>())), Motor<double>>);
  static_assert(std::is_same_v<decltype(compose(Translator<double>(), Translator<double>())), Translator<double>>);
}

TEST_CASE("apply rejects non-unit versors") {
  const Rotor<double> r(Rotor<double>::Base({2.0, 0.0, 0.0, 0.0}));
  CHECK_THROWS_AS(apply(r, P(1, 0, 0)), NotUnitVersor);
}

TEST_CASE("motor sandwiches stay inside primitive subspaces") {
  testing::Random rng(25);
  double worst = 0.0;
  check_sparsity<P>(rng, worst);
  check_sparsity<DualSphere<double>>(rng, worst);
  check_sparsity<DualPlane<double>>(rng, worst);
  check_sparsity<PointPair<double>>(rng, worst);
  check_sparsity<TangentVector<double>>(rng, worst);
  check_sparsity<Line<double>>(rng, worst);
  check_sparsity<Circle<double>>(rng, worst);
  check_sparsity<Plane<double>>(rng, worst);
  check_sparsity<Sphere<double>>(rng, worst);
  check_sparsity<DirectionVector<double>>(rng, worst);
  check_sparsity<MotorGenerator<double>>(rng, worst);
  CHECK(worst < 1e-10);
}
