#include <doctest.h>

#include <sstream>

#include "cga/multivector.hpp"
#include "cga/primitives.hpp"
#include "support/dense_cga.hpp"
#include "support/random.hpp"

using namespace cga;
using Mv = GeneralMultivector<double>;

namespace {

oracle::Dense entry_to_dense(const CayleyEntry& e) {
  oracle::Dense d{};
  for (int t = 0; t < e.count; ++t) d[e.terms[t].blade] += e.terms[t].sign;
  return d;
}

double rel_err(const Mv& a, const Mv& b) {
  double scale = 1.0;
  for (std::size_t k = 0; k < Mv::size; ++k) scale = std::max({scale, std::abs(a[k]), std::abs(b[k])});
  return max_abs_difference(a, b) / scale;
}

}  // namespace

TEST_CASE("cayley tables match the dense metric oracle blade for blade") {
  for (unsigned a = 0; a < 32; ++a) {
    for (unsigned b = 0; b < 32; ++b) {
      CHECK(oracle::max_abs_diff(entry_to_dense(kCayley.geometric[a][b]), oracle::blade_geometric(a, b)) == 0.0);
      CHECK(oracle::max_abs_diff(entry_to_dense(kCayley.outer[a][b]), oracle::blade_outer(a, b)) == 0.0);
      CHECK(oracle::max_abs_diff(entry_to_dense(kCayley.inner[a][b]), oracle::blade_inner(a, b)) == 0.0);
    }
  }
}

TEST_CASE("basis identities") {
  const auto e0 = Multivector<double, 1u << blade::e0>({1.0});
  const auto ei = Multivector<double, 1u << blade::ei>({1.0});
  const auto e1 = Multivector<double, 1u << blade::e1>({1.0});
  CHECK((e0 | ei).scalar_part() == -1.0);
  CHECK(square(e0) == 0.0);
  CHECK(square(ei) == 0.0);
  CHECK(square(e1) == 1.0);
  CHECK(square(pseudoscalar<double>()) == -1.0);
  CHECK((pseudoscalar<double>() * pseudoscalar_inverse<double>()).scalar_part() == 1.0);
}

TEST_CASE("dense products agree with the oracle") {
  testing::Random rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const Mv a = rng.multivector<kFullMask>();
    const Mv b = rng.multivector<kFullMask>();
    const auto da = oracle::to_dense(a), db = oracle::to_dense(b);
    CHECK(oracle::max_abs_diff(oracle::to_dense(Mv(a * b)), oracle::geometric(da, db)) < 1e-12);
    CHECK(oracle::max_abs_diff(oracle::to_dense(Mv(a ^ b)), oracle::outer(da, db)) < 1e-12);
    CHECK(oracle::max_abs_diff(oracle::to_dense(Mv(a | b)), oracle::inner(da, db)) < 1e-12);
    CHECK(oracle::max_abs_diff(oracle::to_dense(a.reverse()), oracle::reverse(da)) == 0.0);
    CHECK(oracle::max_abs_diff(oracle::to_dense(Mv(dual(a))), oracle::dual(da)) < 1e-12);
  }
}

TEST_CASE("sparse products keep only reachable blades") {
  const Point<double> p(1.0, 2.0, 3.0);
  const Point<double> q(-1.0, 0.5, 2.0);
  const auto pp = p ^ q;
  CHECK(decltype(pp)::mask == grade_mask(2));
  const auto s = p | q;
  CHECK(decltype(s)::mask == 1u);
  // Oracle check for a mixed-mask product.
  const auto full = Mv(p) * Mv(q);
  CHECK(max_abs_difference(p * q, full) < 1e-14);
}

TEST_CASE("algebra properties on random multivectors") {
  testing::Random rng(2);
  double bilinear = 0, assoc = 0, distrib = 0, antiauto = 0, dualsign = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Mv a = rng.multivector<kFullMask>();
    const Mv b = rng.multivector<kFullMask>();
    const Mv c = rng.multivector<kFullMask>();
    const double s = rng.uniform(-2, 2);
    bilinear = std::max(bilinear, rel_err(Mv((a * s + b) * c), Mv((a * c) * s + b * c)));
    assoc = std::max(assoc, rel_err(Mv((a * b) * c), Mv(a * (b * c))));
    assoc = std::max(assoc, rel_err(Mv((a ^ b) ^ c), Mv(a ^ (b ^ c))));
    distrib = std::max(distrib, rel_err(Mv(a * (b + c)), Mv(a * b + a * c)));
    antiauto = std::max(antiauto, rel_err(Mv(a * b).reverse(), Mv(b.reverse() * a.reverse())));
    dualsign = std::max(dualsign, rel_err(Mv(dual(Mv(dual(a)))), Mv(-a)));
    dualsign = std::max(dualsign, rel_err(Mv(undual(Mv(dual(a)))), a));
  }
  CHECK(bilinear < 1e-12);
  CHECK(assoc < 1e-12);
  CHECK(distrib < 1e-12);
  CHECK(antiauto < 1e-12);
  CHECK(dualsign < 1e-12);
}

TEST_CASE("grade selection and involutions") {
  testing::Random rng(3);
  const Mv a = rng.multivector<kFullMask>();
  Mv sum;
  for (int k = 0; k <= 5; ++k) sum += a.grade_project(k);
  CHECK(max_abs_difference(sum, a) == 0.0);
  CHECK_THROWS_AS(a.grade_project(6), std::invalid_argument);
  CHECK_THROWS_AS(a.grade_project(-1), std::invalid_argument);
  const auto g2 = a.grade<2>();
  CHECK(decltype(g2)::size == 10);
  CHECK(max_abs_difference(a.conjugate(), a.reverse().involute()) == 0.0);
}

TEST_CASE("inverse of versors and blades") {
  const Point<double> p(1.0, 2.0, 0.5);
  const auto s = p ^ Point<double>(0.0, 1.0, 0.0);
  const auto si = inverse(s);
  CHECK(max_abs_difference(s * si, ScalarMv<double>::scalar(1.0)) < 1e-12);
  // A null vector has no inverse.
  CHECK_THROWS_AS(inverse(static_cast<const Point<double>::Base&>(p)), NotInvertible);
  CHECK_THROWS_AS(inverse(Mv()), NotInvertible);
}

TEST_CASE("blade names") {
  CHECK(blade_name(blade::e12i) == "e12i");
  CHECK(blade_name(0) == "1");
  CHECK(parse_blade_name("e0i") == blade::e0i);
  CHECK(parse_blade_name("e123i") == blade::e123i);
  CHECK(parse_blade_name("e21") == -1);
  CHECK(parse_blade_name("e4") == -1);
  std::ostringstream os;
  os << Point<double>(1.0, 0.0, 0.0);
  CHECK(os.str() == "1*e0 + 1*e1 + 0.5*ei");
}
