#pragma once

// Reference implementation of the conformal algebra on dense 32-component
// arrays. Products of basis blades are expanded directly from the metric
// (e0.einf = -1, ei.ei = 1 for i = 1..3, all other pairs orthogonal) by the
// recursion A X = a1 (A' X) - (a1 _| A') X with A = a1 ^ A'. Nothing here
// depends on the library's tables.

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "cga/multivector.hpp"

namespace oracle {

using Dense = std::array<double, 32>;

inline double metric(int i, int j) {
  if (i == j) return (i >= 1 && i <= 3) ? 1.0 : 0.0;
  if ((i == 0 && j == 4) || (i == 4 && j == 0)) return -1.0;
  return 0.0;
}

inline int grade_of(unsigned b) { return std::popcount(b); }

inline Dense zero() { return Dense{}; }

inline Dense basis(unsigned b, double c = 1.0) {
  Dense d{};
  d[b] = c;
  return d;
}

inline void axpy(Dense& y, double a, const Dense& x) {
  for (int k = 0; k < 32; ++k) y[k] += a * x[k];
}

// Vector e_i left-contracted onto blade b.
inline Dense contract_vector(int i, unsigned b) {
  Dense out{};
  int pos = 0;
  for (int j = 0; j < 5; ++j) {
    if (!((b >> j) & 1u)) continue;
    const double g = metric(i, j);
    if (g != 0.0) out[b & ~(1u << j)] += ((pos & 1) ? -g : g);
    ++pos;
  }
  return out;
}

// e_i ^ blade b.
inline Dense wedge_vector(int i, unsigned b) {
  Dense out{};
  if ((b >> i) & 1u) return out;
  const int below = std::popcount(b & ((1u << i) - 1u));
  out[b | (1u << i)] = (below & 1) ? -1.0 : 1.0;
  return out;
}

// e_i * X for dense X.
inline Dense vector_times(int i, const Dense& x) {
  Dense out{};
  for (unsigned b = 0; b < 32; ++b) {
    if (x[b] == 0.0) continue;
    axpy(out, x[b], contract_vector(i, b));
    axpy(out, x[b], wedge_vector(i, b));
  }
  return out;
}

inline Dense blade_times(unsigned a, const Dense& x);

inline Dense dense_times(const Dense& a, const Dense& x) {
  Dense out{};
  for (unsigned b = 0; b < 32; ++b)
    if (a[b] != 0.0) axpy(out, a[b], blade_times(b, x));
  return out;
}

inline Dense blade_times(unsigned a, const Dense& x) {
  if (a == 0) return x;
  const int i = std::countr_zero(a);
  const unsigned rest = a & ~(1u << i);
  Dense out = vector_times(i, blade_times(rest, x));
  axpy(out, -1.0, dense_times(contract_vector(i, rest), x));
  return out;
}

struct Tables {
  std::array<std::array<Dense, 32>, 32> gp{};
};

inline const Tables& tables() {
  static const Tables t = [] {
    Tables t;
    for (unsigned a = 0; a < 32; ++a)
      for (unsigned b = 0; b < 32; ++b) t.gp[a][b] = blade_times(a, basis(b));
    return t;
  }();
  return t;
}

inline Dense grade_part(const Dense& x, int k) {
  Dense out{};
  for (unsigned b = 0; b < 32; ++b)
    if (grade_of(b) == k) out[b] = x[b];
  return out;
}

inline Dense blade_geometric(unsigned a, unsigned b) { return tables().gp[a][b]; }

inline Dense blade_outer(unsigned a, unsigned b) {
  return grade_part(blade_geometric(a, b), grade_of(a) + grade_of(b));
}

inline Dense blade_inner(unsigned a, unsigned b) {
  if (a == 0 || b == 0) return Dense{};
  return grade_part(blade_geometric(a, b), std::abs(grade_of(a) - grade_of(b)));
}

template <typename F>
Dense bilinear(const Dense& x, const Dense& y, F blade_op) {
  Dense out{};
  for (unsigned a = 0; a < 32; ++a) {
    if (x[a] == 0.0) continue;
    for (unsigned b = 0; b < 32; ++b)
      if (y[b] != 0.0) axpy(out, x[a] * y[b], blade_op(a, b));
  }
  return out;
}

inline Dense geometric(const Dense& x, const Dense& y) { return bilinear(x, y, blade_geometric); }
inline Dense outer(const Dense& x, const Dense& y) { return bilinear(x, y, blade_outer); }
inline Dense inner(const Dense& x, const Dense& y) { return bilinear(x, y, blade_inner); }

inline Dense reverse(const Dense& x) {
  Dense out = x;
  for (unsigned b = 0; b < 32; ++b) {
    const int k = grade_of(b);
    if ((k * (k - 1) / 2) % 2) out[b] = -out[b];
  }
  return out;
}

inline Dense add(const Dense& x, const Dense& y) {
  Dense out = x;
  axpy(out, 1.0, y);
  return out;
}

inline Dense scale(const Dense& x, double s) {
  Dense out{};
  axpy(out, s, x);
  return out;
}

inline Dense pseudoscalar() { return basis(31); }

inline Dense pseudoscalar_inverse() {
  const double s = geometric(pseudoscalar(), pseudoscalar())[0];
  return scale(pseudoscalar(), 1.0 / s);
}

inline Dense dual(const Dense& x) { return geometric(x, pseudoscalar_inverse()); }

inline Dense sandwich(const Dense& v, const Dense& x) { return geometric(geometric(v, x), reverse(v)); }

inline double max_abs(const Dense& x) {
  double m = 0.0;
  for (double c : x) m = std::max(m, std::abs(c));
  return m;
}

inline double max_abs_diff(const Dense& x, const Dense& y) {
  double m = 0.0;
  for (int k = 0; k < 32; ++k) m = std::max(m, std::abs(x[k] - y[k]));
  return m;
}

template <std::uint32_t M>
Dense to_dense(const cga::Multivector<double, M>& a) {
  Dense d{};
  constexpr auto list = cga::blade_list<M>;
  for (std::size_t k = 0; k < list.size(); ++k) d[list[k]] = a[k];
  return d;
}

// Conformal embedding x + 0.5 |x|^2 einf + e0.
inline Dense point(double x, double y, double z) {
  Dense d{};
  d[1] = 1.0;
  d[2] = x;
  d[4] = y;
  d[8] = z;
  d[16] = 0.5 * (x * x + y * y + z * z);
  return d;
}

}  // namespace oracle
