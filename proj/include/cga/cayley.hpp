#pragma once

#include <array>
#include <bit>
#include <cstdint>

#include "cga/blades.hpp"

namespace cga {

enum class ProductKind { geometric, outer, inner };

struct CayleyTerm {
  BladeIndex blade = 0;
  std::int8_t sign = 0;
};

/// Result terms of one blade-by-blade product.
struct CayleyEntry {
  static constexpr int kMaxTerms = 4;
  std::array<CayleyTerm, kMaxTerms> terms{};
  int count = 0;
};

using CayleyTable = std::array<std::array<CayleyEntry, kNumBlades>, kNumBlades>;

struct CayleyTables {
  CayleyTable geometric;
  CayleyTable outer;
  CayleyTable inner;

  constexpr const CayleyTable& operator[](ProductKind k) const {
    switch (k) {
      case ProductKind::geometric: return geometric;
      case ProductKind::outer: return outer;
      default: return inner;
    }
  }
};

namespace detail {

using Dense = std::array<double, kNumBlades>;

// Sign of reordering the factors of blade a followed by blade b into
// ascending canonical order.
constexpr int reorder_sign(unsigned a, unsigned b) {
  a >>= 1;
  int swaps = 0;
  while (a != 0) {
    swaps += std::popcount(a & b);
    a >>= 1;
  }
  return (swaps & 1) ? -1 : 1;
}

// Orthogonal basis (e1, e2, e3, e+, e-) on bits 0..4 with metric (+,+,+,+,-).
constexpr int ortho_metric_sign(unsigned common) { return (common & 16u) ? -1 : 1; }

constexpr Dense ortho_geometric(const Dense& x, const Dense& y) {
  Dense r{};
  for (unsigned a = 0; a < kNumBlades; ++a) {
    if (x[a] == 0.0) continue;
    for (unsigned b = 0; b < kNumBlades; ++b) {
      if (y[b] == 0.0) continue;
      r[a ^ b] += reorder_sign(a, b) * ortho_metric_sign(a & b) * x[a] * y[b];
    }
  }
  return r;
}

// Outer product is metric-free, so the same bitmask rule holds in any basis.
constexpr Dense wedge(const Dense& x, const Dense& y) {
  Dense r{};
  for (unsigned a = 0; a < kNumBlades; ++a) {
    if (x[a] == 0.0) continue;
    for (unsigned b = 0; b < kNumBlades; ++b) {
      if (y[b] == 0.0 || (a & b) != 0) continue;
      r[a | b] += reorder_sign(a, b) * x[a] * y[b];
    }
  }
  return r;
}

// Null-basis vector k (e0, e1, e2, e3, einf) in the orthogonal basis.
//   e0 = (e- - e+)/2, einf = e- + e+
constexpr Dense null_vector_in_ortho(int k) {
  Dense v{};
  switch (k) {
    case 0: v[16] = 0.5; v[8] = -0.5; break;
    case 1: v[1] = 1.0; break;
    case 2: v[2] = 1.0; break;
    case 3: v[4] = 1.0; break;
    default: v[16] = 1.0; v[8] = 1.0; break;
  }
  return v;
}

// Orthogonal-basis vector k (e1, e2, e3, e+, e-) in the null basis.
//   e+ = einf/2 - e0, e- = einf/2 + e0
constexpr Dense ortho_vector_in_null(int k) {
  Dense v{};
  switch (k) {
    case 0: v[2] = 1.0; break;
    case 1: v[4] = 1.0; break;
    case 2: v[8] = 1.0; break;
    case 3: v[16] = 0.5; v[1] = -1.0; break;
    default: v[16] = 0.5; v[1] = 1.0; break;
  }
  return v;
}

// Blades are wedges of their factors in either basis; orthogonal blades are
// also geometric products, so the change of basis is a wedge of images.
template <typename VectorImage>
constexpr std::array<Dense, kNumBlades> blade_images(VectorImage image) {
  std::array<Dense, kNumBlades> out{};
  for (unsigned b = 0; b < kNumBlades; ++b) {
    Dense acc{};
    acc[0] = 1.0;
    for (int k = 0; k < kDimension; ++k)
      if ((b >> k) & 1u) acc = wedge(acc, image(k));
    out[b] = acc;
  }
  return out;
}

constexpr Dense change_basis(const Dense& x, const std::array<Dense, kNumBlades>& images) {
  Dense r{};
  for (unsigned b = 0; b < kNumBlades; ++b) {
    if (x[b] == 0.0) continue;
    for (unsigned c = 0; c < kNumBlades; ++c) r[c] += x[b] * images[b][c];
  }
  return r;
}

constexpr CayleyTables build_tables() {
  const auto to_ortho = blade_images(null_vector_in_ortho);
  const auto to_null = blade_images(ortho_vector_in_null);

  CayleyTables t{};
  for (unsigned a = 0; a < kNumBlades; ++a) {
    for (unsigned b = 0; b < kNumBlades; ++b) {
      const Dense prod = change_basis(ortho_geometric(to_ortho[a], to_ortho[b]), to_null);
      const int ga = std::popcount(a);
      const int gb = std::popcount(b);
      const int outer_grade = ga + gb;
      const int inner_grade = ga > gb ? ga - gb : gb - ga;
      for (unsigned c = 0; c < kNumBlades; ++c) {
        if (prod[c] == 0.0) continue;
        // Products of null-basis blades only ever carry unit coefficients.
        if (prod[c] != 1.0 && prod[c] != -1.0) throw "non-unit Cayley coefficient";
        const CayleyTerm term{static_cast<BladeIndex>(c), static_cast<std::int8_t>(prod[c])};
        auto push = [&](CayleyEntry& e) {
          if (e.count == CayleyEntry::kMaxTerms) throw "Cayley entry overflow";
          e.terms[e.count++] = term;
        };
        push(t.geometric[a][b]);
        const int gc = std::popcount(c);
        if (gc == outer_grade) push(t.outer[a][b]);
        if (ga != 0 && gb != 0 && gc == inner_grade) push(t.inner[a][b]);
      }
    }
  }
  return t;
}

}  // namespace detail

/// Geometric, outer and inner product tables of the conformal algebra,
/// generated at compile time in the diagonal (+,+,+,+,-) basis and mapped to
/// the null basis.
inline constexpr CayleyTables kCayley = detail::build_tables();

inline const CayleyTables& generate_cayley_tables() { return kCayley; }

}  // namespace cga
