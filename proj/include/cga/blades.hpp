#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <string>
#include <string_view>

namespace cga {

// Basis vectors of the conformal model, in canonical order. A blade is
// encoded by the 5-bit mask of its factors: bit 0 = e0, bits 1..3 = e1..e3,
// bit 4 = einf. The blade index is that mask (0 = scalar, 31 = pseudoscalar).
using BladeIndex = std::uint8_t;

inline constexpr int kDimension = 5;
inline constexpr int kNumBlades = 32;

namespace blade {
inline constexpr BladeIndex scalar = 0;
inline constexpr BladeIndex e0 = 1;
inline constexpr BladeIndex e1 = 2;
inline constexpr BladeIndex e2 = 4;
inline constexpr BladeIndex e3 = 8;
inline constexpr BladeIndex ei = 16;

inline constexpr BladeIndex e01 = e0 | e1;
inline constexpr BladeIndex e02 = e0 | e2;
inline constexpr BladeIndex e03 = e0 | e3;
inline constexpr BladeIndex e0i = e0 | ei;
inline constexpr BladeIndex e12 = e1 | e2;
inline constexpr BladeIndex e13 = e1 | e3;
inline constexpr BladeIndex e23 = e2 | e3;
inline constexpr BladeIndex e1i = e1 | ei;
inline constexpr BladeIndex e2i = e2 | ei;
inline constexpr BladeIndex e3i = e3 | ei;
inline constexpr BladeIndex e123 = e1 | e2 | e3;
inline constexpr BladeIndex e12i = e1 | e2 | ei;
inline constexpr BladeIndex e13i = e1 | e3 | ei;
inline constexpr BladeIndex e23i = e2 | e3 | ei;
inline constexpr BladeIndex e01i = e0 | e1 | ei;
inline constexpr BladeIndex e02i = e0 | e2 | ei;
inline constexpr BladeIndex e03i = e0 | e3 | ei;
inline constexpr BladeIndex e123i = e1 | e2 | e3 | ei;
inline constexpr BladeIndex e0123 = e0 | e1 | e2 | e3;
inline constexpr BladeIndex e0123i = 31;
}  // namespace blade

constexpr int grade(BladeIndex b) { return std::popcount(static_cast<unsigned>(b)); }

/// Set of basis blades present in a multivector; bit b set iff blade b is stored.
struct BladeSet {
  std::uint32_t mask = 0;

  constexpr BladeSet() = default;
  constexpr explicit BladeSet(std::uint32_t m) : mask(m) {}

  static constexpr BladeSet of(std::initializer_list<BladeIndex> blades) {
    std::uint32_t m = 0;
    for (auto b : blades) m |= 1u << b;
    return BladeSet(m);
  }
  static constexpr BladeSet full() { return BladeSet(0xFFFFFFFFu); }
  static constexpr BladeSet of_grade(int k) {
    std::uint32_t m = 0;
    for (int b = 0; b < kNumBlades; ++b)
      if (std::popcount(static_cast<unsigned>(b)) == k) m |= 1u << b;
    return BladeSet(m);
  }

  constexpr bool contains(BladeIndex b) const { return (mask >> b) & 1u; }
  constexpr bool contains(BladeSet other) const { return (other.mask & ~mask) == 0; }
  constexpr int size() const { return std::popcount(mask); }
  constexpr bool empty() const { return mask == 0; }

  /// Position of blade b within the ascending-ordered coefficient array.
  constexpr int position(BladeIndex b) const {
    return std::popcount(mask & ((1u << b) - 1u));
  }

  constexpr BladeSet operator|(BladeSet o) const { return BladeSet(mask | o.mask); }
  constexpr BladeSet operator&(BladeSet o) const { return BladeSet(mask & o.mask); }
  constexpr bool operator==(const BladeSet&) const = default;
};

/// Ascending list of the blades in a set.
template <std::uint32_t Mask>
inline constexpr auto blade_list = [] {
  std::array<BladeIndex, std::popcount(Mask)> out{};
  int k = 0;
  for (int b = 0; b < kNumBlades; ++b)
    if ((Mask >> b) & 1u) out[k++] = static_cast<BladeIndex>(b);
  return out;
}();

/// Human-readable name, e.g. "e12", "e0i", "1" for the scalar.
inline std::string blade_name(BladeIndex b) {
  if (b == 0) return "1";
  static constexpr std::array<char, kDimension> labels{'0', '1', '2', '3', 'i'};
  std::string out = "e";
  for (int k = 0; k < kDimension; ++k)
    if ((b >> k) & 1u) out += labels[k];
  return out;
}

/// Parses names produced by blade_name; returns -1 if not a canonical blade name.
inline int parse_blade_name(std::string_view name) {
  if (name == "1" || name == "scalar") return 0;
  if (name.size() < 2 || name[0] != 'e') return -1;
  int mask = 0;
  int last = -1;
  for (char c : name.substr(1)) {
    int k = -1;
    switch (c) {
      case '0': k = 0; break;
      case '1': k = 1; break;
      case '2': k = 2; break;
      case '3': k = 3; break;
      case 'i': k = 4; break;
      default: return -1;
    }
    if (k <= last) return -1;
    last = k;
    mask |= 1 << k;
  }
  return mask;
}

}  // namespace cga
