#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <span>
#include <stdexcept>
#include <type_traits>

#include "cga/blades.hpp"
#include "cga/cayley.hpp"
#include "cga/errors.hpp"

namespace cga {

namespace tolerance {
inline constexpr double invertible = 1e-12;
inline constexpr double compare = 1e-10;
}  // namespace tolerance

inline constexpr std::uint32_t kFullMask = 0xFFFFFFFFu;

constexpr std::uint32_t grade_mask(int k) { return BladeSet::of_grade(k).mask; }

namespace detail {

constexpr int position_in(std::uint32_t mask, unsigned blade) {
  return std::popcount(mask & ((1u << blade) - 1u));
}

template <ProductKind K>
constexpr std::uint32_t product_mask(std::uint32_t a, std::uint32_t b) {
  std::uint32_t r = 0;
  for (unsigned i = 0; i < kNumBlades; ++i) {
    if (!((a >> i) & 1u)) continue;
    for (unsigned j = 0; j < kNumBlades; ++j) {
      if (!((b >> j) & 1u)) continue;
      const auto& e = kCayley[K][i][j];
      for (int t = 0; t < e.count; ++t) r |= 1u << e.terms[t].blade;
    }
  }
  return r;
}

struct PlanTerm {
  std::uint8_t a;
  std::uint8_t b;
  std::uint8_t r;
  std::int8_t sign;
};

// Flattened bilinear expansion for one (kind, lhs mask, rhs mask, kept mask)
// combination. Built once at compile time per type pair.
template <ProductKind K, std::uint32_t A, std::uint32_t B, std::uint32_t Keep>
struct ProductPlan {
  static constexpr std::uint32_t result = product_mask<K>(A, B) & Keep;

  static constexpr std::size_t count = [] {
    std::size_t n = 0;
    for (unsigned i = 0; i < kNumBlades; ++i) {
      if (!((A >> i) & 1u)) continue;
      for (unsigned j = 0; j < kNumBlades; ++j) {
        if (!((B >> j) & 1u)) continue;
        const auto& e = kCayley[K][i][j];
        for (int t = 0; t < e.count; ++t)
          if ((Keep >> e.terms[t].blade) & 1u) ++n;
      }
    }
    return n;
  }();

  static constexpr std::array<PlanTerm, count> terms = [] {
    std::array<PlanTerm, count> out{};
    std::size_t n = 0;
    for (unsigned i = 0; i < kNumBlades; ++i) {
      if (!((A >> i) & 1u)) continue;
      for (unsigned j = 0; j < kNumBlades; ++j) {
        if (!((B >> j) & 1u)) continue;
        const auto& e = kCayley[K][i][j];
        for (int t = 0; t < e.count; ++t) {
          const unsigned c = e.terms[t].blade;
          if (!((Keep >> c) & 1u)) continue;
          out[n++] = PlanTerm{static_cast<std::uint8_t>(position_in(A, i)),
                              static_cast<std::uint8_t>(position_in(B, j)),
                              static_cast<std::uint8_t>(position_in(result, c)), e.terms[t].sign};
        }
      }
    }
    return out;
  }();
};

// Position of each blade of From inside To, or -1 when absent.
template <std::uint32_t From, std::uint32_t To>
inline constexpr auto embed_positions = [] {
  std::array<int, std::popcount(From)> out{};
  int k = 0;
  for (unsigned b = 0; b < kNumBlades; ++b) {
    if (!((From >> b) & 1u)) continue;
    out[k++] = ((To >> b) & 1u) ? position_in(To, b) : -1;
  }
  return out;
}();

template <std::uint32_t Mask, typename F>
constexpr auto per_blade_signs(F sign_of) {
  std::array<int, std::popcount(Mask)> out{};
  int k = 0;
  for (unsigned b = 0; b < kNumBlades; ++b)
    if ((Mask >> b) & 1u) out[k++] = sign_of(std::popcount(b));
  return out;
}

constexpr int reverse_sign(int k) { return ((k * (k - 1) / 2) & 1) ? -1 : 1; }
constexpr int involution_sign(int k) { return (k & 1) ? -1 : 1; }
constexpr int conjugation_sign(int k) { return reverse_sign(k) * involution_sign(k); }

}  // namespace detail

/// Element of the conformal algebra storing only the blades named in Mask.
/// Coefficients are kept in ascending blade-index order; absent blades are
/// exactly zero.
template <typename T, std::uint32_t Mask>
class Multivector {
 public:
  using Scalar = T;
  static constexpr std::uint32_t mask = Mask;
  static constexpr BladeSet blades{Mask};
  static constexpr std::size_t size = std::popcount(Mask);
  using Coefficients = std::array<T, size>;

  constexpr Multivector() : c_{} {}
  constexpr explicit Multivector(const Coefficients& c) : c_(c) {}

  /// Lossless embedding of a multivector whose blades are a subset of Mask.
  template <std::uint32_t Other>
    requires((Other & ~Mask) == 0 && Other != Mask)
  constexpr Multivector(const Multivector<T, Other>& other) : c_{} {
    constexpr auto pos = detail::embed_positions<Other, Mask>;
    for (std::size_t k = 0; k < pos.size(); ++k) c_[pos[k]] = other[k];
  }

  /// Keeps the blades shared with Mask and drops the rest.
  template <std::uint32_t Other>
  static constexpr Multivector project(const Multivector<T, Other>& other) {
    Multivector r;
    constexpr auto pos = detail::embed_positions<Other, Mask>;
    for (std::size_t k = 0; k < pos.size(); ++k)
      if (pos[k] >= 0) r.c_[pos[k]] = other[k];
    return r;
  }

  static constexpr Multivector scalar(T s)
    requires((Mask & 1u) != 0)
  {
    Multivector r;
    r.c_[0] = s;
    return r;
  }

  constexpr T& operator[](std::size_t k) { return c_[k]; }
  constexpr const T& operator[](std::size_t k) const { return c_[k]; }

  std::span<T, size> coefficients() { return c_; }
  std::span<const T, size> coefficients() const { return c_; }
  constexpr const Coefficients& array() const { return c_; }
  T* data() { return c_.data(); }
  const T* data() const { return c_.data(); }

  template <BladeIndex B>
    requires(((Mask >> B) & 1u) != 0)
  constexpr T get() const {
    return c_[detail::position_in(Mask, B)];
  }
  template <BladeIndex B>
    requires(((Mask >> B) & 1u) != 0)
  constexpr void set(T v) {
    c_[detail::position_in(Mask, B)] = v;
  }

  /// Coefficient of an arbitrary blade; zero when the blade is not stored.
  constexpr T coefficient(BladeIndex b) const {
    return blades.contains(b) ? c_[blades.position(b)] : T(0);
  }

  constexpr Multivector reverse() const { return apply_grade_signs<detail::reverse_sign>(); }
  constexpr Multivector involute() const { return apply_grade_signs<detail::involution_sign>(); }
  constexpr Multivector conjugate() const { return apply_grade_signs<detail::conjugation_sign>(); }

  /// Part of grade K, with the narrowed blade set.
  template <int K>
  constexpr Multivector<T, Mask & grade_mask(K)> grade() const {
    static_assert(K >= 0 && K <= 5, "grade out of range");
    return Multivector<T, Mask & grade_mask(K)>::project(*this);
  }

  /// Runtime grade selection; other blades are zeroed but kept in the layout.
  Multivector grade_project(int k) const {
    if (k < 0 || k > 5) throw std::invalid_argument("grade must lie in [0, 5], got " + std::to_string(k));
    Multivector r;
    constexpr auto list = blade_list<Mask>;
    for (std::size_t i = 0; i < size; ++i)
      if (cga::grade(list[i]) == k) r.c_[i] = c_[i];
    return r;
  }

  T scalar_part() const { return coefficient(0); }

  constexpr Multivector operator-() const {
    Multivector r;
    for (std::size_t k = 0; k < size; ++k) r.c_[k] = -c_[k];
    return r;
  }
  Multivector& operator*=(T s) {
    for (auto& x : c_) x *= s;
    return *this;
  }
  Multivector& operator/=(T s) {
    for (auto& x : c_) x /= s;
    return *this;
  }
  Multivector& operator+=(const Multivector& o) {
    for (std::size_t k = 0; k < size; ++k) c_[k] += o.c_[k];
    return *this;
  }
  Multivector& operator-=(const Multivector& o) {
    for (std::size_t k = 0; k < size; ++k) c_[k] -= o.c_[k];
    return *this;
  }

  template <typename U>
  Multivector<U, Mask> cast() const {
    typename Multivector<U, Mask>::Coefficients out{};
    for (std::size_t k = 0; k < size; ++k) out[k] = static_cast<U>(c_[k]);
    return Multivector<U, Mask>(out);
  }

  bool operator==(const Multivector&) const = default;

 private:
  template <int (*Sign)(int)>
  constexpr Multivector apply_grade_signs() const {
    constexpr auto signs = detail::per_blade_signs<Mask>(Sign);
    Multivector r;
    for (std::size_t k = 0; k < size; ++k) r.c_[k] = signs[k] < 0 ? -c_[k] : c_[k];
    return r;
  }

  Coefficients c_;
};

template <typename T>
using GeneralMultivector = Multivector<T, kFullMask>;

template <typename T>
using ScalarMv = Multivector<T, 1u>;

// ---------------------------------------------------------------- products

/// Bilinear product of kind K; only blades in Keep are evaluated.
template <ProductKind K, std::uint32_t Keep = kFullMask, typename T, std::uint32_t A, std::uint32_t B>
constexpr auto product(const Multivector<T, A>& a, const Multivector<T, B>& b) {
  using Plan = detail::ProductPlan<K, A, B, Keep>;
  Multivector<T, Plan::result> r;
  for (const auto& t : Plan::terms) {
    const T v = a[t.a] * b[t.b];
    r[t.r] += t.sign > 0 ? v : -v;
  }
  return r;
}

template <typename T, std::uint32_t A, std::uint32_t B>
constexpr auto geometric_product(const Multivector<T, A>& a, const Multivector<T, B>& b) {
  return product<ProductKind::geometric>(a, b);
}
template <typename T, std::uint32_t A, std::uint32_t B>
constexpr auto outer_product(const Multivector<T, A>& a, const Multivector<T, B>& b) {
  return product<ProductKind::outer>(a, b);
}
template <typename T, std::uint32_t A, std::uint32_t B>
constexpr auto inner_product(const Multivector<T, A>& a, const Multivector<T, B>& b) {
  return product<ProductKind::inner>(a, b);
}

template <typename T, std::uint32_t A, std::uint32_t B>
constexpr auto operator*(const Multivector<T, A>& a, const Multivector<T, B>& b) {
  return product<ProductKind::geometric>(a, b);
}
template <typename T, std::uint32_t A, std::uint32_t B>
constexpr auto operator^(const Multivector<T, A>& a, const Multivector<T, B>& b) {
  return product<ProductKind::outer>(a, b);
}
template <typename T, std::uint32_t A, std::uint32_t B>
constexpr auto operator|(const Multivector<T, A>& a, const Multivector<T, B>& b) {
  return product<ProductKind::inner>(a, b);
}

template <typename T, std::uint32_t A, std::uint32_t B>
constexpr Multivector<T, A | B> operator+(const Multivector<T, A>& a, const Multivector<T, B>& b) {
  Multivector<T, A | B> r;
  constexpr auto pa = detail::embed_positions<A, A | B>;
  constexpr auto pb = detail::embed_positions<B, A | B>;
  for (std::size_t k = 0; k < pa.size(); ++k) r[pa[k]] += a[k];
  for (std::size_t k = 0; k < pb.size(); ++k) r[pb[k]] += b[k];
  return r;
}
template <typename T, std::uint32_t A, std::uint32_t B>
constexpr Multivector<T, A | B> operator-(const Multivector<T, A>& a, const Multivector<T, B>& b) {
  Multivector<T, A | B> r;
  constexpr auto pa = detail::embed_positions<A, A | B>;
  constexpr auto pb = detail::embed_positions<B, A | B>;
  for (std::size_t k = 0; k < pa.size(); ++k) r[pa[k]] += a[k];
  for (std::size_t k = 0; k < pb.size(); ++k) r[pb[k]] -= b[k];
  return r;
}

template <typename T, std::uint32_t M>
constexpr Multivector<T, M> operator*(const Multivector<T, M>& a, std::type_identity_t<T> s) {
  Multivector<T, M> r(a);
  r *= s;
  return r;
}
template <typename T, std::uint32_t M>
constexpr Multivector<T, M> operator*(std::type_identity_t<T> s, const Multivector<T, M>& a) {
  return a * s;
}
template <typename T, std::uint32_t M>
constexpr Multivector<T, M> operator/(const Multivector<T, M>& a, std::type_identity_t<T> s) {
  Multivector<T, M> r(a);
  r /= s;
  return r;
}

// ------------------------------------------------------------ unary helpers

template <typename T, std::uint32_t M>
constexpr Multivector<T, M> reverse(const Multivector<T, M>& a) {
  return a.reverse();
}

/// Scalar part of a * reverse(b).
template <typename T, std::uint32_t A, std::uint32_t B>
T scalar_product(const Multivector<T, A>& a, const Multivector<T, B>& b) {
  const auto s = product<ProductKind::geometric, 1u>(a, b.reverse());
  if constexpr (decltype(s)::size == 0) {
    return T(0);
  } else {
    return s[0];
  }
}

template <typename T, std::uint32_t M>
T norm(const Multivector<T, M>& a) {
  using std::abs, std::sqrt;
  return sqrt(abs(scalar_product(a, a)));
}

/// Scalar part of a * a (no reversion); used where the sign of a blade's
/// square carries geometric meaning, e.g. real vs imaginary rounds.
template <typename T, std::uint32_t M>
T square(const Multivector<T, M>& a) {
  const auto s = product<ProductKind::geometric, 1u>(a, a);
  if constexpr (decltype(s)::size == 0) {
    return T(0);
  } else {
    return s[0];
  }
}

namespace detail {
constexpr int pseudoscalar_square_sign() { return kCayley.geometric[31][31].terms[0].sign; }
static_assert(kCayley.geometric[31][31].count == 1 && kCayley.geometric[31][31].terms[0].blade == 0);
}  // namespace detail

/// Unit pseudoscalar I = e0 ^ e1 ^ e2 ^ e3 ^ einf.
template <typename T>
constexpr Multivector<T, (1u << 31)> pseudoscalar() {
  return Multivector<T, (1u << 31)>({T(1)});
}

template <typename T>
constexpr Multivector<T, (1u << 31)> pseudoscalar_inverse() {
  return Multivector<T, (1u << 31)>({T(detail::pseudoscalar_square_sign())});
}

/// Dual X* = X I^-1 (geometric product; for non-scalar X it equals the inner
/// product with I^-1).
template <typename T, std::uint32_t M>
constexpr auto dual(const Multivector<T, M>& a) {
  return product<ProductKind::geometric>(a, pseudoscalar_inverse<T>());
}

/// Inverse of the dual, so that undual(dual(X)) == X.
template <typename T, std::uint32_t M>
constexpr auto undual(const Multivector<T, M>& a) {
  return product<ProductKind::geometric>(a, pseudoscalar<T>());
}

/// Versor/blade inverse reverse(a) / <a reverse(a)>. Throws NotInvertible
/// when a * reverse(a) is not a non-zero scalar.
template <typename T, std::uint32_t M>
Multivector<T, M> inverse(const Multivector<T, M>& a) {
  using std::abs;
  const auto rev = a.reverse();
  const auto p = a * rev;
  using P = decltype(p);
  T s = 0;
  T off = 0;
  constexpr auto list = blade_list<P::mask>;
  for (std::size_t k = 0; k < P::size; ++k) {
    if (list[k] == 0)
      s = p[k];
    else
      off = std::max<T>(off, abs(p[k]));
  }
  if (abs(s) < T(tolerance::invertible) || off > T(tolerance::compare) * std::max<T>(T(1), abs(s)))
    throw NotInvertible("multivector is not a versor or blade with non-zero norm");
  return rev / s;
}

template <typename T, std::uint32_t M>
Multivector<T, M> grade_project(const Multivector<T, M>& a, int k) {
  return a.grade_project(k);
}

/// Largest absolute coefficient difference, treating absent blades as zero.
template <typename T, std::uint32_t A, std::uint32_t B>
T max_abs_difference(const Multivector<T, A>& a, const Multivector<T, B>& b) {
  using std::abs;
  T m = 0;
  for (unsigned blade = 0; blade < kNumBlades; ++blade) {
    const auto bi = static_cast<BladeIndex>(blade);
    m = std::max<T>(m, abs(a.coefficient(bi) - b.coefficient(bi)));
  }
  return m;
}

template <typename T, std::uint32_t A, std::uint32_t B>
bool approx_equal(const Multivector<T, A>& a, const Multivector<T, B>& b, T tol = T(tolerance::compare)) {
  return max_abs_difference(a, b) <= tol;
}

template <typename T, std::uint32_t M>
std::ostream& operator<<(std::ostream& os, const Multivector<T, M>& a) {
  constexpr auto list = blade_list<M>;
  bool first = true;
  for (std::size_t k = 0; k < list.size(); ++k) {
    if (a[k] == T(0)) continue;
    os << (first ? "" : " + ") << a[k];
    if (list[k] != 0) os << "*" << blade_name(list[k]);
    first = false;
  }
  if (first) os << "0";
  return os;
}

}  // namespace cga
