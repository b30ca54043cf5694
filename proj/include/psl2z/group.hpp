#pragma once

/**
 * @file group.hpp
 * @brief Exact arithmetic in PSL(2,Z) on sign-canonical integer matrices.
 *
 * Elements are unimodular 2x2 integer matrices modulo {+M, -M}. The
 * canonical representative is the one whose first nonzero entry, in the
 * order a, b, c, d, is positive. All arithmetic is checked 64-bit; an
 * overflow is a hard error, never a wrapped value.
 *
 * The generating set is r (order two) and u (a unit translation), closed
 * under inverses as the three-letter alphabet {r, u, u^-1}.
 */

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace psl2z {

// --- alphabet -------------------------------------------------------------

enum class Letter : std::uint8_t { R = 0, U = 1, Uinv = 2 };

/// Canonical letter order used everywhere determinism matters.
inline constexpr std::array<Letter, 3> alphabet = {Letter::R, Letter::U,
                                                   Letter::Uinv};

constexpr Letter inverse(Letter s) noexcept {
  switch (s) {
    case Letter::U: return Letter::Uinv;
    case Letter::Uinv: return Letter::U;
    default: return Letter::R;  // r is an involution
  }
}

/// One-character serialization: r, u, and U for u^-1.
constexpr char letter_char(Letter s) noexcept {
  switch (s) {
    case Letter::R: return 'r';
    case Letter::U: return 'u';
    default: return 'U';
  }
}

constexpr Letter parse_letter(char c) {
  switch (c) {
    case 'r': return Letter::R;
    case 'u': return Letter::U;
    case 'U': return Letter::Uinv;
    default: throw std::invalid_argument("unknown letter in word");
  }
}

// --- checked 64-bit arithmetic ---------------------------------------------

namespace detail {

inline std::int64_t checked_add(std::int64_t x, std::int64_t y) {
  std::int64_t out;
  if (__builtin_add_overflow(x, y, &out))
    throw std::overflow_error("64-bit overflow in matrix addition");
  return out;
}

inline std::int64_t checked_mul(std::int64_t x, std::int64_t y) {
  std::int64_t out;
  if (__builtin_mul_overflow(x, y, &out))
    throw std::overflow_error("64-bit overflow in matrix multiplication");
  return out;
}

inline std::int64_t checked_neg(std::int64_t x) {
  if (x == INT64_MIN)
    throw std::overflow_error("64-bit overflow negating matrix entry");
  return -x;
}

}  // namespace detail

// --- matrices and group elements -------------------------------------------

struct Matrix2 {
  std::int64_t a, b, c, d;  // [[a, b], [c, d]]

  constexpr bool operator==(Matrix2 const&) const = default;
};

/// det via checked arithmetic; throws on overflow rather than wrapping.
inline std::int64_t determinant(Matrix2 const& m) {
  return detail::checked_add(detail::checked_mul(m.a, m.d),
                             detail::checked_neg(detail::checked_mul(m.b, m.c)));
}

/// A sign-canonical unimodular matrix. Construct via canonicalize().
struct GroupElement {
  Matrix2 m;

  constexpr bool operator==(GroupElement const&) const = default;
};

/**
 * Pick the canonical representative of {M, -M}.
 *
 * Requires det M = 1. Entries equal to INT64_MIN are rejected since their
 * negation is unrepresentable.
 */
inline GroupElement canonicalize(Matrix2 m) {
  if (determinant(m) != 1)
    throw std::invalid_argument("matrix is not unimodular (det != 1)");
  for (std::int64_t x : {m.a, m.b, m.c, m.d}) {
    if (x > 0) return GroupElement{m};
    if (x < 0)
      return GroupElement{{detail::checked_neg(m.a), detail::checked_neg(m.b),
                           detail::checked_neg(m.c), detail::checked_neg(m.d)}};
  }
  throw std::invalid_argument("zero matrix cannot be canonicalized");
}

inline GroupElement identity() { return GroupElement{{1, 0, 0, 1}}; }

inline GroupElement generator(Letter s) {
  switch (s) {
    case Letter::R: return canonicalize({0, 1, -1, 0});
    case Letter::U: return GroupElement{{1, 1, 0, 1}};
    default: return GroupElement{{1, -1, 0, 1}};
  }
}

inline GroupElement mul(GroupElement const& g, GroupElement const& h) {
  using detail::checked_add;
  using detail::checked_mul;
  Matrix2 const& x = g.m;
  Matrix2 const& y = h.m;
  return canonicalize(
      {checked_add(checked_mul(x.a, y.a), checked_mul(x.b, y.c)),
       checked_add(checked_mul(x.a, y.b), checked_mul(x.b, y.d)),
       checked_add(checked_mul(x.c, y.a), checked_mul(x.d, y.c)),
       checked_add(checked_mul(x.c, y.b), checked_mul(x.d, y.d))});
}

inline GroupElement inverse(GroupElement const& g) {
  return canonicalize({g.m.d, detail::checked_neg(g.m.b),
                       detail::checked_neg(g.m.c), g.m.a});
}

/// Right translation by one generator, g * s.
inline GroupElement right_mul(GroupElement const& g, Letter s) {
  return mul(g, generator(s));
}

/// Serialized as "matrix(a,b,c,d)"; also the node id in ball exports.
inline std::string to_string(GroupElement const& g) {
  return "matrix(" + std::to_string(g.m.a) + "," + std::to_string(g.m.b) +
         "," + std::to_string(g.m.c) + "," + std::to_string(g.m.d) + ")";
}

}  // namespace psl2z

template <>
struct std::hash<psl2z::GroupElement> {
  std::size_t operator()(psl2z::GroupElement const& g) const noexcept {
    std::size_t seed = 0;
    for (std::int64_t v : {g.m.a, g.m.b, g.m.c, g.m.d}) {
      // boost-style combine; entries are small in practice but need mixing
      seed ^= std::hash<std::int64_t>{}(v) + 0x9e3779b97f4a7c15ULL +
              (seed << 6) + (seed >> 2);
    }
    return seed;
  }
};
