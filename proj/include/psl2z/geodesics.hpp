#pragma once

/**
 * @file geodesics.hpp
 * @brief Geodesic word enumeration and the equivalent-path decomposition.
 *
 * Two geodesic words for the same element differ by a single primitive
 * relator once the largest common suffix is stripped: v = v0 v1 x and
 * w = w0 w1 x with v0 = w0 as elements and v1 * w1^-1 a primitive relator.
 * decompose_equivalent_paths computes that decomposition and checks the
 * relator claim, which a counterexample would falsify. The relator is
 * usually one of the four hexagons, but pairs of geodesics of an
 * involution can meet only at full length, producing longer primitive
 * relators: "UrUUr" and "ruuru" name the same order-two element and yield
 * "UrUUr" squared.
 */

#include <vector>

#include "psl2z/ball.hpp"

namespace psl2z {

/**
 * All geodesic words for g, via norm descent. Deterministic order: at each
 * step the last letter runs through S1 in canonical order.
 */
inline std::vector<Word> geodesic_words(GroupElement const& g,
                                        Ball const& ball) {
  std::uint32_t i = ball.index_of(g);
  if (ball.norm_at(i) == 0) return {Word{}};
  std::vector<Word> out;
  for (Letter s : ball.suffix_letters(i).letters()) {
    auto j = static_cast<std::uint32_t>(ball.neighbor(i, inverse(s)));
    for (Word& prefix : geodesic_words(ball.element(j), ball)) {
      prefix.push_back(s);
      out.push_back(std::move(prefix));
    }
  }
  return out;
}

struct PathDecomposition {
  Word v0, v1, w0, w1, x;
  Word relator;  ///< v1 * w1^-1, always a primitive relator
};

namespace detail {

inline Word suffix_of(Word const& w, std::size_t k) {
  return Word(w.end() - static_cast<std::ptrdiff_t>(k), w.end());
}

inline Word prefix_of(Word const& w, std::size_t k) {
  return Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k));
}

}  // namespace detail

/**
 * Split two distinct geodesic words for the same element as v = v0 v1 x,
 * w = w0 w1 x: x is the largest common suffix and v1, w1 are the smallest
 * non-empty equivalent suffixes of what remains.
 *
 * Inputs must be distinct geodesics (length equals the ball norm of their
 * value) with equal values; anything else throws std::invalid_argument.
 */
inline PathDecomposition decompose_equivalent_paths(Word const& v,
                                                    Word const& w,
                                                    Ball const& ball) {
  if (v == w) throw std::invalid_argument("paths must be distinct");
  GroupElement gv = evaluate(v);
  GroupElement gw = evaluate(w);
  if (!(gv == gw))
    throw std::invalid_argument("paths are not equivalent (values differ)");
  if (v.size() != ball.norm_of(gv) || w.size() != ball.norm_of(gw))
    throw std::invalid_argument("input word is not geodesic");

  std::size_t common = 0;
  while (common < v.size() && common < w.size() &&
         v[v.size() - 1 - common] == w[w.size() - 1 - common])
    ++common;

  PathDecomposition out;
  out.x = detail::suffix_of(v, common);
  Word vp = detail::prefix_of(v, v.size() - common);
  Word wp = detail::prefix_of(w, w.size() - common);

  // equivalent geodesics have equal length, so one suffix length suffices
  std::size_t k = 1;
  for (; k < vp.size(); ++k) {
    if (evaluate(detail::suffix_of(vp, k)) == evaluate(detail::suffix_of(wp, k)))
      break;
  }
  out.v1 = detail::suffix_of(vp, k);
  out.w1 = detail::suffix_of(wp, k);
  out.v0 = detail::prefix_of(vp, vp.size() - k);
  out.w0 = detail::prefix_of(wp, wp.size() - k);

  out.relator = out.v1;
  Word wbar = inverse_word(out.w1);
  out.relator.insert(out.relator.end(), wbar.begin(), wbar.end());
  if (!is_primitive_relator(out.relator))
    throw std::logic_error(
        "equivalent-path decomposition did not yield a primitive relator");
  return out;
}

}  // namespace psl2z
