#pragma once

/**
 * @file word.hpp
 * @brief Words over {r, u, u^-1}: reduction, relators, evaluation.
 *
 * A Word is a finite letter sequence read left to right. Free reduction
 * cancels adjacent inverse pairs; note that r is its own inverse, so "rr"
 * cancels freely. A relator is a non-empty word evaluating to the
 * identity, primitive when no proper subword is itself a relator. The
 * primitive relators of length at most six are rr, the two free
 * cancellations u u^-1 / u^-1 u, and the four hexagons built from (ru)^3;
 * longer ones exist, starting at length ten with squares of geodesic
 * words of involutions such as "UrUUr" * "UrUUr". is_primitive_relator
 * and is_reduced_in_group therefore work from the definition (prefix
 * products) rather than from the finite table.
 */

#include <algorithm>
#include <array>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "psl2z/group.hpp"

namespace psl2z {

using Word = std::vector<Letter>;

// --- serialization ----------------------------------------------------------

/// Compact form over {r, u, U}; the empty word prints as "e".
inline std::string format_word(Word const& w) {
  if (w.empty()) return "e";
  std::string out;
  out.reserve(w.size());
  for (Letter s : w) out.push_back(letter_char(s));
  return out;
}

inline Word parse_word(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty word text; use \"e\"");
  if (text == "e") return {};
  Word w;
  w.reserve(text.size());
  for (char c : text) w.push_back(parse_letter(c));
  return w;
}

// --- reduction ---------------------------------------------------------------

inline Word free_reduce(Word const& w) {
  Word out;
  out.reserve(w.size());
  for (Letter s : w) {
    if (!out.empty() && out.back() == inverse(s))
      out.pop_back();
    else
      out.push_back(s);
  }
  return out;
}

inline bool is_freely_reduced(Word const& w) {
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w[i] == inverse(w[i - 1])) return false;
  return true;
}

inline Word inverse_word(Word const& w) {
  Word out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(inverse(*it));
  return out;
}

inline GroupElement evaluate(Word const& w) {
  GroupElement g = identity();
  for (Letter s : w) g = right_mul(g, s);
  return g;
}

// --- relators ----------------------------------------------------------------

/// rr plus the four six-letter hexagonal relators: all primitive relators
/// through length six except the free cancellations u u^-1 and u^-1 u.
/// Every relator SHORTER than ten letters contains a table member or a
/// cancelling pair; from length ten on there are primitive relators
/// containing neither (squares of involution geodesics, see
/// is_primitive_relator).
inline std::array<Word, 5> const& primitive_relators() {
  static std::array<Word, 5> const table = {
      parse_word("rr"),     parse_word("rururu"), parse_word("rUrUrU"),
      parse_word("ururur"), parse_word("UrUrUr")};
  return table;
}

/**
 * A primitive relator evaluates to the identity while no proper non-empty
 * subword does. Since w[i..j) evaluates to the identity exactly when the
 * prefix products at i and j agree, primitivity means: the full word wraps
 * around to the identity and all other prefix pairs are distinct. Checked
 * from that definition, so squares of involution geodesics (for example
 * "UrUUrUrUUr", whose five-letter halves multiply to an order-two element)
 * are recognized alongside the classical table.
 */
inline bool is_primitive_relator(Word const& w) {
  if (w.empty()) return false;
  std::vector<GroupElement> prefix;
  prefix.reserve(w.size() + 1);
  prefix.push_back(identity());
  for (Letter s : w) prefix.push_back(right_mul(prefix.back(), s));
  if (!(prefix.back() == prefix.front())) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i)
    for (std::size_t j = i + 1; j < prefix.size(); ++j) {
      if (i == 0 && j == prefix.size() - 1) continue;
      if (prefix[i] == prefix[j]) return false;  // proper subrelator w[i..j)
    }
  return true;
}

inline bool is_subword(Word const& needle, Word const& hay) {
  if (needle.empty()) return true;
  if (needle.size() > hay.size()) return false;
  return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) !=
         hay.end();
}

/// Scans for the finite table only; a fast screen, exact for words shorter
/// than ten letters when combined with is_freely_reduced.
inline bool contains_primitive_relator(Word const& w) {
  for (Word const& rel : primitive_relators())
    if (is_subword(rel, w)) return true;
  return false;
}

/// True for words that occur inside one of the table relators. This is the
/// right notion for the short forbidden suffix shapes (uu, urU, Uru);
/// longer primitive relators can absorb words the table cannot.
inline bool is_relator_subword(Word const& w) {
  for (Word const& rel : primitive_relators())
    if (is_subword(w, rel)) return true;
  return false;
}

/**
 * Reduced in the group: no non-empty subword evaluates to the identity.
 * Equivalent to all prefix products being pairwise distinct, which is what
 * gets checked. This subsumes free reduction (a cancelling pair is a
 * length-2 relator) and stays exact beyond length ten, where scanning for
 * the finite table would start missing relators.
 */
inline bool is_reduced_in_group(Word const& w) {
  std::unordered_set<GroupElement> seen;
  GroupElement g = identity();
  seen.insert(g);
  for (Letter s : w) {
    g = right_mul(g, s);
    if (!seen.insert(g).second) return false;
  }
  return true;
}

}  // namespace psl2z
