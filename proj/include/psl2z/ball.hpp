#pragma once

/**
 * @file ball.hpp
 * @brief Breadth-first Cayley ball with norms, descent data and exports.
 *
 * The Cayley graph is 3-regular (alphabet {r, u, u^-1}, r giving a single
 * undirected edge). All relators have even length, so the graph is
 * bipartite and adjacent norms differ by exactly one; the constructor
 * verifies this on every edge it sees rather than assuming it.
 *
 * Because suffix data is defined by norm descent, it only ever looks at
 * elements of smaller norm, all of which a ball contains. S1, S2* and the
 * derived type of a node are therefore exact for every node of the ball,
 * including the boundary sphere; successor queries additionally need the
 * successors themselves inside the ball (norm <= radius - 1).
 */

#include <cmath>
#include <cstdint>
#include <ostream>
#include <span>
#include <unordered_map>
#include <vector>

#include "psl2z/word.hpp"

namespace psl2z {

/// Small set of alphabet letters kept as a 3-bit mask.
class LetterSet {
 public:
  constexpr LetterSet() = default;

  constexpr void add(Letter s) { bits_ |= mask(s); }
  constexpr bool contains(Letter s) const { return bits_ & mask(s); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const {
    return (bits_ & 1) + ((bits_ >> 1) & 1) + ((bits_ >> 2) & 1);
  }
  constexpr bool operator==(LetterSet const&) const = default;

  constexpr LetterSet complement() const {
    LetterSet out;
    out.bits_ = static_cast<std::uint8_t>(~bits_ & 0x7);
    return out;
  }

  std::vector<Letter> letters() const {
    std::vector<Letter> out;
    for (Letter s : alphabet)
      if (contains(s)) out.push_back(s);
    return out;
  }

  /// Letters in canonical order, or "-" when empty.
  std::string to_string() const {
    if (empty()) return "-";
    std::string out;
    for (Letter s : alphabet)
      if (contains(s)) out.push_back(letter_char(s));
    return out;
  }

 private:
  static constexpr std::uint8_t mask(Letter s) {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(s));
  }
  std::uint8_t bits_ = 0;
};

struct NodeRecord {
  std::uint32_t norm = 0;
  LetterSet s_minus;  ///< letters s with |gs| = |g| - 1; exact on all nodes
  LetterSet s_plus;   ///< complement of s_minus (3-regular, bipartite)
};

/**
 * Level-2 suffix data of an element: the set S2*(g).
 *
 * level 2 holds the length-2 geodesic suffixes (norm >= 2), level 1 the
 * last letters (norm 1), level 0 the empty set (identity only). Suffix
 * words are kept sorted in canonical letter order so equality is set
 * equality.
 */
struct SuffixProfile {
  int level = 0;
  std::vector<Word> suffixes;

  bool operator==(SuffixProfile const&) const = default;
};

class Ball {
 public:
  static constexpr std::size_t default_max_nodes = 50'000'000;

  explicit Ball(int radius, std::size_t max_nodes = default_max_nodes)
      : radius_(radius) {
    if (radius < 0) throw std::invalid_argument("ball radius must be >= 0");
    // golden-ratio growth: |ball(R)| ~ 6.2 * phi^R
    if (7.0 * std::pow(1.6181, radius) > static_cast<double>(max_nodes))
      throw std::length_error("requested ball exceeds the node budget");
    build(max_nodes);
  }

  int radius() const { return radius_; }
  std::size_t size() const { return elements_.size(); }

  /// Element count per norm, indices 0..radius.
  std::vector<std::uint32_t> const& sphere_sizes() const { return spheres_; }

  bool contains(GroupElement const& g) const { return index_.count(g) != 0; }

  std::uint32_t index_of(GroupElement const& g) const {
    auto it = index_.find(g);
    if (it == index_.end())
      throw std::out_of_range("element lies outside the ball");
    return it->second;
  }

  GroupElement const& element(std::uint32_t i) const { return elements_[i]; }
  NodeRecord const& node(std::uint32_t i) const { return nodes_[i]; }
  std::uint32_t norm_at(std::uint32_t i) const { return nodes_[i].norm; }
  std::uint32_t norm_of(GroupElement const& g) const {
    return nodes_[index_of(g)].norm;
  }
  bool is_interior(std::uint32_t i) const {
    return nodes_[i].norm + 1 <= static_cast<std::uint32_t>(radius_);
  }

  /// Index of element(i) * s, or -1 when the neighbor lies outside.
  std::int64_t neighbor(std::uint32_t i, Letter s) const {
    return neighbors_[i][static_cast<unsigned>(s)];
  }

  // --- suffix data (norm descent; exact for every node) ---

  /// S1(g): letters s with |g s^-1| = |g| - 1, i.e. last letters of
  /// geodesic words for g.
  LetterSet suffix_letters(std::uint32_t i) const {
    LetterSet out;
    std::uint32_t n = nodes_[i].norm;
    if (n == 0) return out;
    for (Letter s : alphabet) {
      std::int64_t j = neighbor(i, inverse(s));
      if (j >= 0 && nodes_[j].norm == n - 1) out.add(s);
    }
    return out;
  }

  SuffixProfile suffix_profile(std::uint32_t i) const {
    std::uint32_t n = nodes_[i].norm;
    SuffixProfile out;
    if (n == 0) return out;
    LetterSet s1 = suffix_letters(i);
    if (n == 1) {
      out.level = 1;
      for (Letter s : s1.letters()) out.suffixes.push_back(Word{s});
      return out;
    }
    out.level = 2;
    for (Letter t : s1.letters()) {
      auto j = static_cast<std::uint32_t>(neighbor(i, inverse(t)));
      for (Letter s : suffix_letters(j).letters())
        out.suffixes.push_back(Word{s, t});
    }
    std::sort(out.suffixes.begin(), out.suffixes.end());
    out.suffixes.erase(std::unique(out.suffixes.begin(), out.suffixes.end()),
                       out.suffixes.end());
    return out;
  }

  SuffixProfile suffix_profile(GroupElement const& g) const {
    return suffix_profile(index_of(g));
  }

 private:
  void build(std::size_t max_nodes) {
    auto const r = static_cast<std::uint32_t>(radius_);
    elements_.push_back(identity());
    index_.emplace(identity(), 0);
    std::vector<std::uint32_t> norms{0};

    // plain queue over the element vector; expansion order is the canonical
    // letter order, so indices are reproducible
    for (std::size_t i = 0; i < elements_.size(); ++i) {
      if (norms[i] == r) continue;
      GroupElement g = elements_[i];
      for (Letter s : alphabet) {
        GroupElement h = right_mul(g, s);
        auto [it, fresh] =
            index_.emplace(h, static_cast<std::uint32_t>(elements_.size()));
        if (fresh) {
          if (elements_.size() >= max_nodes)
            throw std::length_error("ball construction exceeded node budget");
          elements_.push_back(h);
          norms.push_back(norms[i] + 1);
        } else if (norms[it->second] + 1 != norms[i] &&
                   norms[it->second] != norms[i] + 1) {
          // an edge inside one sphere would mean an odd relator
          throw std::logic_error("ball is not bipartite: odd relator found");
        }
      }
    }

    nodes_.resize(elements_.size());
    neighbors_.resize(elements_.size());
    spheres_.assign(static_cast<std::size_t>(radius_) + 1, 0);
    for (std::size_t i = 0; i < elements_.size(); ++i) {
      nodes_[i].norm = norms[i];
      ++spheres_[norms[i]];
      for (Letter s : alphabet) {
        auto it = index_.find(right_mul(elements_[i], s));
        std::int64_t j =
            it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
        neighbors_[i][static_cast<unsigned>(s)] = j;
        if (j >= 0 && norms[j] + 1 == norms[i]) nodes_[i].s_minus.add(s);
      }
      // bipartite + 3-regular: ascent letters are exactly the complement
      nodes_[i].s_plus = nodes_[i].s_minus.complement();
    }
  }

  int radius_;
  std::vector<GroupElement> elements_;
  std::unordered_map<GroupElement, std::uint32_t> index_;
  std::vector<NodeRecord> nodes_;
  std::vector<std::array<std::int64_t, 3>> neighbors_;
  std::vector<std::uint32_t> spheres_;
};

// --- combinatorial Laplacian -------------------------------------------------

/**
 * (Delta h)_g = 3 h_g - sum_{s in {r,u,u^-1}} h_{gs}, with h extended by
 * zero outside the ball. h is indexed by ball node index.
 */
inline std::vector<double> apply_laplacian(std::span<double const> h,
                                           Ball const& ball) {
  if (h.size() != ball.size())
    throw std::invalid_argument("function size does not match ball size");
  std::vector<double> out(h.size());
  for (std::uint32_t i = 0; i < h.size(); ++i) {
    double acc = 3.0 * h[i];
    for (Letter s : alphabet) {
      std::int64_t j = ball.neighbor(i, s);
      if (j >= 0) acc -= h[static_cast<std::size_t>(j)];
    }
    out[i] = acc;
  }
  return out;
}

// --- geodesic counting --------------------------------------------------------

/// Number of geodesic words per node, by descent: the identity has one
/// (the empty word), every other node sums its predecessors' counts.
inline std::vector<std::uint64_t> geodesic_counts(Ball const& ball) {
  std::vector<std::uint64_t> geo(ball.size(), 0);
  geo[0] = 1;
  for (std::uint32_t i = 1; i < ball.size(); ++i) {
    for (Letter s : ball.node(i).s_minus.letters())
      geo[i] += geo[static_cast<std::size_t>(ball.neighbor(i, s))];
  }
  return geo;
}

/// Total geodesic words of each length n <= radius.
inline std::vector<std::uint64_t> geodesic_word_counts(Ball const& ball) {
  std::vector<std::uint64_t> out(static_cast<std::size_t>(ball.radius()) + 1,
                                 0);
  auto geo = geodesic_counts(ball);
  for (std::uint32_t i = 0; i < ball.size(); ++i)
    out[ball.norm_at(i)] += geo[i];
  return out;
}

// --- exports -------------------------------------------------------------------

/**
 * One line per node, in BFS order:
 *   matrix(a,b,c,d) norm s_minus s_plus
 * Letter sets print in canonical order, "-" when empty; the ascent set of
 * a boundary node prints as "?" since its successors were not expanded.
 */
inline void write_ball_records(std::ostream& os, Ball const& ball) {
  for (std::uint32_t i = 0; i < ball.size(); ++i) {
    NodeRecord const& nd = ball.node(i);
    os << to_string(ball.element(i)) << ' ' << nd.norm << ' '
       << nd.s_minus.to_string() << ' '
       << (ball.is_interior(i) ? nd.s_plus.to_string() : std::string("?"))
       << '\n';
  }
}

inline void write_sphere_csv(std::ostream& os, Ball const& ball) {
  os << "n,count\n";
  auto const& s = ball.sphere_sizes();
  for (std::size_t n = 0; n < s.size(); ++n) os << n << ',' << s[n] << '\n';
}

/// Graphviz export; meant for small balls (the CLI caps it at radius 6).
inline void write_dot(std::ostream& os, Ball const& ball) {
  os << "graph ball_r" << ball.radius() << " {\n";
  for (std::uint32_t i = 0; i < ball.size(); ++i) {
    Matrix2 const& m = ball.element(i).m;
    os << "  n" << i << " [label=\"" << m.a << ',' << m.b << ',' << m.c << ','
       << m.d << "\"];\n";
  }
  for (std::uint32_t i = 0; i < ball.size(); ++i) {
    for (Letter s : alphabet) {
      std::int64_t j = ball.neighbor(i, s);
      if (j < 0) continue;
      // emit each undirected edge once: u-edges from their u end,
      // r-edges from the lower index
      if (s == Letter::Uinv ||
          (s == Letter::R && j < static_cast<std::int64_t>(i)))
        continue;
      os << "  n" << i << " -- n" << j << " [label=\"" << letter_char(s)
         << "\"];\n";
    }
  }
  os << "}\n";
}

}  // namespace psl2z
