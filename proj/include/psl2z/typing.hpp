#pragma once

/**
 * @file typing.hpp
 * @brief Cone types from level-2 suffix data and the successor automaton.
 *
 * S2*(g) determines how the geodesic cone continues past g. Exactly
 * fourteen concrete suffix sets occur, falling into six types:
 *
 *   0: {}            (identity)          3: {a} or {a a}
 *   1: {r}                               4: {ra} or {ra, aa}
 *   2: {ar}                              5: {ra, (a^-1)r}
 *
 * with a either u or u^-1. The type alone fixes the multiset of successor
 * types; verify_compatibility certifies that node by node, along with the
 * finer suffix-set transition diagram, and extract_transition_table
 * recovers the table from a ball with no prior knowledge of it.
 */

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>

#include "psl2z/ball.hpp"
#include "psl2z/threading.hpp"

namespace psl2z {

inline constexpr int type_count = 6;

namespace detail {

inline SuffixProfile make_profile(std::initializer_list<char const*> words) {
  SuffixProfile p;
  for (char const* w : words) p.suffixes.push_back(parse_word(w));
  std::sort(p.suffixes.begin(), p.suffixes.end());
  p.level = p.suffixes.empty() ? 0
            : p.suffixes.front().size() == 1 ? 1
                                             : 2;
  return p;
}

/// The complete suffix-set catalogue with its type for each entry.
inline std::vector<std::pair<SuffixProfile, int>> const& profile_catalogue() {
  static std::vector<std::pair<SuffixProfile, int>> const table = {
      {make_profile({}), 0},
      {make_profile({"r"}), 1},
      {make_profile({"ur"}), 2},
      {make_profile({"Ur"}), 2},
      {make_profile({"u"}), 3},
      {make_profile({"U"}), 3},
      {make_profile({"uu"}), 3},
      {make_profile({"UU"}), 3},
      {make_profile({"ru"}), 4},
      {make_profile({"rU"}), 4},
      {make_profile({"ru", "uu"}), 4},
      {make_profile({"rU", "UU"}), 4},
      {make_profile({"ru", "Ur"}), 5},
      {make_profile({"rU", "ur"}), 5},
  };
  return table;
}

}  // namespace detail

/// Type of a suffix profile, or -1 when it falls outside the catalogue.
inline int classify_profile_or(SuffixProfile const& p) {
  for (auto const& [profile, type] : detail::profile_catalogue())
    if (profile == p) return type;
  return -1;
}

inline int classify_profile(SuffixProfile const& p) {
  int t = classify_profile_or(p);
  if (t < 0)
    throw std::logic_error("suffix profile falls outside the catalogue");
  return t;
}

inline int type_at(Ball const& ball, std::uint32_t i) {
  return classify_profile(ball.suffix_profile(i));
}

inline int type_of(GroupElement const& g, Ball const& ball) {
  return type_at(ball, ball.index_of(g));
}

/**
 * Sorted multiset of successor types T(gs), s in s_plus(g). Needs every
 * successor inside the ball, so g must be interior.
 */
inline std::vector<int> successor_types(Ball const& ball, std::uint32_t i) {
  if (!ball.is_interior(i))
    throw std::out_of_range("successor types need an interior node");
  std::vector<int> out;
  for (Letter s : ball.node(i).s_plus.letters())
    out.push_back(
        type_at(ball, static_cast<std::uint32_t>(ball.neighbor(i, s))));
  std::sort(out.begin(), out.end());
  return out;
}

// --- successor automaton -------------------------------------------------------

struct TransitionTable {
  std::array<std::vector<int>, type_count> rows;  ///< sorted multisets

  bool operator==(TransitionTable const&) const = default;
};

/// The certified table: 0 -> {1,3,3}, 1 -> {4,4}, 2 -> {4,5}, 3 -> {2,3},
/// 4 -> {3,5}, 5 -> {4}.
inline TransitionTable expected_transition_table() {
  return TransitionTable{{{{1, 3, 3}, {4, 4}, {4, 5}, {2, 3}, {3, 5}, {4}}}};
}

/**
 * Recover the table by scanning every node whose successors the ball
 * contains (norm <= radius - 1). Needs radius >= 4: type 5 first occurs at
 * norm 3. Same-type nodes with different successor multisets would falsify
 * the cone-type property and throw.
 */
inline TransitionTable extract_transition_table(Ball const& ball) {
  if (ball.radius() < 4)
    throw std::invalid_argument(
        "transition table extraction needs radius >= 4");
  TransitionTable out;
  std::array<bool, type_count> seen{};
  for (std::uint32_t i = 0; i < ball.size(); ++i) {
    if (!ball.is_interior(i)) continue;
    int t = type_at(ball, i);
    std::vector<int> row = successor_types(ball, i);
    if (!seen[t]) {
      seen[t] = true;
      out.rows[t] = std::move(row);
    } else if (out.rows[t] != row) {
      throw std::logic_error("same-type nodes disagree on successor types");
    }
  }
  for (bool s : seen)
    if (!s) throw std::logic_error("a type is uninhabited; ball too small");
  return out;
}

/**
 * Element counts per norm predicted by the automaton. Each type-j node of
 * positive norm has 3 - |row j| predecessors (3-regular and bipartite), so
 * incoming edge counts divide exactly by that; a remainder would falsify
 * the table and throws.
 */
inline std::vector<std::uint64_t> automaton_sphere_counts(
    TransitionTable const& table, int n_max) {
  if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
  std::array<std::uint64_t, type_count> count{};
  count[0] = 1;
  std::vector<std::uint64_t> out{1};
  for (int n = 0; n < n_max; ++n) {
    std::array<std::uint64_t, type_count> edges{};
    for (int t = 0; t < type_count; ++t)
      for (int j : table.rows[t]) edges[static_cast<std::size_t>(j)] += count[t];
    std::array<std::uint64_t, type_count> next{};
    std::uint64_t total = 0;
    for (int j = 1; j < type_count; ++j) {
      auto preds =
          static_cast<std::uint64_t>(3 - static_cast<int>(table.rows[j].size()));
      if (preds == 0 || edges[j] % preds != 0)
        throw std::logic_error("edge count does not divide by in-degree");
      next[j] = edges[j] / preds;
      total += next[j];
    }
    count = next;
    out.push_back(total);
  }
  return out;
}

/// Raw path counts through the automaton: the number of geodesic *words*
/// of each length (elements with several geodesics are counted once per
/// geodesic, so this majorizes the sphere sizes).
inline std::vector<std::uint64_t> automaton_path_counts(
    TransitionTable const& table, int n_max) {
  if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
  std::array<std::uint64_t, type_count> count{};
  count[0] = 1;
  std::vector<std::uint64_t> out{1};
  for (int n = 0; n < n_max; ++n) {
    std::array<std::uint64_t, type_count> next{};
    std::uint64_t total = 0;
    for (int t = 0; t < type_count; ++t)
      for (int j : table.rows[t]) {
        next[static_cast<std::size_t>(j)] += count[t];
        total += count[t];
      }
    count = next;
    out.push_back(total);
  }
  return out;
}

// --- suffix-set transition diagram ---------------------------------------------

namespace detail {

inline char ch(Letter s) { return letter_char(s); }

/**
 * Expected multiset of successor suffix sets, instantiated at the concrete
 * letter a appearing in the profile:
 *
 *   {}        -> {r}, {a}, {a^-1}        {aa}      -> {ar}, {aa}
 *   {r}       -> {ra}, {ra^-1}           {ra}      -> {ar, ra^-1}, {aa}
 *   {a}       -> {ar}, {aa}              {ra, aa}  -> {ar, ra^-1}, {aa}
 *   {ar}      -> {ra, a^-1 r}, {ra^-1}   {ra, a^-1 r} -> {ra, aa}
 */
inline std::vector<SuffixProfile> expected_successor_profiles(
    SuffixProfile const& p) {
  auto mk = [](std::string const& a, std::string const& b = {},
               std::string const& c = {}) {
    std::vector<char const*> words{a.c_str()};
    if (!b.empty()) words.push_back(b.c_str());
    if (!c.empty()) words.push_back(c.c_str());
    SuffixProfile out;
    for (char const* w : words) out.suffixes.push_back(parse_word(w));
    std::sort(out.suffixes.begin(), out.suffixes.end());
    out.level = out.suffixes.front().size() == 1 ? 1 : 2;
    return out;
  };

  if (p.level == 0) return {mk("r"), mk("u"), mk("U")};
  Word const& first = p.suffixes.front();
  if (p.level == 1) {
    if (first[0] == Letter::R) return {mk("ru"), mk("rU")};
    // {a} -> {ar}, {aa}
    char a = ch(first[0]);
    return {mk(std::string{a, 'r'}), mk(std::string{a, a})};
  }

  // level 2: recover a from the shape
  auto profile_is = [&](std::initializer_list<char const*> words) {
    return p == make_profile(words);
  };
  Letter a;
  enum class Shape { ar, aa, ra, ra_aa, ra_ainvr } shape;
  if (profile_is({"ur"}) || profile_is({"Ur"})) {
    shape = Shape::ar;
    a = first[0];
  } else if (profile_is({"uu"}) || profile_is({"UU"})) {
    shape = Shape::aa;
    a = first[0];
  } else if (profile_is({"ru"}) || profile_is({"rU"})) {
    shape = Shape::ra;
    a = first[1];
  } else if (profile_is({"ru", "uu"}) || profile_is({"rU", "UU"})) {
    shape = Shape::ra_aa;
    a = first[1];
  } else if (profile_is({"ru", "Ur"}) || profile_is({"rU", "ur"})) {
    shape = Shape::ra_ainvr;
    // sorted order puts the r-initial word first; a is its second letter
    a = first[1];
  } else {
    throw std::logic_error("suffix profile falls outside the catalogue");
  }

  char const A = ch(a);
  char const B = ch(inverse(a));
  switch (shape) {
    case Shape::ar:  // {ar} -> {ra, a^-1 r}, {r a^-1}
      return {mk(std::string{'r', A}, std::string{B, 'r'}),
              mk(std::string{'r', B})};
    case Shape::aa:  // {aa} -> {ar}, {aa}
      return {mk(std::string{A, 'r'}), mk(std::string{A, A})};
    case Shape::ra:     // {ra} -> {ar, r a^-1}, {aa}
    case Shape::ra_aa:  // {ra, aa} -> same successors
      return {mk(std::string{A, 'r'}, std::string{'r', B}),
              mk(std::string{A, A})};
    case Shape::ra_ainvr:  // {ra, a^-1 r} -> {ra, aa}
      return {mk(std::string{'r', A}, std::string{A, A})};
  }
  throw std::logic_error("unreachable");
}

}  // namespace detail

// --- verification sweeps ---------------------------------------------------------

struct Counterexample {
  GroupElement element;
  std::string detail;
};

struct CompatibilityReport {
  int radius = 0;
  int margin = 0;
  std::size_t nodes_checked = 0;
  std::array<std::uint64_t, type_count> type_counts{};
  TransitionTable observed;  ///< rows from the first node of each type
  std::vector<Counterexample> counterexamples;
  bool pass = false;
};

namespace detail {

inline std::string int_list(std::vector<int> const& v) {
  std::string out = "{";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(v[i]);
  }
  return out + "}";
}

inline std::string profile_string(SuffixProfile const& p) {
  std::string out = "{";
  for (std::size_t i = 0; i < p.suffixes.size(); ++i) {
    if (i) out += ",";
    out += format_word(p.suffixes[i]);
  }
  return out + "}";
}

}  // namespace detail

/**
 * Certify the cone-type property on every node with the given margin:
 * the type determines the successor-type multiset per `expected`, and the
 * suffix-set diagram matches at the finer per-profile level. Sweeps are
 * chunked across threads; reports merge in index order, so the result is
 * identical for every thread count.
 */
inline CompatibilityReport verify_compatibility(
    Ball const& ball, TransitionTable const& expected, int margin = 2,
    int threads = 1) {
  if (ball.radius() < 3)
    throw std::invalid_argument("compatibility sweep needs radius >= 3");
  if (margin < 1) throw std::invalid_argument("margin must be >= 1");

  // BFS order sorts nodes by norm, so the scan set is a prefix
  std::size_t n_scan = 0;
  for (std::uint32_t i = 0; i < ball.size(); ++i)
    if (ball.norm_at(i) + static_cast<std::uint32_t>(margin) <=
        static_cast<std::uint32_t>(ball.radius()))
      ++n_scan;

  struct Chunk {
    std::array<std::uint64_t, type_count> type_counts{};
    std::array<std::optional<std::pair<std::uint32_t, std::vector<int>>>,
               type_count>
        first_rows;
    std::vector<Counterexample> counterexamples;
  };
  std::vector<Chunk> chunks(
      std::max<std::size_t>(1, std::min<std::size_t>(
                                   static_cast<std::size_t>(threads), n_scan)));

  detail::parallel_chunks(
      n_scan, threads, [&](std::size_t c, std::size_t begin, std::size_t end) {
        Chunk& chunk = chunks[c];
        for (std::size_t i = begin; i < end; ++i) {
          auto node = static_cast<std::uint32_t>(i);
          SuffixProfile profile = ball.suffix_profile(node);
          int t = classify_profile_or(profile);
          if (t < 0) {
            chunk.counterexamples.push_back(
                {ball.element(node), "suffix set " +
                                         detail::profile_string(profile) +
                                         " outside the catalogue"});
            continue;
          }
          ++chunk.type_counts[static_cast<std::size_t>(t)];

          std::vector<int> row = successor_types(ball, node);
          if (!chunk.first_rows[t]) chunk.first_rows[t] = {node, row};
          if (row != expected.rows[static_cast<std::size_t>(t)])
            chunk.counterexamples.push_back(
                {ball.element(node),
                 "type " + std::to_string(t) + " successors " +
                     detail::int_list(row) + ", expected " +
                     detail::int_list(expected.rows[static_cast<std::size_t>(t)])});

          // finer check: the suffix-set diagram itself
          std::vector<SuffixProfile> got;
          for (Letter s : ball.node(node).s_plus.letters())
            got.push_back(ball.suffix_profile(
                static_cast<std::uint32_t>(ball.neighbor(node, s))));
          std::vector<SuffixProfile> want =
              detail::expected_successor_profiles(profile);
          auto key = [](SuffixProfile const& p) {
            return detail::profile_string(p);
          };
          auto by_key = [&](SuffixProfile const& x, SuffixProfile const& y) {
            return key(x) < key(y);
          };
          std::sort(got.begin(), got.end(), by_key);
          std::sort(want.begin(), want.end(), by_key);
          if (got != want) {
            std::string msg = "suffix diagram: " +
                              detail::profile_string(profile) + " -> ";
            for (auto const& q : got) msg += detail::profile_string(q);
            msg += ", expected ";
            for (auto const& q : want) msg += detail::profile_string(q);
            chunk.counterexamples.push_back({ball.element(node), msg});
          }
        }
      });

  CompatibilityReport report;
  report.radius = ball.radius();
  report.margin = margin;
  report.nodes_checked = n_scan;
  std::array<std::optional<std::pair<std::uint32_t, std::vector<int>>>,
             type_count>
      first_rows;
  for (Chunk const& chunk : chunks) {
    for (int t = 0; t < type_count; ++t) {
      report.type_counts[t] += chunk.type_counts[t];
      if (chunk.first_rows[t] &&
          (!first_rows[t] ||
           chunk.first_rows[t]->first < first_rows[t]->first))
        first_rows[t] = chunk.first_rows[t];
    }
    report.counterexamples.insert(report.counterexamples.end(),
                                  chunk.counterexamples.begin(),
                                  chunk.counterexamples.end());
  }
  for (int t = 0; t < type_count; ++t)
    if (first_rows[t]) report.observed.rows[t] = first_rows[t]->second;
  report.pass = report.counterexamples.empty();
  return report;
}

struct ForbiddenSuffixReport {
  int radius = 0;
  std::size_t nodes_checked = 0;
  std::vector<Counterexample> counterexamples;
  bool pass = false;
};

/**
 * No interior node's suffix data may contain u with u^-1, ur with u^-1 r,
 * ar with (a^-1)(a^-1), or ar with a; and every S2* must lie in the
 * catalogue.
 */
inline ForbiddenSuffixReport verify_forbidden_suffixes(Ball const& ball,
                                                       int threads = 1) {
  std::size_t n_scan = 0;
  for (std::uint32_t i = 0; i < ball.size(); ++i)
    if (ball.is_interior(i)) ++n_scan;

  std::vector<std::vector<Counterexample>> found(
      std::max<std::size_t>(1, std::min<std::size_t>(
                                   static_cast<std::size_t>(threads), n_scan)));

  detail::parallel_chunks(
      n_scan, threads, [&](std::size_t c, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
          auto node = static_cast<std::uint32_t>(i);
          LetterSet s1 = ball.suffix_letters(node);
          SuffixProfile p = ball.suffix_profile(node);
          auto bad = [&](std::string const& what) {
            found[c].push_back({ball.element(node),
                                "forbidden suffix pair " + what + " in " +
                                    detail::profile_string(p)});
          };
          if (s1.contains(Letter::U) && s1.contains(Letter::Uinv))
            bad("{u, U}");
          if (p.level == 2) {
            auto has = [&](char const* w) {
              Word needle = parse_word(w);
              return std::find(p.suffixes.begin(), p.suffixes.end(),
                               needle) != p.suffixes.end();
            };
            if (has("ur") && has("Ur")) bad("{ur, Ur}");
            if (has("ur") && has("UU")) bad("{ur, UU}");
            if (has("Ur") && has("uu")) bad("{Ur, uu}");
            if (has("ur") && s1.contains(Letter::U)) bad("{ur, u}");
            if (has("Ur") && s1.contains(Letter::Uinv)) bad("{Ur, U}");
          }
          if (classify_profile_or(p) < 0)
            found[c].push_back({ball.element(node),
                                "suffix set " + detail::profile_string(p) +
                                    " outside the catalogue"});
        }
      });

  ForbiddenSuffixReport report;
  report.radius = ball.radius();
  report.nodes_checked = n_scan;
  for (auto const& chunk : found)
    report.counterexamples.insert(report.counterexamples.end(), chunk.begin(),
                                  chunk.end());
  report.pass = report.counterexamples.empty();
  return report;
}

}  // namespace psl2z
