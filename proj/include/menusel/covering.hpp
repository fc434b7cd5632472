// Copyright 2026 The Menusel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MENUSEL_COVERING_HPP
#define MENUSEL_COVERING_HPP

// Cohort-vector view of the problem: fix an ordered universe of preference
// lists, encode an instance as the histogram x of its lists, and express
// "menu O is (t,u)-stable" as sign-adjusted linear inequalities A_O x >= b.
// Whether every instance over g goods has a stable menu is then the question
// of whether these per-menu polyhedra cover the nonnegative orthant, which
// emit_smtlib hands to an external solver as the search for an uncovered x.

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "menusel/model.hpp"

namespace menusel {

struct PrefUniverse {
  int g = 0;
  bool complete = false;
  std::vector<PreferenceList> prefs;
  std::map<std::vector<Good>, int> index;

  int size() const { return static_cast<int>(prefs.size()); }
  // Position of a list in the universe, or -1.
  int find(const PreferenceList& list) const {
    auto it = index.find(list.ranked);
    return it == index.end() ? -1 : it->second;
  }
};

namespace detail {

inline std::int64_t factorial(int n) {
  std::int64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// The cyclic shift pairing slot k of the tail universe with the goods other
// than i: f_i(k) = ((k + i - 1) mod g) + 1, a bijection [g-1] -> G \ {i}.
inline Good cyclic_lift(int g, Good i, int k) {
  return (k + i - 1) % g + 1;
}
inline int cyclic_drop(int g, Good i, Good a) {
  return ((a - i) % g + g) % g;  // inverse of cyclic_lift, in 1..g-1 for a != i
}

// Complete orders in the recursive block ordering: entry (i1-1)(g-1)!+i2
// starts with i1 and continues with the i2-th tail over the remaining goods,
// relabeled through cyclic_lift. This is the ordering the recursive matrix
// construction below relies on.
inline std::vector<PreferenceList> lex_cyclic_orders(int g) {
  if (g == 1) return {PreferenceList{1}};
  std::vector<PreferenceList> tails = lex_cyclic_orders(g - 1);
  std::vector<PreferenceList> out;
  out.reserve(factorial(g));
  for (Good i1 = 1; i1 <= g; ++i1) {
    for (const PreferenceList& tail : tails) {
      PreferenceList list{i1};
      for (Good k : tail.ranked) list.ranked.push_back(cyclic_lift(g, i1, k));
      out.push_back(std::move(list));
    }
  }
  return out;
}

inline void distinct_prefixes(int g, int len, std::vector<Good>& acc,
                              std::uint32_t used,
                              std::vector<PreferenceList>& out) {
  if (static_cast<int>(acc.size()) == len) {
    out.push_back(PreferenceList{std::vector<Good>(acc)});
    return;
  }
  for (Good j = 1; j <= g; ++j) {
    if (used & (1u << j)) continue;
    acc.push_back(j);
    distinct_prefixes(g, len, acc, used | (1u << j), out);
    acc.pop_back();
  }
}

}  // namespace detail

// complete=true: the g! full orders in the recursive block ordering.
// complete=false: all sum_{k=0..g} g!/k! distinct-prefix lists (the empty
// list included), by length ascending then lexicographically.
inline PrefUniverse pref_universe(int g, bool complete) {
  if (g < 1) throw std::invalid_argument("pref_universe: needs g >= 1");
  PrefUniverse u;
  u.g = g;
  u.complete = complete;
  if (complete) {
    u.prefs = detail::lex_cyclic_orders(g);
  } else {
    std::vector<Good> acc;
    for (int len = 0; len <= g; ++len)
      detail::distinct_prefixes(g, len, acc, 0, u.prefs);
  }
  for (int i = 0; i < u.size(); ++i) u.index.emplace(u.prefs[i].ranked, i);
  return u;
}

// Histogram of an instance's lists over the universe. Entries sum to n.
using CohortVector = std::vector<std::int64_t>;

inline CohortVector cohort_vector(const Problem& p, const PrefUniverse& universe) {
  if (p.num_goods != universe.g)
    throw std::invalid_argument("cohort_vector: good count mismatch");
  CohortVector x(universe.size(), 0);
  for (const auto& group : p.groups) {
    int idx = universe.find(group.prefs);
    if (idx < 0)
      throw std::invalid_argument("cohort_vector: preference list not in universe");
    x[idx] += group.count;
  }
  return x;
}

// 0/1 matrix with one row per good. For an offered good i the row marks the
// lists that would pick i from the menu (row . x = served count); for an
// unoffered i it marks the lists preferring i to the whole menu (row . x =
// lobby size).
struct StabilityMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::vector<std::uint8_t>> entry;

  friend bool operator==(const StabilityMatrix&, const StabilityMatrix&) = default;
};

inline StabilityMatrix matrix_A(const Menu& offered, const PrefUniverse& universe) {
  StabilityMatrix a;
  a.rows = universe.g;
  a.cols = universe.size();
  a.entry.assign(a.rows, std::vector<std::uint8_t>(a.cols, 0));
  for (int c = 0; c < a.cols; ++c) {
    const PreferenceList& list = universe.prefs[c];
    for (Good i = 1; i <= universe.g; ++i) {
      Menu rivals = offered.contains(i) ? offered.without(i) : offered;
      bool wins = false;
      for (Good k : list.ranked) {
        if (k == i) {
          wins = true;
          break;
        }
        if (rivals.contains(k)) break;
      }
      a.entry[i - 1][c] = wins ? 1 : 0;
    }
  }
  return a;
}

// Same matrix over the complete universe, assembled blockwise: every list's
// top choice contributes its own row, and for each unoffered good i the
// block of lists starting with i embeds the (g-1)-good matrix of the menu
// pulled back through the cyclic relabeling. Must agree with matrix_A.
inline StabilityMatrix matrix_A_recursive(const Menu& offered, int g) {
  StabilityMatrix a;
  a.rows = g;
  a.cols = static_cast<int>(detail::factorial(g));
  a.entry.assign(a.rows, std::vector<std::uint8_t>(a.cols, 0));
  if (g == 1) {
    a.entry[0][0] = 1;
    return a;
  }
  const int block = static_cast<int>(detail::factorial(g - 1));
  for (Good i1 = 1; i1 <= g; ++i1)
    for (int c = (i1 - 1) * block; c < i1 * block; ++c)
      a.entry[i1 - 1][c] = 1;
  for (Good i = 1; i <= g; ++i) {
    if (offered.contains(i)) continue;
    Menu pulled;
    for (Good b : offered.goods()) pulled = pulled.with(detail::cyclic_drop(g, i, b));
    StabilityMatrix sub = matrix_A_recursive(pulled, g - 1);
    for (Good row = 1; row <= g; ++row) {
      if (row == i) continue;
      int k = detail::cyclic_drop(g, i, row);
      for (int c = 0; c < block; ++c)
        a.entry[row - 1][(i - 1) * block + c] = sub.entry[k - 1][c];
    }
  }
  return a;
}

// x lies in the menu's stability polyhedron: served rows reach t and lobby
// rows stay below u.
inline bool membership(const CohortVector& x, const Menu& offered,
                       const StabilityParams& params,
                       const StabilityMatrix& a) {
  if (static_cast<int>(x.size()) != a.cols)
    throw std::invalid_argument("membership: dimension mismatch");
  for (int i = 1; i <= a.rows; ++i) {
    std::int64_t dot = 0;
    for (int c = 0; c < a.cols; ++c)
      if (a.entry[i - 1][c]) dot += x[c];
    if (offered.contains(i)) {
      if (dot < params.t) return false;
    } else {
      if (dot > params.u - 1) return false;
    }
  }
  return true;
}

inline bool membership(const CohortVector& x, const Menu& offered,
                       const StabilityParams& params,
                       const PrefUniverse& universe) {
  return membership(x, offered, params, matrix_A(offered, universe));
}

// The coefficients a*(u-1) >= b*(t-1) tying the two thresholds together in
// the emitted query.
struct RatioBound {
  std::int64_t a = 1;
  std::int64_t b = 1;
};

// Emits the counterexample hunt as SMT-LIB 2 over integers: nonnegative
// cohort variables x_i plus t and u under the ratio bound, and one assertion
// per menu stating that some stability row fails (counts capped at t-1, or a
// lobby reaching u). "unsat" therefore means every instance over g goods has
// a stable menu for all (t,u) satisfying the ratio; "sat" yields a model
// that decode_model turns back into a concrete instance.
inline std::string emit_smtlib(int g, bool complete, const RatioBound& ratio,
                               std::optional<StabilityParams> fixed = std::nullopt,
                               int max_goods = 7) {
  if (g < 1 || g > max_goods)
    throw std::invalid_argument("emit_smtlib: g must be in 1.." +
                                std::to_string(max_goods));
  if (ratio.a < 1 || ratio.b < 1)
    throw std::invalid_argument("emit_smtlib: ratio parts must be >= 1");
  PrefUniverse universe = pref_universe(g, complete);
  std::ostringstream out;
  out << "; stable-menu existence query\n";
  out << "; goods: " << g << "  universe: " << (complete ? "complete" : "all-lists")
      << "  |P|: " << universe.size() << "\n";
  if (fixed)
    out << "; fixed parameters: t=" << fixed->t << " u=" << fixed->u << "\n";
  else
    out << "; ratio: " << ratio.a << "*(u-1) >= " << ratio.b << "*(t-1)\n";
  out << "(set-logic QF_LIA)\n";
  for (int i = 0; i < universe.size(); ++i)
    out << "(declare-const x_" << i << " Int)\n";
  if (fixed) {
    out << "(define-fun t () Int " << fixed->t << ")\n";
    out << "(define-fun u () Int " << fixed->u << ")\n";
  } else {
    out << "(declare-const t Int)\n";
    out << "(declare-const u Int)\n";
  }
  for (int i = 0; i < universe.size(); ++i)
    out << "(assert (>= x_" << i << " 0))\n";
  out << "(assert (>= t 1))\n";
  out << "(assert (>= u 1))\n";
  if (!fixed)
    out << "(assert (>= (* " << ratio.a << " (- u 1)) (* " << ratio.b
        << " (- t 1))))\n";

  const auto row_sum = [&](const StabilityMatrix& a, int i) {
    std::vector<int> cols;
    for (int c = 0; c < a.cols; ++c)
      if (a.entry[i - 1][c]) cols.push_back(c);
    std::ostringstream term;
    if (cols.empty()) {
      term << "0";
    } else if (cols.size() == 1) {
      term << "x_" << cols.front();
    } else {
      term << "(+";
      for (int c : cols) term << " x_" << c;
      term << ")";
    }
    return term.str();
  };

  for (std::uint32_t mask = 0; mask < (1u << g); ++mask) {
    Menu offered = Menu::from_bits(mask);
    StabilityMatrix a = matrix_A(offered, universe);
    out << "; menu " << offered.str() << " must fail some row\n";
    out << "(assert (or";
    for (Good i = 1; i <= g; ++i) {
      if (offered.contains(i))
        out << " (<= " << row_sum(a, i) << " (- t 1))";
      else
        out << " (>= " << row_sum(a, i) << " u)";
    }
    out << "))\n";
  }
  out << "(check-sat)\n";
  out << "(get-model)\n";
  return out.str();
}

struct DecodedModel {
  Problem problem;
  StabilityParams params;
};

namespace detail {

// Minimal reader for the (define-fun NAME () Int VALUE) entries solvers
// print. Tolerates surrounding (model ...) wrappers and negative literals
// written as (- k).
inline std::map<std::string, std::int64_t> parse_model_values(const std::string& text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char ch : text) {
    if (ch == '(' || ch == ')') {
      if (!cur.empty()) tokens.push_back(cur), cur.clear();
      tokens.push_back(std::string(1, ch));
    } else if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) tokens.push_back(cur), cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) tokens.push_back(cur);

  const auto is_int = [](const std::string& s) {
    if (s.empty()) return false;
    std::size_t start = s[0] == '-' ? 1 : 0;
    if (start == s.size()) return false;
    for (std::size_t i = start; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
  };

  std::map<std::string, std::int64_t> values;
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    if (tokens[i] != "define-fun") continue;
    const std::string& name = tokens[i + 1];
    std::size_t j = i + 2;
    while (j < tokens.size() && !is_int(tokens[j])) {
      if (tokens[j] == "define-fun") break;
      ++j;
    }
    if (j >= tokens.size() || !is_int(tokens[j])) continue;
    std::int64_t value = std::stoll(tokens[j]);
    if (j >= 1 && tokens[j - 1] == "-") value = -value;
    values[name] = value;
  }
  return values;
}

}  // namespace detail

// Rebuilds the instance a sat model describes: one agent group per nonzero
// cohort entry, in universe order, with the model's (t,u) attached.
inline DecodedModel decode_model(const std::string& model_text,
                                 const PrefUniverse& universe) {
  auto values = detail::parse_model_values(model_text);
  const auto get = [&](const std::string& name) {
    auto it = values.find(name);
    if (it == values.end())
      throw std::invalid_argument("decode_model: model does not assign " + name);
    return it->second;
  };
  DecodedModel out;
  out.problem.num_goods = universe.g;
  for (int i = 0; i < universe.size(); ++i) {
    std::int64_t count = get("x_" + std::to_string(i));
    if (count < 0)
      throw std::invalid_argument("decode_model: negative cohort count");
    if (count > 0) out.problem.groups.push_back({count, universe.prefs[i]});
  }
  out.params.t = get("t");
  out.params.u = get("u");
  return out;
}

}  // namespace menusel

#endif  // MENUSEL_COVERING_HPP
