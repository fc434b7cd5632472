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

#ifndef MENUSEL_SOLVERS_HPP
#define MENUSEL_SOLVERS_HPP

// Stable-menu-finding procedures: exhaustive enumeration (the ground-truth
// oracle for small instances), the add/remove greedy walk with cycle
// detection, recovery of a stable pair from a four-good greedy cycle, and
// the constructive solvers for the popularity and cyclic-structure regimes.

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <variant>
#include <vector>

#include "menusel/model.hpp"
#include "menusel/reductions.hpp"
#include "menusel/stability.hpp"

namespace menusel {

// All stable menus, ordered by size then lexicographically. Exhaustive over
// all 2^g menus, hence the good-count limit.
inline std::vector<Menu> enumerate_stable(const Problem& p,
                                          const StabilityParams& params,
                                          int max_goods = 20) {
  if (p.num_goods > max_goods)
    throw std::invalid_argument("enumerate_stable: instance has " +
                                std::to_string(p.num_goods) +
                                " goods, limit is " + std::to_string(max_goods));
  std::vector<Menu> out;
  for (int k = 0; k <= p.num_goods; ++k) {
    detail::for_each_menu_of_size(p.num_goods, k, [&](const Menu& o) {
      if (is_stable(p, o, params).stable) out.push_back(o);
    });
  }
  return out;
}

struct GreedyStep {
  Menu from_menu;
  bool added = false;  // false: good removed
  Good good = kOutside;
  Menu to_menu;

  friend bool operator==(const GreedyStep&, const GreedyStep&) = default;
};

struct GreedyStable {
  Menu menu;
  std::vector<GreedyStep> steps;
};

struct GreedyCycle {
  std::vector<GreedyStep> prefix;
  std::vector<GreedyStep> cycle;  // first from_menu == last to_menu
};

using GreedyOutcome = std::variant<GreedyStable, GreedyCycle>;

// Repeatedly repair the current menu: drop the minimal under-served good if
// the menu is infeasible, otherwise admit the minimal good with a lobby of u.
// Stops on a stable menu, or reports the cycle once a menu repeats.
inline GreedyOutcome greedy(const Problem& p, const StabilityParams& params,
                            const Menu& init = Menu{},
                            std::int64_t max_steps = 1 << 20) {
  if (max_steps < 1) throw std::invalid_argument("greedy: max_steps must be >= 1");
  std::vector<GreedyStep> steps;
  std::unordered_map<std::uint32_t, std::size_t> first_seen;
  Menu current = init;
  first_seen[current.raw_bits()] = 0;
  while (static_cast<std::int64_t>(steps.size()) < max_steps) {
    GreedyStep step;
    step.from_menu = current;
    CheckResult feas = is_feasible(p, current, params.t);
    if (!feas.ok) {
      step.added = false;
      step.good = feas.witnesses.front().good;  // witnesses are ascending
      step.to_menu = current.without(step.good);
    } else {
      CheckResult unc = is_uncontestable(p, current, params.u);
      if (unc.ok) return GreedyStable{current, std::move(steps)};
      step.added = true;
      step.good = unc.witnesses.front().good;
      step.to_menu = current.with(step.good);
    }
    current = step.to_menu;
    steps.push_back(step);
    auto [it, fresh] = first_seen.try_emplace(current.raw_bits(), steps.size());
    if (!fresh) {
      std::size_t split = it->second;
      GreedyCycle cycle;
      cycle.prefix.assign(steps.begin(), steps.begin() + split);
      cycle.cycle.assign(steps.begin() + split, steps.end());
      return cycle;
    }
  }
  throw std::runtime_error("greedy: max_steps exhausted without repeat");
}

// When a four-good greedy cycle alternates singletons and pairs
// {j1},{j1,j2},{j2},...,{j4,j1}, the two diagonals {j1,j3} and {j2,j4} are
// the stable candidates. Each is re-verified against the instance before
// being returned; the transcript alone is not trusted.
inline std::vector<Menu> recover_from_cycle(const Problem& p,
                                            const StabilityParams& params,
                                            const std::vector<GreedyStep>& cycle) {
  const auto bad_shape = [] {
    return std::invalid_argument(
        "recover_from_cycle: cycle not of alternating 1-2 length-4 shape");
  };
  if (cycle.size() != 8) throw bad_shape();
  if (!(cycle.back().to_menu == cycle.front().from_menu)) throw bad_shape();
  for (std::size_t i = 0; i + 1 < cycle.size(); ++i)
    if (!(cycle[i].to_menu == cycle[i + 1].from_menu)) throw bad_shape();

  // Rotate so the walk starts on a singleton.
  std::size_t start = cycle.front().from_menu.size() == 1 ? 0 : 1;
  if (cycle[start].from_menu.size() != 1) throw bad_shape();
  std::vector<Good> singles;
  for (std::size_t i = 0; i < 8; i += 2) {
    const Menu& single = cycle[(start + i) % 8].from_menu;
    const Menu& pair = cycle[(start + i + 1) % 8].from_menu;
    if (single.size() != 1 || pair.size() != 2 || !single.subset_of(pair))
      throw bad_shape();
    singles.push_back(single.goods().front());
  }
  for (std::size_t i = 0; i < 4; ++i) {
    const Menu& pair = cycle[(start + 2 * i + 1) % 8].from_menu;
    Menu expect = Menu{singles[i], singles[(i + 1) % 4]};
    if (!(pair == expect)) throw bad_shape();
    for (std::size_t r = i + 1; r < 4; ++r)
      if (singles[i] == singles[r]) throw bad_shape();
  }

  std::vector<Menu> verified;
  for (const Menu& candidate :
       {Menu{singles[0], singles[2]}, Menu{singles[1], singles[3]}})
    if (is_stable(p, candidate, params).stable) verified.push_back(candidate);
  std::sort(verified.begin(), verified.end(), menu_size_lex_less);
  if (verified.empty())
    throw std::runtime_error(
        "recover_from_cycle: both diagonal candidates failed verification");
  return verified;
}

struct SolveResult {
  Menu menu;
  StabilityVerdict verdict;
};

// Offer every good that is the favorite of t agents; if none qualifies,
// offer the minimal good with a full lobby against the empty menu, or
// nothing. Guaranteed stable once u-1 >= (g-1)(t-1); the verdict reports
// what actually happened either way.
inline SolveResult solve_simple(const Problem& p, const StabilityParams& params) {
  Menu popular;
  for (Good j = 1; j <= p.num_goods; ++j)
    if (count_top(p, j) >= params.t) popular = popular.with(j);
  Menu chosen;
  if (!popular.empty()) {
    chosen = popular;
  } else if (!is_uncontestable(p, Menu{}, params.u).ok) {
    for (Good j = 1; j <= p.num_goods; ++j) {
      if (lobby_size(p, j, Menu{}) >= params.u) {
        chosen = Menu{j};
        break;
      }
    }
  }
  return {chosen, is_stable(p, chosen, params)};
}

// Strip rarely ranked goods, force the popular ones, then look for a small
// stable menu in what is left: the empty menu, an uncontested singleton, or
// a feasible pair, in that order. Every hit is mapped back and re-verified
// against the original instance. Guaranteed to find a menu when g >= 4 and
// u-1 >= (g-2)(t-1).
inline std::optional<Menu> solve_gminus2(const Problem& p,
                                         const StabilityParams& params) {
  ReductionMap rare = reduce_rarely_ranked(p, params.t);
  ReductionMap pop = reduce_popular(rare.reduced, params.t);
  const Problem& core = pop.reduced;

  const auto verified = [&](const Menu& candidate) -> std::optional<Menu> {
    Menu original = rare.forward(pop.forward(candidate));
    if (is_stable(p, original, params).stable) return original;
    return std::nullopt;
  };

  if (is_uncontestable(core, Menu{}, params.u).ok)
    if (auto hit = verified(Menu{})) return hit;

  for (Good j = 1; j <= core.num_goods; ++j) {
    if (pop.forced.contains(j)) continue;
    if (is_uncontestable(core, Menu{j}, params.u).ok)
      if (auto hit = verified(Menu{j})) return hit;
  }

  for (Good i = 1; i <= core.num_goods; ++i) {
    if (pop.forced.contains(i)) continue;
    for (Good j = i + 1; j <= core.num_goods; ++j) {
      if (pop.forced.contains(j)) continue;
      if (is_feasible(core, Menu{i, j}, params.t).ok)
        if (auto hit = verified(Menu{i, j})) return hit;
    }
  }
  return std::nullopt;
}

// Split of the agents against a cyclically ordered good list j1..jm: an
// agent is regular with favorite jk when jk tops their list and they prefer
// j_{i+1} to j_i in every cyclic slot except the one at their favorite.
struct RegularSplit {
  std::vector<std::int64_t> favorite_counts;  // x_k, 1-based slot k-1
  std::int64_t irregular = 0;
};

inline RegularSplit classify_regular(const Problem& p,
                                     const std::vector<Good>& gprime) {
  const int m = static_cast<int>(gprime.size());
  if (m < 2 || m > p.num_goods)
    throw std::invalid_argument("classify_regular: need 2 <= |gprime| <= num_goods");
  std::vector<int> slot(p.num_goods + 1, -1);  // good -> 0-based slot
  for (int k = 0; k < m; ++k) {
    Good j = gprime[k];
    if (j < 1 || j > p.num_goods || slot[j] >= 0)
      throw std::invalid_argument("classify_regular: gprime entries must be distinct goods");
    slot[j] = k;
  }
  RegularSplit split;
  split.favorite_counts.assign(m, 0);
  for (const auto& group : p.groups) {
    const PreferenceList& prefs = group.prefs;
    int fav_slot = prefs.empty() ? -1 : slot[prefs.ranked.front()];
    bool regular = fav_slot >= 0;
    for (int i = 0; regular && i < m; ++i) {
      if (i == fav_slot) continue;
      if (!prefs.prefers(gprime[(i + 1) % m], gprime[i])) regular = false;
    }
    if (regular)
      split.favorite_counts[fav_slot] += group.count;
    else
      split.irregular += group.count;
  }
  return split;
}

// Sweep the cyclic order once, carrying a pending good; whenever the regular
// agents accumulated since the pending good reach t, offer it and restart the
// accumulator past the current slot. The final pending good stays unoffered.
inline SolveResult structured_solve(const Problem& p,
                                    const std::vector<Good>& gprime,
                                    const StabilityParams& params) {
  RegularSplit split = classify_regular(p, gprime);
  const int m = static_cast<int>(gprime.size());
  Menu menu;
  int pending = 1;
  std::int64_t acc = split.favorite_counts[0];  // x_pending + ... + x_k
  for (int k = 2; k <= m; ++k) {
    acc += split.favorite_counts[k - 1];
    if (acc >= params.t) {
      menu = menu.with(gprime[pending - 1]);
      pending = k + 1;
      acc = 0;
    }
  }
  return {menu, is_stable(p, menu, params)};
}

// Hunts for the cyclic structure that blocks all small menus: after forcing
// the popular goods, each remaining good k is mapped to the minimal good
// with a u-strong pairwise lobby over k. Walking that map from the minimal
// good, the first closed cycle is returned. If some good has no such
// successor the structure is absent.
inline std::optional<std::vector<Good>> find_structure(
    const Problem& p, const StabilityParams& params) {
  ReductionMap pop = reduce_popular(p, params.t);
  const Problem& core = pop.reduced;
  std::vector<Good> alive;
  for (Good j = 1; j <= core.num_goods; ++j)
    if (!pop.forced.contains(j)) alive.push_back(j);
  if (alive.empty()) return std::nullopt;

  std::vector<Good> succ(core.num_goods + 1, kOutside);
  for (Good k : alive) {
    for (Good j : alive) {
      if (j == k) continue;
      if (pairwise(core, j, k) >= params.u) {
        succ[k] = j;
        break;
      }
    }
    if (succ[k] == kOutside) return std::nullopt;
  }

  std::vector<int> seen_at(core.num_goods + 1, -1);
  std::vector<Good> path;
  Good cur = alive.front();
  while (seen_at[cur] < 0) {
    seen_at[cur] = static_cast<int>(path.size());
    path.push_back(cur);
    cur = succ[cur];
  }
  return std::vector<Good>(path.begin() + seen_at[cur], path.end());
}

}  // namespace menusel

#endif  // MENUSEL_SOLVERS_HPP
