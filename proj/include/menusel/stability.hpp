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

#ifndef MENUSEL_STABILITY_HPP
#define MENUSEL_STABILITY_HPP

// Exact feasibility / uncontestability / stability predicates. Witness lists
// are exhaustive (every violator, ascending by good), never first-found, so
// results are order-independent.

#include <cstdint>
#include <vector>

#include "menusel/model.hpp"

namespace menusel {

struct Witness {
  Good good = kOutside;
  std::int64_t agents = 0;

  friend bool operator==(const Witness&, const Witness&) = default;
};

struct CheckResult {
  bool ok = true;
  std::vector<Witness> witnesses;  // ascending by good
};

// A menu is t-feasible when every offered good serves at least t agents.
// Witnesses are the offered goods falling short, with their served counts.
inline CheckResult is_feasible(const Problem& p, const Menu& offered,
                               std::int64_t t) {
  CheckResult r;
  for (Good j : offered.goods()) {
    std::int64_t served = served_count(p, j, offered);
    if (served < t) {
      r.ok = false;
      r.witnesses.push_back({j, served});
    }
  }
  return r;
}

// A menu is u-uncontestable when no unoffered good has a lobby of u agents.
// Witnesses are the contesting goods with their lobby sizes.
inline CheckResult is_uncontestable(const Problem& p, const Menu& offered,
                                    std::int64_t u) {
  CheckResult r;
  for (Good j = 1; j <= p.num_goods; ++j) {
    if (offered.contains(j)) continue;
    std::int64_t lobby = lobby_size(p, j, offered);
    if (lobby >= u) {
      r.ok = false;
      r.witnesses.push_back({j, lobby});
    }
  }
  return r;
}

struct StabilityVerdict {
  bool stable = false;
  std::vector<Witness> feasibility_violations;  // served < t
  std::vector<Witness> contests;                // lobby >= u
};

inline StabilityVerdict is_stable(const Problem& p, const Menu& offered,
                                  const StabilityParams& params) {
  StabilityVerdict v;
  CheckResult f = is_feasible(p, offered, params.t);
  CheckResult c = is_uncontestable(p, offered, params.u);
  v.feasibility_violations = std::move(f.witnesses);
  v.contests = std::move(c.witnesses);
  v.stable = f.ok && c.ok;
  return v;
}

namespace detail {

// Visits all size-k subsets of 1..g in lexicographic order.
template <typename Fn>
void for_each_menu_of_size(int g, int k, Fn&& fn) {
  std::vector<Good> pick(k);
  for (int i = 0; i < k; ++i) pick[i] = i + 1;
  while (true) {
    fn(Menu::from_goods(pick));
    int i = k - 1;
    while (i >= 0 && pick[i] == g - (k - 1 - i)) --i;
    if (i < 0) break;
    ++pick[i];
    for (int r = i + 1; r < k; ++r) pick[r] = pick[r - 1] + 1;
  }
}

}  // namespace detail

// True when the instance has a size gap at k: every menu of k goods is
// contested and every menu of k+1 goods is infeasible. Checks all
// C(g,k)+C(g,k+1) menus exactly; no symmetry shortcuts.
inline bool check_gap(const Problem& p, const StabilityParams& params, int k) {
  if (k < 0 || k >= p.num_goods)
    throw std::invalid_argument("check_gap: k must satisfy 0 <= k < num_goods");
  bool gap = true;
  detail::for_each_menu_of_size(p.num_goods, k, [&](const Menu& o) {
    if (gap && is_uncontestable(p, o, params.u).ok) gap = false;
  });
  if (!gap) return false;
  detail::for_each_menu_of_size(p.num_goods, k + 1, [&](const Menu& o) {
    if (gap && is_feasible(p, o, params.t).ok) gap = false;
  });
  return gap;
}

}  // namespace menusel

#endif  // MENUSEL_STABILITY_HPP
