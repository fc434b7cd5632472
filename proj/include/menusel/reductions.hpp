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

#ifndef MENUSEL_REDUCTIONS_HPP
#define MENUSEL_REDUCTIONS_HPP

// Stability-preserving problem transformations. Reduced problems keep the
// original good labels (dropped goods just become unranked), so menus of the
// reduced problem are directly meaningful in the original.

#include <algorithm>
#include <cstdint>

#include "menusel/model.hpp"

namespace menusel {

enum class ReductionKind { kCompleteEmbedding, kRarelyRanked, kPopular };

struct ReductionMap {
  ReductionKind kind = ReductionKind::kRarelyRanked;
  Problem reduced;
  Menu kept;        // rarely-ranked: goods surviving the threshold
  Menu forced;      // popular: goods offered unconditionally
  Good added = kOutside;  // embedding: the appended universal good

  // Maps a menu of the reduced problem back to the original problem.
  Menu forward(const Menu& m) const {
    switch (kind) {
      case ReductionKind::kCompleteEmbedding:
        return m.without(added);
      case ReductionKind::kRarelyRanked:
        return m;
      case ReductionKind::kPopular: {
        Menu out = m;
        for (Good j : forced.goods()) out = out.with(j);
        return out;
      }
    }
    return m;
  }
};

// Turns an instance with partial rankings into one with complete rankings on
// one extra good: every list is extended by the new good g+1 and then the
// remaining goods in ascending order, and u fresh agents arrive with g+1
// first. A menu O is stable in the original iff O+{g+1} is stable here.
inline ReductionMap complete_embedding(const Problem& p, std::int64_t u) {
  if (u < 1) throw std::invalid_argument("complete_embedding: u must be >= 1");
  ReductionMap map;
  map.kind = ReductionKind::kCompleteEmbedding;
  const Good fresh = p.num_goods + 1;
  map.added = fresh;
  map.reduced.num_goods = p.num_goods + 1;
  for (const auto& group : p.groups) {
    AgentGroup extended;
    extended.count = group.count;
    extended.prefs = group.prefs;
    extended.prefs.ranked.push_back(fresh);
    for (Good j = 1; j <= p.num_goods; ++j)
      if (!group.prefs.ranks(j)) extended.prefs.ranked.push_back(j);
    map.reduced.groups.push_back(std::move(extended));
  }
  AgentGroup newcomers;
  newcomers.count = u;
  newcomers.prefs.ranked.push_back(fresh);
  for (Good j = 1; j <= p.num_goods; ++j) newcomers.prefs.ranked.push_back(j);
  map.reduced.groups.push_back(std::move(newcomers));
  return map;
}

// Drops every good ranked by fewer than t agents from all lists. Such goods
// can never be feasibly offered, and their lobbies stay below t <= u, so
// stable menus are exactly preserved (and always avoid the dropped goods).
inline ReductionMap reduce_rarely_ranked(const Problem& p, std::int64_t t) {
  if (t < 1) throw std::invalid_argument("reduce_rarely_ranked: t must be >= 1");
  ReductionMap map;
  map.kind = ReductionKind::kRarelyRanked;
  std::vector<std::int64_t> ranked_by(p.num_goods + 1, 0);
  for (const auto& group : p.groups)
    for (Good j : group.prefs.ranked) ranked_by[j] += group.count;
  for (Good j = 1; j <= p.num_goods; ++j)
    if (ranked_by[j] >= t) map.kept = map.kept.with(j);
  map.reduced.num_goods = p.num_goods;
  for (const auto& group : p.groups) {
    AgentGroup filtered;
    filtered.count = group.count;
    for (Good j : group.prefs.ranked)
      if (map.kept.contains(j)) filtered.prefs.ranked.push_back(j);
    map.reduced.groups.push_back(std::move(filtered));
  }
  return map;
}

// Forces every good that is the favorite of t or more agents: those goods
// sustain themselves in any menu containing them. Lists are cut at their
// first forced good (it and everything below it go). A menu O of the reduced
// problem is stable iff O together with the forced set is stable originally.
inline ReductionMap reduce_popular(const Problem& p, std::int64_t t) {
  if (t < 1) throw std::invalid_argument("reduce_popular: t must be >= 1");
  ReductionMap map;
  map.kind = ReductionKind::kPopular;
  for (Good j = 1; j <= p.num_goods; ++j)
    if (count_top(p, j) >= t) map.forced = map.forced.with(j);
  map.reduced.num_goods = p.num_goods;
  for (const auto& group : p.groups) {
    AgentGroup cut;
    cut.count = group.count;
    for (Good j : group.prefs.ranked) {
      if (map.forced.contains(j)) break;
      cut.prefs.ranked.push_back(j);
    }
    map.reduced.groups.push_back(std::move(cut));
  }
  return map;
}

}  // namespace menusel

#endif  // MENUSEL_REDUCTIONS_HPP
