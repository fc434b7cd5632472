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

#ifndef MENUSEL_GENERATORS_HPP
#define MENUSEL_GENERATORS_HPP

// Deterministic constructors for the instance families with known stability
// behavior (unsolvable gap instances, the four-good greedy cycle, the
// transcript-ambiguous cohort pair, cyclic structured profiles), plus a
// seeded random generator for property tests. Group order is fixed so
// serialized instances diff cleanly.

#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>

#include "menusel/model.hpp"

namespace menusel {

// Two goods, u agents ranking 1 over 2. With u < t nothing is offerable yet
// the empty menu is contested: no stable menu exists.
inline Problem gen_g2_lower(std::int64_t t, std::int64_t u) {
  if (u < 1 || u >= t)
    throw std::invalid_argument("gen_g2_lower: requires 1 <= u < t");
  Problem p;
  p.num_goods = 2;
  p.groups.push_back({u, PreferenceList{1, 2}});
  return p;
}

// Three rotated blocks of ceil(u/2) agents over goods 1,2,3. Whenever
// ceil(u/2) < t, singletons are contested by 2x agents, pairs starve their
// weaker good, and the full triple starves everyone: no stable menu.
inline Problem gen_cyclic3(std::int64_t t, std::int64_t u, int g = 3) {
  if (g < 3) throw std::invalid_argument("gen_cyclic3: needs g >= 3");
  const std::int64_t x = (u + 1) / 2;
  if (u < 1 || x >= t)
    throw std::invalid_argument("gen_cyclic3: requires ceil(u/2) < t");
  Problem p;
  p.num_goods = g;
  p.groups.push_back({x, PreferenceList{1, 2, 3}});
  p.groups.push_back({x, PreferenceList{2, 3, 1}});
  p.groups.push_back({x, PreferenceList{3, 1, 2}});
  return p;
}

// Four cyclically shifted blocks of t-1 agents on four goods. With u = 2t-1
// the greedy walk orbits the singletons forever while {1,3} and {2,4} sit
// stable off the orbit.
inline Problem gen_c4_cycle(std::int64_t t) {
  if (t < 2) throw std::invalid_argument("gen_c4_cycle: needs t >= 2");
  Problem p;
  p.num_goods = 4;
  p.groups.push_back({t - 1, PreferenceList{4, 3, 2, 1}});
  p.groups.push_back({t - 1, PreferenceList{3, 2, 1, 4}});
  p.groups.push_back({t - 1, PreferenceList{2, 1, 4, 3}});
  p.groups.push_back({t - 1, PreferenceList{1, 4, 3, 2}});
  return p;
}

namespace detail {

inline PreferenceList rotate7(const std::vector<Good>& base, int shift) {
  PreferenceList out;
  for (Good j : base) out.ranked.push_back((j - 1 + shift) % 7 + 1);
  return out;
}

}  // namespace detail

// 70x agents over seven goods in four rotation-closed blocks (multiplicities
// 5x, 3x, x, x). Every three-good menu is contested by 23x agents and every
// four-good menu starves a good at 11x or 10x servings, so no
// (11x+1, 23x)-stable menu exists.
inline Problem gen_gap7(std::int64_t x, int g = 7) {
  if (x < 1) throw std::invalid_argument("gen_gap7: needs x >= 1");
  if (g < 7) throw std::invalid_argument("gen_gap7: needs g >= 7");
  Problem p;
  p.num_goods = g;
  struct Block {
    std::int64_t mult;
    std::vector<Good> base;
  };
  const Block blocks[] = {
      {5, {1, 2, 3}},
      {3, {1, 2, 4, 5}},
      {1, {1, 4, 2, 5}},
      {1, {1, 6, 4, 2}},
  };
  for (const Block& b : blocks)
    for (int shift = 0; shift < 7; ++shift)
      p.groups.push_back({b.mult * x, detail::rotate7(b.base, shift)});
  return p;
}

// The same instance with every list completed to a full order over the seven
// goods; the missing goods are appended in a seeded shuffle. Any completion
// preserves the unsolvability, so the seed is exposed rather than fixed.
inline Problem gen_gap7_complete(std::int64_t x, std::uint64_t seed) {
  Problem p = gen_gap7(x, 7);
  std::mt19937_64 rng(seed);
  for (auto& group : p.groups) {
    std::vector<Good> missing;
    for (Good j = 1; j <= 7; ++j)
      if (!group.prefs.ranks(j)) missing.push_back(j);
    std::shuffle(missing.begin(), missing.end(), rng);
    for (Good j : missing) group.prefs.ranked.push_back(j);
  }
  return p;
}

enum class Cohort { A, B };

// Two 15-agent cohorts on five goods with t=4, u=7 in mind: identical greedy
// transcripts from {1,2} and identical per-good rank-position counts, yet
// disjoint sets of stable menus (all pairs vs all triples).
inline Problem gen_twin_cohort(Cohort which) {
  Problem p;
  p.num_goods = 5;
  if (which == Cohort::A) {
    p.groups = {
        {2, PreferenceList{5, 4, 3, 2, 1}}, {2, PreferenceList{4, 3, 2, 1, 5}},
        {2, PreferenceList{3, 2, 1, 5, 4}}, {2, PreferenceList{2, 1, 5, 4, 3}},
        {2, PreferenceList{1, 5, 4, 3, 2}}, {1, PreferenceList{5, 4, 2, 3, 1}},
        {1, PreferenceList{1, 5, 3, 4, 2}}, {1, PreferenceList{2, 1, 4, 5, 3}},
        {1, PreferenceList{3, 2, 5, 1, 4}}, {1, PreferenceList{4, 3, 1, 2, 5}},
    };
  } else {
    p.groups = {
        {1, PreferenceList{5, 4, 3, 2, 1}}, {1, PreferenceList{4, 3, 2, 1, 5}},
        {1, PreferenceList{3, 2, 1, 5, 4}}, {1, PreferenceList{2, 1, 5, 4, 3}},
        {1, PreferenceList{1, 5, 4, 3, 2}}, {2, PreferenceList{5, 3, 1, 4, 2}},
        {2, PreferenceList{1, 4, 2, 5, 3}}, {2, PreferenceList{2, 5, 3, 1, 4}},
        {2, PreferenceList{3, 1, 4, 2, 5}}, {2, PreferenceList{4, 2, 5, 3, 1}},
    };
  }
  return p;
}

// g blocks of t-1 agents; block k ranks k first and then descends cyclically
// k-1, ..., 1, g, ..., k+1. Under classify_regular over (1..g) every agent is
// regular with x_k = t-1.
inline Problem gen_structured(int g, std::int64_t t) {
  if (g < 2 || t < 2)
    throw std::invalid_argument("gen_structured: needs g >= 2 and t >= 2");
  Problem p;
  p.num_goods = g;
  for (Good k = 1; k <= g; ++k) {
    PreferenceList prefs;
    for (int step = 0; step < g; ++step)
      prefs.ranked.push_back((k - 1 - step + g * g) % g + 1);
    p.groups.push_back({t - 1, std::move(prefs)});
  }
  return p;
}

// Seeded random instance. complete=true draws uniform full orders; otherwise
// lists are uniform over all distinct-prefix lists of length 0..g (longer
// lengths weighted by how many lists they admit). Identical lists are merged
// in first-appearance order.
inline Problem gen_random(int g, std::int64_t n, std::uint64_t seed,
                          bool complete = false) {
  if (g < 1 || n < 0)
    throw std::invalid_argument("gen_random: needs g >= 1 and n >= 0");
  std::mt19937_64 rng(seed);
  Problem p;
  p.num_goods = g;

  // lists_of_len[len] = g * (g-1) * ... * (g-len+1)
  std::vector<double> weight(g + 1, 1.0);
  for (int len = 1; len <= g; ++len) weight[len] = weight[len - 1] * (g - len + 1);
  std::discrete_distribution<int> length_dist(weight.begin(), weight.end());

  std::vector<Good> pool(g);
  std::iota(pool.begin(), pool.end(), 1);
  for (std::int64_t i = 0; i < n; ++i) {
    int len = complete ? g : length_dist(rng);
    // Partial Fisher-Yates: the first len entries become the list.
    for (int k = 0; k < len; ++k) {
      std::uniform_int_distribution<int> pick(k, g - 1);
      std::swap(pool[k], pool[pick(rng)]);
    }
    PreferenceList prefs;
    prefs.ranked.assign(pool.begin(), pool.begin() + len);
    bool merged = false;
    for (auto& group : p.groups) {
      if (group.prefs == prefs) {
        ++group.count;
        merged = true;
        break;
      }
    }
    if (!merged) p.groups.push_back({1, std::move(prefs)});
  }
  return p;
}

}  // namespace menusel

#endif  // MENUSEL_GENERATORS_HPP
