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

#include <catch2/catch.hpp>

#include "menusel/generators.hpp"
#include "menusel/reductions.hpp"
#include "menusel/solvers.hpp"
#include "test_support.hpp"

using namespace menusel;

TEST_CASE("complete_embedding construction", "[reductions]") {
  SECTION("one agent, ascending completion") {
    Problem p;
    p.num_goods = 2;
    p.groups.push_back({1, PreferenceList{1}});
    ReductionMap map = complete_embedding(p, 2);
    CHECK(map.added == 3);
    CHECK(map.reduced.num_goods == 3);
    REQUIRE(map.reduced.groups.size() == 2);
    CHECK(map.reduced.groups[0].prefs == PreferenceList{1, 3, 2});
    CHECK(map.reduced.groups[1].count == 2);
    CHECK(map.reduced.groups[1].prefs == PreferenceList{3, 1, 2});
    CHECK(map.forward(Menu{1, 3}) == Menu{1});
  }
  SECTION("embedding an empty problem") {
    Problem p;
    p.num_goods = 1;
    ReductionMap map = complete_embedding(p, 1);
    REQUIRE(map.reduced.groups.size() == 1);
    CHECK(map.reduced.groups[0].count == 1);
    CHECK(map.reduced.groups[0].prefs == PreferenceList{2, 1});
  }
  SECTION("stable menus transfer through the new good") {
    Problem p = gen_gap7(1);
    StabilityParams params{12, 23};
    ReductionMap map = complete_embedding(p, params.u);
    for (const Menu& o : testing::all_menus(7)) {
      bool original = is_stable(p, o, params).stable;
      bool embedded = is_stable(map.reduced, o.with(8), params).stable;
      CHECK(original == embedded);
    }
  }
}

TEST_CASE("embedding transfer on random instances", "[reductions]") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    int g = 2 + static_cast<int>(seed % 3);  // 2..4
    Problem p = gen_random(g, 1 + seed % 15, seed * 101 + 9);
    std::int64_t t = 1 + static_cast<std::int64_t>(seed % 3);
    std::int64_t u = t + static_cast<std::int64_t>((seed / 3) % 3);
    StabilityParams params{t, u};
    ReductionMap map = complete_embedding(p, u);
    const Good fresh = map.added;

    // Every stable menu of the embedding offers the new good.
    std::vector<Menu> embedded_stable = enumerate_stable(map.reduced, params);
    for (const Menu& o : embedded_stable) CHECK(o.contains(fresh));

    // Per-menu transfer, and existence transfer as its consequence.
    std::vector<Menu> original_stable = enumerate_stable(p, params);
    for (const Menu& o : testing::all_menus(g))
      CHECK(is_stable(p, o, params).stable ==
            is_stable(map.reduced, o.with(fresh), params).stable);
    CHECK(original_stable.empty() == embedded_stable.empty());
  }
}

TEST_CASE("reduce_rarely_ranked", "[reductions]") {
  SECTION("drops a good ranked below the threshold") {
    Problem p;
    p.num_goods = 3;
    p.groups.push_back({1, PreferenceList{1, 3, 2}});
    p.groups.push_back({1, PreferenceList{1, 2}});
    ReductionMap map = reduce_rarely_ranked(p, 2);
    CHECK(map.kept == Menu{1, 2});
    CHECK(map.reduced.groups[0].prefs == PreferenceList{1, 2});
    CHECK(map.reduced.groups[1].prefs == PreferenceList{1, 2});
    CHECK(map.forward(Menu{1}) == Menu{1});
  }
  SECTION("identity on the seven-good instance at t=12") {
    Problem p = gen_gap7(1);
    ReductionMap map = reduce_rarely_ranked(p, 12);
    CHECK(map.kept == Menu::full(7));
    CHECK(map.reduced == p);
    // Each good appears in 3 of the 5x rows and 4 rows of each other block.
    for (Good j = 1; j <= 7; ++j) {
      std::int64_t ranked = 0;
      for (const auto& group : p.groups)
        if (group.prefs.ranks(j)) ranked += group.count;
      CHECK(ranked == 35);
    }
  }
  SECTION("identity when all goods are common enough") {
    Problem p = gen_c4_cycle(3);
    CHECK(reduce_rarely_ranked(p, 2).reduced == p);
  }
}

TEST_CASE("reduce_popular", "[reductions]") {
  SECTION("forces a popular good and cuts lists at it") {
    Problem p;
    p.num_goods = 3;
    p.groups.push_back({2, PreferenceList{1, 2}});
    p.groups.push_back({1, PreferenceList{2, 1, 3}});
    ReductionMap map = reduce_popular(p, 2);
    CHECK(map.forced == Menu{1});
    CHECK(map.reduced.groups[0].prefs == PreferenceList{});
    CHECK(map.reduced.groups[1].prefs == PreferenceList{2});
    CHECK(map.forward(Menu{2}) == Menu{1, 2});
  }
  SECTION("identity when nothing is popular") {
    Problem p = gen_c4_cycle(4);  // every top count is t-1 = 3
    ReductionMap map = reduce_popular(p, 4);
    CHECK(map.forced.empty());
    CHECK(map.reduced == p);
  }
  SECTION("an all-popular instance forces everything") {
    Problem p;
    p.num_goods = 2;
    p.groups.push_back({3, PreferenceList{1, 2}});
    p.groups.push_back({3, PreferenceList{2, 1}});
    ReductionMap map = reduce_popular(p, 2);
    CHECK(map.forced == Menu::full(2));
    for (const auto& group : map.reduced.groups) CHECK(group.prefs.empty());
    CHECK(map.forward(Menu{}) == Menu::full(2));
  }
}

TEST_CASE("filter reductions preserve stability exactly", "[reductions]") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    int g = 2 + static_cast<int>(seed % 4);  // 2..5
    Problem p = gen_random(g, 1 + seed % 18, seed * 77 + 5);
    std::int64_t t = 1 + static_cast<std::int64_t>(seed % 3);
    std::int64_t u = t + static_cast<std::int64_t>((seed / 5) % 3);
    StabilityParams params{t, u};

    ReductionMap rare = reduce_rarely_ranked(p, t);
    for (const Menu& o : testing::all_menus(g)) {
      bool original = is_stable(p, o, params).stable;
      CHECK(original ==
            (o.subset_of(rare.kept) && is_stable(rare.reduced, o, params).stable));
    }

    ReductionMap pop = reduce_popular(p, t);
    for (const Menu& o : testing::all_menus(g)) {
      if (o.raw_bits() & pop.forced.raw_bits()) continue;  // menus over kept goods only
      bool reduced_stable = is_stable(pop.reduced, o, params).stable;
      bool original_stable = is_stable(p, pop.forward(o), params).stable;
      CHECK(reduced_stable == original_stable);
    }
  }
}

TEST_CASE("filter reductions are idempotent", "[reductions]") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    int g = 2 + static_cast<int>(seed % 4);
    Problem p = gen_random(g, seed % 20, seed * 3 + 11);
    std::int64_t t = 1 + static_cast<std::int64_t>(seed % 4);
    Problem rare_once = reduce_rarely_ranked(p, t).reduced;
    CHECK(reduce_rarely_ranked(rare_once, t).reduced == rare_once);
    Problem pop_once = reduce_popular(p, t).reduced;
    CHECK(reduce_popular(pop_once, t).reduced == pop_once);
  }
}
