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

#ifndef MENUSEL_MODEL_HPP
#define MENUSEL_MODEL_HPP

// Core domain types for the stable menu selection problem, plus the counting
// primitives everything else is built on. Agents are stored as (count, ranked
// list) groups: all stability notions here depend only on the multiset of
// preference lists, so the grouped form is lossless and keeps scaled
// instances small. Everything is exact integer arithmetic; all types are
// immutable after construction and all operations are pure.

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace menusel {

// Goods are 1-indexed. 0 is the outside option (an agent that ranks no
// offered good consumes nothing).
using Good = int;
inline constexpr Good kOutside = 0;

// A strict ranking of some subset of the goods, best first. May be empty
// (such an agent always takes the outside option). Unranked goods sit below
// the outside option.
struct PreferenceList {
  std::vector<Good> ranked;

  PreferenceList() = default;
  PreferenceList(std::initializer_list<Good> goods) : ranked(goods) {}
  explicit PreferenceList(std::vector<Good> goods) : ranked(std::move(goods)) {}

  bool empty() const { return ranked.empty(); }
  std::size_t size() const { return ranked.size(); }

  // 0-based position of a good, or -1 when unranked.
  int position(Good j) const {
    for (std::size_t i = 0; i < ranked.size(); ++i)
      if (ranked[i] == j) return static_cast<int>(i);
    return -1;
  }
  bool ranks(Good j) const { return position(j) >= 0; }

  // Strictly prefers a over b: a must be ranked, and either b is unranked or
  // a comes first.
  bool prefers(Good a, Good b) const {
    int pa = position(a);
    if (pa < 0) return false;
    int pb = position(b);
    return pb < 0 || pa < pb;
  }

  friend bool operator==(const PreferenceList&, const PreferenceList&) = default;
  friend auto operator<=>(const PreferenceList& a, const PreferenceList& b) {
    return a.ranked <=> b.ranked;
  }
};

struct AgentGroup {
  std::int64_t count = 0;
  PreferenceList prefs;

  friend bool operator==(const AgentGroup&, const AgentGroup&) = default;
};

struct Problem {
  int num_goods = 0;
  std::vector<AgentGroup> groups;

  std::int64_t num_agents() const {
    std::int64_t n = 0;
    for (const auto& g : groups) n += g.count;
    return n;
  }

  friend bool operator==(const Problem&, const Problem&) = default;
};

// A menu of offered goods, kept as a bitset over 1..num_goods. Iteration and
// printing are always in ascending good order, so the representation is
// canonical by construction.
class Menu {
 public:
  Menu() = default;
  Menu(std::initializer_list<Good> goods) {
    for (Good j : goods) *this = with(j);
  }

  static Menu full(int num_goods) {
    Menu m;
    m.bits_ = (num_goods >= 32) ? ~0u : ((1u << num_goods) - 1u) << 1;
    return m;
  }
  static Menu from_bits(std::uint32_t bits) {
    Menu m;
    m.bits_ = bits << 1;  // callers pass a 0-based mask over goods 1..g
    return m;
  }
  static Menu from_goods(const std::vector<Good>& goods) {
    Menu m;
    for (Good j : goods) m = m.with(j);
    return m;
  }

  bool contains(Good j) const {
    return j >= 1 && j < 32 && (bits_ & (1u << j)) != 0;
  }
  Menu with(Good j) const {
    if (j < 1 || j >= 32) throw std::invalid_argument("menu good out of range");
    Menu m = *this;
    m.bits_ |= (1u << j);
    return m;
  }
  Menu without(Good j) const {
    Menu m = *this;
    if (j >= 1 && j < 32) m.bits_ &= ~(1u << j);
    return m;
  }
  bool empty() const { return bits_ == 0; }
  int size() const { return __builtin_popcount(bits_); }
  bool subset_of(const Menu& other) const { return (bits_ & ~other.bits_) == 0; }

  std::vector<Good> goods() const {
    std::vector<Good> out;
    for (Good j = 1; j < 32; ++j)
      if (bits_ & (1u << j)) out.push_back(j);
    return out;
  }

  std::string str() const {
    if (empty()) return "{}";
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (Good j : goods()) {
      if (!first) os << ',';
      os << j;
      first = false;
    }
    os << '}';
    return os.str();
  }

  std::uint32_t raw_bits() const { return bits_; }

  friend bool operator==(const Menu&, const Menu&) = default;

 private:
  std::uint32_t bits_ = 0;
};

// Orders menus by size, then lexicographically on the sorted good sequence.
inline bool menu_size_lex_less(const Menu& a, const Menu& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a.goods() < b.goods();
}

// t: every offered good must serve at least t agents.
// u: no unoffered good may gather a lobby of u agents.
struct StabilityParams {
  std::int64_t t = 1;
  std::int64_t u = 1;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Throws std::invalid_argument naming the offending group when a list
// mentions an out-of-range or duplicated good, or a count is negative.
inline void validate_problem(const Problem& p) {
  if (p.num_goods < 0 || p.num_goods >= 32)
    throw std::invalid_argument("num_goods must be in 0..31");
  for (std::size_t gi = 0; gi < p.groups.size(); ++gi) {
    const auto& group = p.groups[gi];
    const std::string where = "agents[" + std::to_string(gi) + "]: ";
    if (group.count < 0)
      throw std::invalid_argument(where + "negative count");
    std::uint32_t seen = 0;
    for (Good j : group.prefs.ranked) {
      if (j < 1 || j > p.num_goods)
        throw std::invalid_argument(where + "good " + std::to_string(j) +
                                    " out of range 1.." +
                                    std::to_string(p.num_goods));
      if (seen & (1u << j))
        throw std::invalid_argument(where + "duplicate good " +
                                    std::to_string(j) + " in prefs");
      seen |= 1u << j;
    }
  }
}

// Instance file format: {"num_goods": g, "agents": [{"count": c, "prefs":
// [..]}, ...]}. Goods are 1-indexed; t and u are never stored in the file.
inline Problem parse_problem(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed instance file: ") + e.what());
  }
  Problem p;
  try {
    if (!doc.is_object() || !doc.contains("num_goods") || !doc.contains("agents"))
      throw ParseError("instance must be an object with num_goods and agents");
    if (!doc["num_goods"].is_number_integer())
      throw ParseError("num_goods must be an integer");
    p.num_goods = doc["num_goods"].get<int>();
    if (!doc["agents"].is_array())
      throw ParseError("agents must be an array");
    std::size_t gi = 0;
    for (const auto& entry : doc["agents"]) {
      const std::string where = "agents[" + std::to_string(gi) + "]: ";
      if (!entry.is_object() || !entry.contains("count") || !entry.contains("prefs"))
        throw ParseError(where + "each agent group needs count and prefs");
      if (!entry["count"].is_number_integer())
        throw ParseError(where + "count must be an integer");
      AgentGroup group;
      group.count = entry["count"].get<std::int64_t>();
      if (!entry["prefs"].is_array())
        throw ParseError(where + "prefs must be an array");
      for (const auto& j : entry["prefs"]) {
        if (!j.is_number_integer())
          throw ParseError(where + "prefs entries must be integers");
        group.prefs.ranked.push_back(j.get<int>());
      }
      p.groups.push_back(std::move(group));
      ++gi;
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed instance file: ") + e.what());
  }
  try {
    validate_problem(p);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  return p;
}

inline std::string serialize_problem(const Problem& p) {
  nlohmann::ordered_json doc;
  doc["num_goods"] = p.num_goods;
  doc["agents"] = nlohmann::ordered_json::array();
  for (const auto& g : p.groups) {
    nlohmann::ordered_json entry;
    entry["count"] = g.count;
    entry["prefs"] = g.prefs.ranked;
    doc["agents"].push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

// Each group's favorite good among the offered ones, or kOutside when it
// ranks none of them.
inline std::vector<Good> assign(const Problem& p, const Menu& offered) {
  std::vector<Good> out;
  out.reserve(p.groups.size());
  for (const auto& group : p.groups) {
    Good got = kOutside;
    for (Good j : group.prefs.ranked) {
      if (offered.contains(j)) {
        got = j;
        break;
      }
    }
    out.push_back(got);
  }
  return out;
}

// Number of agents preferring j to every good in rivals. Requires j outside
// rivals; this single primitive backs lobby, pairwise and served counts.
inline std::int64_t count_preferring(const Problem& p, Good j, const Menu& rivals) {
  std::int64_t total = 0;
  for (const auto& group : p.groups) {
    for (Good k : group.prefs.ranked) {
      if (k == j) {
        total += group.count;
        break;
      }
      if (rivals.contains(k)) break;
    }
  }
  return total;
}

// Number of agents whose first-ranked good is j.
inline std::int64_t count_top(const Problem& p, Good j) {
  std::int64_t total = 0;
  for (const auto& group : p.groups)
    if (!group.prefs.empty() && group.prefs.ranked.front() == j)
      total += group.count;
  return total;
}

// Lobby of j against the menu: agents who rank j and prefer it to everything
// offered. Against the empty menu this is simply everyone ranking j.
inline std::int64_t lobby_size(const Problem& p, Good j, const Menu& offered) {
  if (offered.contains(j))
    throw std::invalid_argument("lobby_size: good " + std::to_string(j) +
                                " is already offered");
  return count_preferring(p, j, offered);
}

inline std::int64_t pairwise(const Problem& p, Good j, Good k) {
  if (j == k) throw std::invalid_argument("pairwise: goods must differ");
  return count_preferring(p, j, Menu{k});
}

// Agents assigned to j when the menu is offered.
inline std::int64_t served_count(const Problem& p, Good j, const Menu& offered) {
  if (!offered.contains(j))
    throw std::invalid_argument("served_count: good " + std::to_string(j) +
                                " is not offered");
  return count_preferring(p, j, offered.without(j));
}

}  // namespace menusel

#endif  // MENUSEL_MODEL_HPP
