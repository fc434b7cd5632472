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

#ifndef MENUSEL_MECHANISMS_HPP
#define MENUSEL_MECHANISMS_HPP

// Menu selection mechanisms and an exhaustive manipulation probe. All
// mechanisms here are anonymous (they consume the multiset of lists only),
// so a deviation by one member of a group stands for a deviation by any
// member: the probe moves a single unit of count per misreport.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "menusel/covering.hpp"
#include "menusel/model.hpp"
#include "menusel/solvers.hpp"
#include "menusel/stability.hpp"

namespace menusel {

class NoStableMenuError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MechanismFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SummaryStats {
  std::int64_t x1 = 0;  // agents with 1 over 2
  std::int64_t x2 = 0;  // agents with 2 over 1
};

inline SummaryStats summary_stats(const Problem& p) {
  return {pairwise(p, 1, 2), pairwise(p, 2, 1)};
}

// Two-good mechanism on complete lists: offer nothing when fewer than t
// agents show up, both goods when both sides reach t, otherwise the majority
// side with ties to good 1. Strategyproof for u >= t.
inline Menu mechanism_g2(const Problem& p, const StabilityParams& params) {
  if (p.num_goods != 2)
    throw std::invalid_argument("mechanism_g2: needs exactly 2 goods");
  if (params.u < params.t)
    throw std::invalid_argument("mechanism_g2: needs u >= t");
  for (std::size_t gi = 0; gi < p.groups.size(); ++gi)
    if (p.groups[gi].prefs.size() != 2)
      throw std::invalid_argument("mechanism_g2: agents[" + std::to_string(gi) +
                                  "] has an incomplete list");
  SummaryStats x = summary_stats(p);
  if (x.x1 + x.x2 < params.t) return Menu{};
  if (x.x1 >= params.t && x.x2 >= params.t) return Menu{1, 2};
  return x.x1 >= x.x2 ? Menu{1} : Menu{2};
}

// First stable menu in size-then-lex order; anonymous and stable wherever a
// stable menu exists at all.
inline Menu default_mechanism(const Problem& p, const StabilityParams& params) {
  std::vector<Menu> stable = enumerate_stable(p, params);
  if (stable.empty())
    throw NoStableMenuError("default_mechanism: no stable menu for t=" +
                            std::to_string(params.t) + " u=" +
                            std::to_string(params.u));
  return stable.front();
}

using Mechanism = std::function<Menu(const Problem&, const StabilityParams&)>;

enum class ReportSpace { kComplete, kTruncations };

inline std::vector<PreferenceList> report_space_lists(int g, ReportSpace space) {
  return pref_universe(g, space == ReportSpace::kComplete).prefs;
}

struct ManipulationWitness {
  Problem problem;             // the honest profile
  int group_index = 0;         // the deviating agent's group
  PreferenceList true_list;
  PreferenceList misreport;
  Good honest_outcome = kOutside;
  Good deviant_outcome = kOutside;
};

namespace detail {

inline Good favorite_in(const PreferenceList& list, const Menu& offered) {
  for (Good j : list.ranked)
    if (offered.contains(j)) return j;
  return kOutside;
}

// Strict improvement under the true list; any ranked good beats the outside
// option, the outside option beats nothing.
inline bool improves(const PreferenceList& truth, Good now, Good before) {
  if (now == kOutside) return false;
  if (before == kOutside) return true;
  return truth.prefers(now, before);
}

inline Problem with_deviation(const Problem& p, std::size_t group_index,
                              const PreferenceList& misreport) {
  Problem out = p;
  out.groups[group_index].count -= 1;
  out.groups.push_back({1, misreport});
  return out;
}

template <typename OnWitness>
void scan_profile(const Mechanism& mech, const Problem& p,
                  const StabilityParams& params,
                  const std::vector<PreferenceList>& reports,
                  const OnWitness& on_witness) {
  Menu honest_menu;
  try {
    honest_menu = mech(p, params);
  } catch (const std::exception& e) {
    throw MechanismFailure(std::string("mechanism failed on profile: ") +
                           e.what() + "\ninstance:\n" + serialize_problem(p));
  }
  for (std::size_t gi = 0; gi < p.groups.size(); ++gi) {
    if (p.groups[gi].count < 1) continue;
    const PreferenceList truth = p.groups[gi].prefs;
    const Good honest_outcome = favorite_in(truth, honest_menu);
    for (const PreferenceList& lie : reports) {
      if (lie == truth) continue;
      Problem deviated = with_deviation(p, gi, lie);
      Menu other_menu;
      try {
        other_menu = mech(deviated, params);
      } catch (const std::exception& e) {
        throw MechanismFailure(std::string("mechanism failed on misreport: ") +
                               e.what() + "\ninstance:\n" +
                               serialize_problem(deviated));
      }
      Good deviant_outcome = favorite_in(truth, other_menu);
      if (improves(truth, deviant_outcome, honest_outcome)) {
        ManipulationWitness w;
        w.problem = p;
        w.group_index = static_cast<int>(gi);
        w.true_list = truth;
        w.misreport = lie;
        w.honest_outcome = honest_outcome;
        w.deviant_outcome = deviant_outcome;
        if (on_witness(std::move(w))) return;
      }
    }
  }
}

}  // namespace detail

// First profitable deviation in canonical order (group index, then report
// order), or nothing when the profile is unmanipulable.
inline std::optional<ManipulationWitness> find_manipulation(
    const Mechanism& mech, const Problem& p, const StabilityParams& params,
    ReportSpace space = ReportSpace::kComplete) {
  std::vector<PreferenceList> reports = report_space_lists(p.num_goods, space);
  std::optional<ManipulationWitness> found;
  detail::scan_profile(mech, p, params, reports, [&](ManipulationWitness w) {
    found = std::move(w);
    return true;  // stop at the first
  });
  return found;
}

// Exhaustive probe over every profile of n agents drawn (as a multiset) from
// the report space. Returns every witness across every profile, in canonical
// order; an empty result certifies strategyproofness over the scanned space.
inline std::vector<ManipulationWitness> scan_strategyproofness(
    const Mechanism& mech, int g, int n, const StabilityParams& params,
    bool complete = true, std::int64_t max_profiles = 200000) {
  std::vector<PreferenceList> lists =
      report_space_lists(g, complete ? ReportSpace::kComplete : ReportSpace::kTruncations);
  ReportSpace space = complete ? ReportSpace::kComplete : ReportSpace::kTruncations;

  // Number of multisets: C(|lists|+n-1, n), guarded against the budget.
  double profiles = 1.0;
  for (int i = 1; i <= n; ++i)
    profiles = profiles * (static_cast<double>(lists.size()) + n - i) / i;
  if (profiles > static_cast<double>(max_profiles))
    throw std::invalid_argument("scan_strategyproofness: profile space exceeds budget");

  std::vector<ManipulationWitness> witnesses;
  std::vector<int> counts(lists.size(), 0);
  const std::vector<PreferenceList> reports = report_space_lists(g, space);

  // Nondecreasing index tuples of length n over the list universe.
  const std::function<void(int, int)> recurse = [&](int from, int remaining) {
    if (remaining == 0) {
      Problem p;
      p.num_goods = g;
      for (std::size_t li = 0; li < lists.size(); ++li)
        if (counts[li] > 0) p.groups.push_back({counts[li], lists[li]});
      detail::scan_profile(mech, p, params, reports, [&](ManipulationWitness w) {
        witnesses.push_back(std::move(w));
        return false;  // keep collecting
      });
      return;
    }
    for (std::size_t li = from; li < lists.size(); ++li) {
      ++counts[li];
      recurse(static_cast<int>(li), remaining - 1);
      --counts[li];
    }
  };
  recurse(0, n);
  return witnesses;
}

// Replays both runs of a witness and confirms the deviation still pays.
inline bool verify_witness(const Mechanism& mech, const ManipulationWitness& w,
                           const StabilityParams& params) {
  Menu honest = mech(w.problem, params);
  Problem deviated = detail::with_deviation(w.problem, w.group_index, w.misreport);
  Menu other = mech(deviated, params);
  Good before = detail::favorite_in(w.true_list, honest);
  Good after = detail::favorite_in(w.true_list, other);
  return before == w.honest_outcome && after == w.deviant_outcome &&
         detail::improves(w.true_list, after, before);
}

}  // namespace menusel

#endif  // MENUSEL_MECHANISMS_HPP
