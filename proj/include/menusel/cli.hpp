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

#ifndef MENUSEL_CLI_HPP
#define MENUSEL_CLI_HPP

// Batch command-line surface. Exit codes: 0 success, 1 domain errors (no
// stable menu, unreadable instance, ...), 2 usage errors. All output is
// deterministic; --json emits a machine-readable report with a
// schema_version field.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "menusel/covering.hpp"
#include "menusel/generators.hpp"
#include "menusel/mechanisms.hpp"
#include "menusel/model.hpp"
#include "menusel/reductions.hpp"
#include "menusel/solvers.hpp"
#include "menusel/stability.hpp"

namespace menusel::cli {

inline constexpr int kSchemaVersion = 1;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

using Json = nlohmann::ordered_json;

inline Json json_root(const std::string& command) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  return j;
}

inline void emit(const Json& j, std::ostream& out) { out << j.dump(2) << "\n"; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << text;
}

inline Problem load_problem(const std::string& path) {
  return parse_problem(read_file(path));
}

// Menus on the command line are comma-separated 1-indexed goods; the empty
// menu is spelled "none".
inline Menu parse_menu_arg(const std::string& text, int num_goods) {
  if (text == "none") return Menu{};
  Menu m;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    int good = 0;
    try {
      std::size_t used = 0;
      good = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("bad menu entry '" + item + "' (expected a good index)");
    }
    if (good < 1 || good > num_goods)
      throw UsageError("menu good " + std::to_string(good) +
                       " out of range 1.." + std::to_string(num_goods));
    m = m.with(good);
  }
  return m;
}

inline Json menu_json(const Menu& m) { return Json(m.goods()); }

inline Json witnesses_json(const std::vector<Witness>& ws, const char* count_key) {
  Json arr = Json::array();
  for (const auto& w : ws) {
    Json j;
    j["good"] = w.good;
    j[count_key] = w.agents;
    arr.push_back(std::move(j));
  }
  return arr;
}

inline Json verdict_json(const StabilityVerdict& v) {
  Json j;
  j["stable"] = v.stable;
  j["feasibility_violations"] = witnesses_json(v.feasibility_violations, "served");
  j["contests"] = witnesses_json(v.contests, "lobby");
  return j;
}

inline void print_verdict(std::ostream& out, const StabilityVerdict& v,
                          const StabilityParams& params) {
  for (const auto& w : v.feasibility_violations)
    out << "  infeasible: good " << w.good << " served by " << w.agents
        << " (needs t=" << params.t << ")\n";
  for (const auto& w : v.contests)
    out << "  contested: good " << w.good << " lobby " << w.agents
        << " (tolerates < u=" << params.u << ")\n";
}

inline Json step_json(const GreedyStep& s) {
  Json j;
  j["from"] = menu_json(s.from_menu);
  j["op"] = s.added ? "add" : "remove";
  j["good"] = s.good;
  j["to"] = menu_json(s.to_menu);
  return j;
}

inline Json steps_json(const std::vector<GreedyStep>& steps) {
  Json arr = Json::array();
  for (const auto& s : steps) arr.push_back(step_json(s));
  return arr;
}

inline void print_steps(std::ostream& out, const std::vector<GreedyStep>& steps) {
  for (const auto& s : steps)
    out << "  " << s.from_menu.str() << " " << (s.added ? "+" : "-") << s.good
        << " -> " << s.to_menu.str() << "\n";
}

inline Json problem_json(const Problem& p) {
  return Json::parse(serialize_problem(p));
}

// Writes an instance to -o when given, otherwise prints it as the whole
// stdout payload so commands compose through pipes.
inline void deliver_instance(const Problem& p, const std::string& out_path,
                             bool json, const std::string& command,
                             std::ostream& out) {
  if (out_path.empty()) {
    if (json) {
      Json j = json_root(command);
      j["instance"] = problem_json(p);
      emit(j, out);
    } else {
      out << serialize_problem(p);
    }
    return;
  }
  write_file(out_path, serialize_problem(p));
  if (json) {
    Json j = json_root(command);
    j["output"] = out_path;
    j["groups"] = p.groups.size();
    j["agents"] = p.num_agents();
    j["num_goods"] = p.num_goods;
    emit(j, out);
  } else {
    out << "wrote " << out_path << ": " << p.num_goods << " goods, "
        << p.groups.size() << " groups, " << p.num_agents() << " agents\n";
  }
}

struct CommonArgs {
  std::string file;
  std::int64_t t = 1;
  std::int64_t u = 1;
  bool json = false;
};

inline Mechanism mechanism_by_name(const std::string& name) {
  if (name == "g2")
    return [](const Problem& p, const StabilityParams& s) {
      return mechanism_g2(p, s);
    };
  if (name == "default")
    return [](const Problem& p, const StabilityParams& s) {
      return default_mechanism(p, s);
    };
  throw UsageError("unknown mechanism '" + name + "' (expected g2|default)");
}

}  // namespace detail

inline int run(const std::vector<std::string>& argv, std::ostream& out,
               std::ostream& err) {
  using detail::Json;
  CLI::App app{"menusel: solvers and probes for stable menu selection"};
  app.require_subcommand(1);

  int exit_code = 0;
  std::string active_command;
  bool active_json = false;

  const auto add_common = [](CLI::App* sub, detail::CommonArgs& args,
                             bool needs_file = true) {
    if (needs_file)
      sub->add_option("file", args.file, "instance file (JSON)")->required();
    sub->add_option("--t", args.t, "feasibility threshold")->required();
    sub->add_option("--u", args.u, "contest threshold")->required();
    sub->add_flag("--json", args.json, "machine-readable output");
  };

  // check
  auto check_args = std::make_shared<detail::CommonArgs>();
  auto check_menu = std::make_shared<std::string>();
  {
    CLI::App* sub = app.add_subcommand("check", "stability verdict for one menu");
    add_common(sub, *check_args);
    sub->add_option("--menu", *check_menu, "menu, e.g. 1,3 or none")->required();
    sub->callback([&, check_args, check_menu] {
      active_command = "check";
      active_json = check_args->json;
      Problem p = detail::load_problem(check_args->file);
      Menu menu = detail::parse_menu_arg(*check_menu, p.num_goods);
      StabilityParams params{check_args->t, check_args->u};
      StabilityVerdict v = is_stable(p, menu, params);
      if (check_args->json) {
        Json j = detail::json_root("check");
        j["t"] = params.t;
        j["u"] = params.u;
        j["menu"] = detail::menu_json(menu);
        j.update(detail::verdict_json(v));
        detail::emit(j, out);
      } else {
        out << "menu " << menu.str() << ": "
            << (v.stable ? "stable" : "NOT stable") << " (t=" << params.t
            << ", u=" << params.u << ")\n";
        detail::print_verdict(out, v, params);
      }
    });
  }

  // enumerate
  auto enum_args = std::make_shared<detail::CommonArgs>();
  {
    CLI::App* sub = app.add_subcommand("enumerate", "all stable menus, size-lex order");
    add_common(sub, *enum_args);
    sub->callback([&, enum_args] {
      active_command = "enumerate";
      active_json = enum_args->json;
      Problem p = detail::load_problem(enum_args->file);
      StabilityParams params{enum_args->t, enum_args->u};
      std::vector<Menu> menus = enumerate_stable(p, params);
      if (enum_args->json) {
        Json j = detail::json_root("enumerate");
        j["t"] = params.t;
        j["u"] = params.u;
        j["count"] = menus.size();
        Json arr = Json::array();
        for (const Menu& m : menus) arr.push_back(detail::menu_json(m));
        j["stable_menus"] = std::move(arr);
        detail::emit(j, out);
      } else {
        out << "stable menus (t=" << params.t << ", u=" << params.u
            << "): " << menus.size() << "\n";
        for (const Menu& m : menus) out << m.str() << "\n";
      }
    });
  }

  // greedy
  auto greedy_args = std::make_shared<detail::CommonArgs>();
  auto greedy_init = std::make_shared<std::string>("none");
  {
    CLI::App* sub = app.add_subcommand("greedy", "add/remove walk with cycle detection");
    add_common(sub, *greedy_args);
    sub->add_option("--init", *greedy_init, "starting menu (default none)");
    sub->callback([&, greedy_args, greedy_init] {
      active_command = "greedy";
      active_json = greedy_args->json;
      Problem p = detail::load_problem(greedy_args->file);
      Menu init = detail::parse_menu_arg(*greedy_init, p.num_goods);
      StabilityParams params{greedy_args->t, greedy_args->u};
      GreedyOutcome outcome = greedy(p, params, init);
      if (greedy_args->json) {
        Json j = detail::json_root("greedy");
        j["t"] = params.t;
        j["u"] = params.u;
        j["init"] = detail::menu_json(init);
        if (const auto* stable = std::get_if<GreedyStable>(&outcome)) {
          j["outcome"] = "stable";
          j["menu"] = detail::menu_json(stable->menu);
          j["steps"] = detail::steps_json(stable->steps);
        } else {
          const auto& cycle = std::get<GreedyCycle>(outcome);
          j["outcome"] = "cycle";
          j["prefix"] = detail::steps_json(cycle.prefix);
          j["cycle"] = detail::steps_json(cycle.cycle);
        }
        detail::emit(j, out);
      } else if (const auto* stable = std::get_if<GreedyStable>(&outcome)) {
        out << "outcome: stable " << stable->menu.str() << " after "
            << stable->steps.size() << " steps\n";
        detail::print_steps(out, stable->steps);
      } else {
        const auto& cycle = std::get<GreedyCycle>(outcome);
        out << "outcome: cycle (" << cycle.prefix.size() << " prefix steps, "
            << cycle.cycle.size() << " cycle steps)\n";
        out << "prefix:\n";
        detail::print_steps(out, cycle.prefix);
        out << "cycle:\n";
        detail::print_steps(out, cycle.cycle);
      }
    });
  }

  // solve
  auto solve_args = std::make_shared<detail::CommonArgs>();
  auto solve_method = std::make_shared<std::string>("auto");
  {
    CLI::App* sub = app.add_subcommand("solve", "construct a stable menu");
    add_common(sub, *solve_args);
    sub->add_option("--method", *solve_method, "simple|gminus2|structured|auto")
        ->check(CLI::IsMember({"simple", "gminus2", "structured", "auto"}));
    sub->callback([&, solve_args, solve_method] {
      active_command = "solve";
      active_json = solve_args->json;
      Problem p = detail::load_problem(solve_args->file);
      StabilityParams params{solve_args->t, solve_args->u};

      std::string method_used;
      Menu menu;
      StabilityVerdict verdict;
      std::optional<std::vector<Good>> gprime;

      const auto try_structured = [&]() -> bool {
        gprime = find_structure(p, params);
        if (!gprime) {
          // No cyclic successor structure: look for a small stable menu on
          // top of the forced goods instead.
          ReductionMap pop = reduce_popular(p, params.t);
          std::vector<Menu> candidates{Menu{}};
          for (Good j = 1; j <= pop.reduced.num_goods; ++j)
            if (!pop.forced.contains(j)) candidates.push_back(Menu{j});
          for (const Menu& c : candidates) {
            Menu mapped = pop.forward(c);
            StabilityVerdict v = is_stable(p, mapped, params);
            if (v.stable) {
              menu = mapped;
              verdict = v;
              return true;
            }
          }
          return false;
        }
        SolveResult r = structured_solve(p, *gprime, params);
        menu = r.menu;
        verdict = r.verdict;
        return verdict.stable;
      };

      bool solved = false;
      if (*solve_method == "simple") {
        method_used = "simple";
        SolveResult r = solve_simple(p, params);
        menu = r.menu;
        verdict = r.verdict;
        solved = true;  // reported with its verdict either way
      } else if (*solve_method == "gminus2") {
        method_used = "gminus2";
        if (auto found = solve_gminus2(p, params)) {
          menu = *found;
          verdict = is_stable(p, menu, params);
          solved = true;
        }
      } else if (*solve_method == "structured") {
        method_used = "structured";
        solved = try_structured();
        if (!solved && !gprime)
          throw std::runtime_error(
              "structured method not applicable and no small menu verified");
      } else {  // auto
        SolveResult simple = solve_simple(p, params);
        if (simple.verdict.stable) {
          method_used = "simple";
          menu = simple.menu;
          verdict = simple.verdict;
          solved = true;
        }
        if (!solved)
          if (auto found = solve_gminus2(p, params)) {
            method_used = "gminus2";
            menu = *found;
            verdict = is_stable(p, menu, params);
            solved = true;
          }
        if (!solved && try_structured()) {
          method_used = "structured";
          solved = true;
        }
        if (!solved && p.num_goods <= 20) {
          std::vector<Menu> all = enumerate_stable(p, params);
          if (!all.empty()) {
            method_used = "enumerate";
            menu = all.front();
            verdict = is_stable(p, menu, params);
            solved = true;
          }
        }
      }
      if (!solved)
        throw NoStableMenuError("no stable menu found (method " + *solve_method +
                                ", t=" + std::to_string(params.t) +
                                ", u=" + std::to_string(params.u) + ")");
      if (solve_args->json) {
        Json j = detail::json_root("solve");
        j["t"] = params.t;
        j["u"] = params.u;
        j["method"] = method_used;
        j["menu"] = detail::menu_json(menu);
        if (method_used == "structured" && gprime) j["gprime"] = *gprime;
        j.update(detail::verdict_json(verdict));
        detail::emit(j, out);
      } else {
        out << "method: " << method_used << "\n";
        out << "menu: " << menu.str() << "\n";
        out << "stable: " << (verdict.stable ? "yes" : "no") << "\n";
        detail::print_verdict(out, verdict, params);
      }
    });
  }

  // reduce
  auto reduce_kind = std::make_shared<std::string>();
  auto reduce_file = std::make_shared<std::string>();
  auto reduce_t = std::make_shared<std::int64_t>(0);
  auto reduce_u = std::make_shared<std::int64_t>(0);
  auto reduce_out = std::make_shared<std::string>();
  auto reduce_json = std::make_shared<bool>(false);
  {
    CLI::App* sub = app.add_subcommand("reduce", "stability-preserving transformations");
    sub->add_option("file", *reduce_file, "instance file (JSON)")->required();
    sub->add_option("--kind", *reduce_kind, "embed|rare|popular")
        ->required()
        ->check(CLI::IsMember({"embed", "rare", "popular"}));
    sub->add_option("--t", *reduce_t, "feasibility threshold (rare|popular)");
    sub->add_option("--u", *reduce_u, "contest threshold (embed)");
    sub->add_option("-o,--output", *reduce_out, "write reduced instance here");
    sub->add_flag("--json", *reduce_json, "machine-readable output");
    sub->callback([&, reduce_kind, reduce_file, reduce_t, reduce_u, reduce_out,
                   reduce_json] {
      active_command = "reduce";
      active_json = *reduce_json;
      Problem p = detail::load_problem(*reduce_file);
      ReductionMap map;
      if (*reduce_kind == "embed") {
        if (*reduce_u < 1) throw UsageError("reduce --kind embed requires --u >= 1");
        map = complete_embedding(p, *reduce_u);
      } else if (*reduce_kind == "rare") {
        if (*reduce_t < 1) throw UsageError("reduce --kind rare requires --t >= 1");
        map = reduce_rarely_ranked(p, *reduce_t);
      } else {
        if (*reduce_t < 1) throw UsageError("reduce --kind popular requires --t >= 1");
        map = reduce_popular(p, *reduce_t);
      }
      if (!reduce_out->empty() || !*reduce_json) {
        if (!reduce_out->empty()) {
          detail::write_file(*reduce_out, serialize_problem(map.reduced));
          if (!*reduce_json) {
            out << "kind: " << *reduce_kind << "\n";
            if (map.kind == ReductionKind::kRarelyRanked)
              out << "kept: " << map.kept.str() << "\n";
            if (map.kind == ReductionKind::kPopular)
              out << "forced: " << map.forced.str() << "\n";
            if (map.kind == ReductionKind::kCompleteEmbedding)
              out << "added good: " << map.added << "\n";
            out << "wrote " << *reduce_out << "\n";
          }
        } else {
          out << serialize_problem(map.reduced);
        }
      }
      if (*reduce_json) {
        Json j = detail::json_root("reduce");
        j["kind"] = *reduce_kind;
        if (map.kind == ReductionKind::kRarelyRanked)
          j["kept"] = detail::menu_json(map.kept);
        if (map.kind == ReductionKind::kPopular)
          j["forced"] = detail::menu_json(map.forced);
        if (map.kind == ReductionKind::kCompleteEmbedding) j["added"] = map.added;
        if (reduce_out->empty())
          j["instance"] = detail::problem_json(map.reduced);
        else
          j["output"] = *reduce_out;
        detail::emit(j, out);
      }
    });
  }

  // generate
  auto gen_family = std::make_shared<std::string>();
  auto gen_out = std::make_shared<std::string>();
  auto gen_json = std::make_shared<bool>(false);
  auto gen_t = std::make_shared<std::int64_t>(0);
  auto gen_u = std::make_shared<std::int64_t>(0);
  auto gen_x = std::make_shared<std::int64_t>(1);
  auto gen_g = std::make_shared<int>(0);
  auto gen_n = std::make_shared<std::int64_t>(0);
  auto gen_seed = std::make_shared<std::uint64_t>(0);
  auto gen_which = std::make_shared<std::string>("A");
  auto gen_complete = std::make_shared<bool>(false);
  {
    CLI::App* sub = app.add_subcommand(
        "generate", "instance families: g2lower cyclic3 c4cycle gap7 "
                    "gap7complete twincohort structured random");
    sub->add_option("family", *gen_family, "family name")->required();
    sub->add_option("--t", *gen_t, "feasibility threshold parameter");
    sub->add_option("--u", *gen_u, "contest threshold parameter");
    sub->add_option("--x", *gen_x, "scale factor (gap7 families)");
    sub->add_option("--g", *gen_g, "number of goods");
    sub->add_option("--n", *gen_n, "number of agents (random)");
    sub->add_option("--seed", *gen_seed, "random/completion seed");
    sub->add_option("--which", *gen_which, "cohort A|B (twincohort)");
    sub->add_flag("--complete", *gen_complete, "complete lists (random)");
    sub->add_option("-o,--output", *gen_out, "write instance here");
    sub->add_flag("--json", *gen_json, "machine-readable output");
    sub->callback([&, gen_family, gen_out, gen_json, gen_t, gen_u, gen_x, gen_g,
                   gen_n, gen_seed, gen_which, gen_complete] {
      active_command = "generate";
      active_json = *gen_json;
      Problem p;
      const std::string& family = *gen_family;
      try {
        if (family == "g2lower") {
          p = gen_g2_lower(*gen_t, *gen_u);
        } else if (family == "cyclic3") {
          p = gen_cyclic3(*gen_t, *gen_u, *gen_g > 0 ? *gen_g : 3);
        } else if (family == "c4cycle") {
          p = gen_c4_cycle(*gen_t);
        } else if (family == "gap7") {
          p = gen_gap7(*gen_x, *gen_g > 0 ? *gen_g : 7);
        } else if (family == "gap7complete") {
          p = gen_gap7_complete(*gen_x, *gen_seed);
        } else if (family == "twincohort") {
          if (*gen_which != "A" && *gen_which != "B")
            throw UsageError("twincohort --which must be A or B");
          p = gen_twin_cohort(*gen_which == "A" ? Cohort::A : Cohort::B);
        } else if (family == "structured") {
          p = gen_structured(*gen_g, *gen_t);
        } else if (family == "random") {
          if (*gen_g < 1) throw UsageError("random needs --g >= 1");
          p = gen_random(*gen_g, *gen_n, *gen_seed, *gen_complete);
        } else {
          throw UsageError("unknown family '" + family + "'");
        }
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      detail::deliver_instance(p, *gen_out, *gen_json, "generate", out);
    });
  }

  // encode-smt
  auto smt_g = std::make_shared<int>(0);
  auto smt_ratio = std::make_shared<std::string>("1:2");
  auto smt_complete = std::make_shared<bool>(false);
  auto smt_fixed = std::make_shared<std::vector<std::int64_t>>();
  auto smt_out = std::make_shared<std::string>();
  auto smt_json = std::make_shared<bool>(false);
  {
    CLI::App* sub = app.add_subcommand(
        "encode-smt", "emit the stable-menu existence query as SMT-LIB 2");
    sub->add_option("--g", *smt_g, "number of goods")->required();
    sub->add_option("--ratio", *smt_ratio, "a:b meaning a*(u-1) >= b*(t-1)");
    sub->add_flag("--complete", *smt_complete, "complete-order universe");
    sub->add_option("--fixed", *smt_fixed, "fix t u to constants")->expected(2);
    sub->add_option("-o,--output", *smt_out, "write SMT-LIB here");
    sub->add_flag("--json", *smt_json, "machine-readable output");
    sub->callback([&, smt_g, smt_ratio, smt_complete, smt_fixed, smt_out, smt_json] {
      active_command = "encode-smt";
      active_json = *smt_json;
      RatioBound ratio;
      {
        auto sep = smt_ratio->find(':');
        if (sep == std::string::npos)
          throw UsageError("--ratio must look like a:b");
        try {
          ratio.a = std::stoll(smt_ratio->substr(0, sep));
          ratio.b = std::stoll(smt_ratio->substr(sep + 1));
        } catch (const std::exception&) {
          throw UsageError("--ratio must look like a:b");
        }
        if (ratio.a < 1 || ratio.b < 1)
          throw UsageError("--ratio parts must be >= 1");
      }
      std::optional<StabilityParams> fixed;
      if (!smt_fixed->empty()) fixed = StabilityParams{(*smt_fixed)[0], (*smt_fixed)[1]};
      std::string text;
      try {
        text = emit_smtlib(*smt_g, *smt_complete, ratio, fixed);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      if (smt_out->empty() && !*smt_json) {
        out << text;
      } else if (!smt_out->empty()) {
        detail::write_file(*smt_out, text);
      }
      if (*smt_json) {
        Json j = detail::json_root("encode-smt");
        j["g"] = *smt_g;
        j["complete"] = *smt_complete;
        j["ratio"] = *smt_ratio;
        if (smt_out->empty())
          j["smtlib"] = text;
        else
          j["output"] = *smt_out;
        detail::emit(j, out);
      } else if (!smt_out->empty()) {
        out << "wrote " << *smt_out << "\n";
      }
    });
  }

  // decode-model
  auto dec_file = std::make_shared<std::string>();
  auto dec_g = std::make_shared<int>(0);
  auto dec_complete = std::make_shared<bool>(false);
  auto dec_out = std::make_shared<std::string>();
  auto dec_json = std::make_shared<bool>(false);
  {
    CLI::App* sub = app.add_subcommand(
        "decode-model", "rebuild an instance from a solver model");
    sub->add_option("file", *dec_file, "model file (solver output)")->required();
    sub->add_option("--g", *dec_g, "number of goods used when encoding")->required();
    sub->add_flag("--complete", *dec_complete, "complete-order universe");
    sub->add_option("-o,--output", *dec_out, "write decoded instance here");
    sub->add_flag("--json", *dec_json, "machine-readable output");
    sub->callback([&, dec_file, dec_g, dec_complete, dec_out, dec_json] {
      active_command = "decode-model";
      active_json = *dec_json;
      PrefUniverse universe = pref_universe(*dec_g, *dec_complete);
      DecodedModel decoded = decode_model(detail::read_file(*dec_file), universe);
      if (*dec_json) {
        Json j = detail::json_root("decode-model");
        j["t"] = decoded.params.t;
        j["u"] = decoded.params.u;
        if (!dec_out->empty()) {
          detail::write_file(*dec_out, serialize_problem(decoded.problem));
          j["output"] = *dec_out;
        } else {
          j["instance"] = detail::problem_json(decoded.problem);
        }
        detail::emit(j, out);
      } else {
        out << "decoded: t=" << decoded.params.t << " u=" << decoded.params.u
            << ", " << decoded.problem.groups.size() << " groups, n="
            << decoded.problem.num_agents() << "\n";
        if (!dec_out->empty()) {
          detail::write_file(*dec_out, serialize_problem(decoded.problem));
          out << "wrote " << *dec_out << "\n";
        } else {
          out << serialize_problem(decoded.problem);
        }
      }
    });
  }

  // mechanism
  auto mech_args = std::make_shared<detail::CommonArgs>();
  auto mech_name = std::make_shared<std::string>("default");
  {
    CLI::App* sub = app.add_subcommand("mechanism", "run a menu selection mechanism");
    add_common(sub, *mech_args);
    sub->add_option("--mech", *mech_name, "g2|default")
        ->check(CLI::IsMember({"g2", "default"}));
    sub->callback([&, mech_args, mech_name] {
      active_command = "mechanism";
      active_json = mech_args->json;
      Problem p = detail::load_problem(mech_args->file);
      StabilityParams params{mech_args->t, mech_args->u};
      Menu menu = detail::mechanism_by_name(*mech_name)(p, params);
      if (mech_args->json) {
        Json j = detail::json_root("mechanism");
        j["mech"] = *mech_name;
        j["t"] = params.t;
        j["u"] = params.u;
        j["menu"] = detail::menu_json(menu);
        detail::emit(j, out);
      } else {
        out << "mechanism " << *mech_name << ": menu " << menu.str() << "\n";
      }
    });
  }

  // manipulate
  auto man_mech = std::make_shared<std::string>("default");
  auto man_g = std::make_shared<int>(0);
  auto man_n = std::make_shared<int>(0);
  auto man_t = std::make_shared<std::int64_t>(1);
  auto man_u = std::make_shared<std::int64_t>(1);
  auto man_incomplete = std::make_shared<bool>(false);
  auto man_json = std::make_shared<bool>(false);
  {
    CLI::App* sub = app.add_subcommand(
        "manipulate", "exhaustive strategyproofness scan over all profiles");
    sub->add_option("--mech", *man_mech, "g2|default")
        ->check(CLI::IsMember({"g2", "default"}));
    sub->add_option("--g", *man_g, "number of goods")->required();
    sub->add_option("--n", *man_n, "number of agents")->required();
    sub->add_option("--t", *man_t, "feasibility threshold")->required();
    sub->add_option("--u", *man_u, "contest threshold")->required();
    sub->add_flag("--incomplete", *man_incomplete, "scan truncated lists too");
    sub->add_flag("--json", *man_json, "machine-readable output");
    sub->callback([&, man_mech, man_g, man_n, man_t, man_u, man_incomplete,
                   man_json] {
      active_command = "manipulate";
      active_json = *man_json;
      StabilityParams params{*man_t, *man_u};
      std::vector<ManipulationWitness> witnesses = scan_strategyproofness(
          detail::mechanism_by_name(*man_mech), *man_g, *man_n, params,
          !*man_incomplete);
      if (*man_json) {
        Json j = detail::json_root("manipulate");
        j["mech"] = *man_mech;
        j["g"] = *man_g;
        j["n"] = *man_n;
        j["t"] = params.t;
        j["u"] = params.u;
        j["complete"] = !*man_incomplete;
        j["witness_count"] = witnesses.size();
        Json arr = Json::array();
        for (const auto& w : witnesses) {
          Json wj;
          wj["instance"] = detail::problem_json(w.problem);
          wj["group_index"] = w.group_index;
          wj["true_list"] = w.true_list.ranked;
          wj["misreport"] = w.misreport.ranked;
          wj["honest_outcome"] = w.honest_outcome;
          wj["deviant_outcome"] = w.deviant_outcome;
          arr.push_back(std::move(wj));
        }
        j["witnesses"] = std::move(arr);
        detail::emit(j, out);
      } else {
        out << "witnesses: " << witnesses.size() << "\n";
        for (const auto& w : witnesses) {
          out << "  group " << w.group_index << " true [";
          for (std::size_t i = 0; i < w.true_list.ranked.size(); ++i)
            out << (i ? "," : "") << w.true_list.ranked[i];
          out << "] misreport [";
          for (std::size_t i = 0; i < w.misreport.ranked.size(); ++i)
            out << (i ? "," : "") << w.misreport.ranked[i];
          out << "] outcome " << w.honest_outcome << " -> " << w.deviant_outcome
              << "\n";
        }
      }
    });
  }

  // gap
  auto gap_args = std::make_shared<detail::CommonArgs>();
  auto gap_k = std::make_shared<int>(0);
  {
    CLI::App* sub = app.add_subcommand(
        "gap", "check the all-size-k-contested / all-size-k+1-infeasible gap");
    add_common(sub, *gap_args);
    sub->add_option("--k", *gap_k, "gap position")->required();
    sub->callback([&, gap_args, gap_k] {
      active_command = "gap";
      active_json = gap_args->json;
      Problem p = detail::load_problem(gap_args->file);
      StabilityParams params{gap_args->t, gap_args->u};
      if (*gap_k < 0 || *gap_k >= p.num_goods)
        throw UsageError("--k must satisfy 0 <= k < num_goods");
      bool gap = check_gap(p, params, *gap_k);
      if (gap_args->json) {
        Json j = detail::json_root("gap");
        j["t"] = params.t;
        j["u"] = params.u;
        j["k"] = *gap_k;
        j["gap"] = gap;
        detail::emit(j, out);
      } else {
        out << "gap(k=" << *gap_k << "): " << (gap ? "yes" : "no") << "\n";
      }
    });
  }

  std::vector<std::string> reversed(argv.rbegin(), argv.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    if (active_json) {
      Json j = detail::json_root(active_command.empty() ? "error" : active_command);
      j["error"] = e.what();
      detail::emit(j, out);
    } else {
      err << "error: " << e.what() << "\n";
    }
    return 1;
  }
  return exit_code;
}

}  // namespace menusel::cli

#endif  // MENUSEL_CLI_HPP
