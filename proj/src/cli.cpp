#include "decoygraph/cli.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "decoygraph/errors.hpp"
#include "decoygraph/evaluation.hpp"
#include "decoygraph/format.hpp"
#include "decoygraph/mitigation.hpp"
#include "decoygraph/zeroday.hpp"
#include "json.hpp"

namespace decoygraph {

using nlohmann::json;

namespace {

struct Common {
  std::string graph;
  std::string params;
  std::string output;
  std::string format;
  std::optional<std::size_t> max_hops;
};

struct Loaded {
  AttackGraph graph;
  GameParams params;
  GameOptions options;
};

Loaded load(const Common& c) {
  AttackGraph g = load_graph_file(c.graph);
  GameParams p = load_params_file(c.params);
  validate_params(p, g);
  GameOptions options;
  options.paths.max_hops = c.max_hops;
  return {std::move(g), p, options};
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

std::string join_nodes(const std::vector<NodeId>& ids, char sep) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(ids[i]);
  }
  return s;
}

Criterion parse_criterion(const std::string& s) {
  return s == "opt" || s == "optimistic" ? Criterion::optimistic : Criterion::pessimistic;
}

PessimisticAttacker parse_pessimistic(const std::string& s) {
  // game2_ne keeps the defender on its game-1 allocations inside game 2.
  return s == "game2_ne" ? PessimisticAttacker::restricted_equilibrium
                         : PessimisticAttacker::best_response;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  return parts;
}

double parse_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ValidationError("not a number: \"" + s + "\"");
  }
  if (used != s.size()) throw ValidationError("not a number: \"" + s + "\"");
  return v;
}

std::string solve_output(const Loaded& in, const std::string& format) {
  GameInstance game = build_matrix(in.graph, in.params, in.options);
  GameSolution sol = solve_zero_sum(game.payoff);
  std::ostringstream out;
  if (format == "csv") {
    out << "player,index,label,probability\n";
    for (std::size_t i = 0; i < sol.defender_strategy.size(); ++i)
      if (sol.defender_strategy[i] > 1e-12)
        out << "defender," << i << ',' << quoted(to_string(game.defender_actions[i], in.graph))
            << ',' << fixed6(sol.defender_strategy[i]) << '\n';
    for (std::size_t j = 0; j < sol.attacker_strategy.size(); ++j)
      if (sol.attacker_strategy[j] > 1e-12)
        out << "attacker," << j << ',' << quoted(to_string(game.attack_paths[j])) << ','
            << fixed6(sol.attacker_strategy[j]) << '\n';
    out << "value,,," << fixed6(sol.value) << '\n';
    return out.str();
  }
  json doc;
  doc["value"] = round6(sol.value);
  doc["defender_gap"] = round6(sol.defender_gap);
  doc["attacker_gap"] = round6(sol.attacker_gap);
  doc["defender_actions"] = game.defender_actions.size();
  doc["attack_paths"] = game.attack_paths.size();
  doc["defender_strategy"] = json::array();
  for (std::size_t i = 0; i < sol.defender_strategy.size(); ++i)
    if (sol.defender_strategy[i] > 1e-12)
      doc["defender_strategy"].push_back({{"index", i},
                                          {"action", to_string(game.defender_actions[i], in.graph)},
                                          {"probability", round6(sol.defender_strategy[i])}});
  doc["attacker_strategy"] = json::array();
  for (std::size_t j = 0; j < sol.attacker_strategy.size(); ++j)
    if (sol.attacker_strategy[j] > 1e-12)
      doc["attacker_strategy"].push_back({{"index", j},
                                          {"path", to_string(game.attack_paths[j])},
                                          {"probability", round6(sol.attacker_strategy[j])}});
  return doc.dump(2) + "\n";
}

std::string paths_output(const Loaded& in, const std::string& format) {
  std::vector<AttackPath> paths = enumerate_attack_paths(in.graph, in.options.paths);
  std::ostringstream out;
  if (format == "json") {
    json doc = json::array();
    for (const AttackPath& p : paths)
      doc.push_back({{"entry", p.entry()}, {"target", p.target()}, {"hops", p.hops()}, {"nodes", p.nodes}});
    return doc.dump(2) + "\n";
  }
  out << "index,entry,target,hops,nodes\n";
  for (std::size_t j = 0; j < paths.size(); ++j)
    out << j << ',' << paths[j].entry() << ',' << paths[j].target() << ',' << paths[j].hops() << ','
        << join_nodes(paths[j].nodes, ';') << '\n';
  return out.str();
}

struct Scan {
  GameInstance game1;
  GameSolution sol1;
  ZeroDayReport report;
};

Scan scan(const Loaded& in, const ScanOptions& options) {
  GameInstance game1 = build_matrix(in.graph, in.params, in.options);
  GameSolution sol1 = solve_zero_sum(game1.payoff);
  std::vector<ZeroDayCandidate> candidates = generate_zero_day_candidates(in.graph);
  ZeroDayReport report = scan_candidates(game1, sol1, candidates, options);
  rank_candidates(report.rows);
  return {std::move(game1), std::move(sol1), std::move(report)};
}

struct MitigateArgs {
  std::string strategy = "alpha";
  std::string criterion = "pes";
  std::string pessimistic_y = "best_response";
  std::size_t k = 1;
  double kappa = 1.5;
  double budget = 1.0;
  std::size_t locations = 10;
  std::size_t critical_top = 3;
  bool with_honeypot = false;
  std::uint64_t seed = 0;
};

std::string mitigate_output(const Loaded& in, const MitigateArgs& a, const std::string& format) {
  ScanOptions so{parse_criterion(a.criterion), parse_pessimistic(a.pessimistic_y)};
  Scan s = scan(in, so);
  if (s.report.rows.empty()) throw ValidationError("no zero-day candidates to mitigate");
  MitigationPlan plan;
  switch (parse_mitigation_kind(a.strategy)) {
    case MitigationKind::alpha:
      plan = alpha_mitigation(s.report, a.k);
      break;
    case MitigationKind::lp:
      plan = lp_mitigation(lp_input_from_report(s.report, a.budget));
      break;
    case MitigationKind::nature: {
      const std::size_t n = std::min(a.locations, s.report.rows.size());
      if (n == 0) throw ValidationError("--locations must be positive");
      NatureGame ng = nature_game(s.game1, s.sol1,
                                  std::span<const ZeroDayRow>(s.report.rows.data(), n), so.criterion);
      plan = nature_mitigation(ng);
      break;
    }
    case MitigationKind::critical_point:
      plan = critical_point_mitigation(s.game1, s.sol1, s.report,
                                       {a.kappa, a.critical_top, a.with_honeypot});
      break;
    case MitigationKind::random:
      plan = random_mitigation(s.report, a.seed, a.k);
      break;
    case MitigationKind::none:
      plan = no_mitigation();
      break;
  }
  MitigationMetrics m = evaluate_mitigation(plan, s.game1, s.sol1, s.report, so.criterion);
  if (format == "csv") {
    std::ostringstream out;
    out << "edge_u,edge_v,reward_before,reward_after,reference,prevented,capture_before,capture_after\n";
    for (const CandidateOutcome& c : m.candidates)
      out << c.edge.from << ',' << c.edge.to << ',' << fixed6(c.reward_before) << ','
          << fixed6(c.reward_after) << ',' << fixed6(c.reference) << ',' << (c.prevented ? 1 : 0)
          << ',' << fixed6(c.capture_before) << ',' << fixed6(c.capture_after) << '\n';
    return out.str();
  }
  return plan_to_json(plan, m) + "\n";
}

std::string evaluate_output(const Loaded& in, const std::string& def, const std::string& atk,
                            const std::string& format) {
  GameInstance game = build_matrix(in.graph, in.params, in.options);
  GameSolution sol = solve_zero_sum(game.payoff);
  EvaluationRow r = evaluate_pair(game, sol, parse_policy_kind(def), parse_policy_kind(atk));
  if (format == "json") {
    json doc{{"def_policy", to_string(r.defender)},   {"atk_policy", to_string(r.attacker)},
             {"def_reward", round6(r.defender_reward)}, {"atk_reward", round6(r.attacker_reward)},
             {"capture", round6(r.capture)},          {"game_value", round6(r.game_value)}};
    return doc.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "def_policy,atk_policy,def_reward,atk_reward,capture,game_value\n"
      << to_string(r.defender) << ',' << to_string(r.attacker) << ',' << fixed6(r.defender_reward)
      << ',' << fixed6(r.attacker_reward) << ',' << fixed6(r.capture) << ',' << fixed6(r.game_value)
      << '\n';
  return out.str();
}

std::string sweep_output(const Loaded& in, const std::string& param, const std::string& values,
                         const std::string& def, const std::string& atk, const std::string& format) {
  SweepConfig cfg;
  cfg.parameter = parse_sweep_parameter(param);
  cfg.params = in.params;
  cfg.defender = parse_policy_kind(def);
  cfg.attacker = parse_policy_kind(atk);
  for (const std::string& part : split(values, ',')) {
    if (cfg.parameter == SweepParameter::entry_nodes) {
      std::vector<NodeId> ids;
      for (const std::string& id : split(part, ';')) ids.push_back(static_cast<NodeId>(parse_number(id)));
      cfg.entry_sets.push_back(std::move(ids));
    } else {
      cfg.values.push_back(parse_number(part));
    }
  }
  EvaluationResult res = sweep(cfg, in.graph, in.options);
  std::ostringstream out;
  if (format == "json") {
    json doc = json::array();
    for (const EvaluationRow& r : res.rows)
      doc.push_back({{"param", param},
                     {"value", r.label},
                     {"def_policy", to_string(r.defender)},
                     {"atk_policy", to_string(r.attacker)},
                     {"def_reward", round6(r.defender_reward)},
                     {"atk_reward", round6(r.attacker_reward)},
                     {"capture", round6(r.capture)}});
    return doc.dump(2) + "\n";
  }
  write_evaluation_csv(res, param, out);
  return out.str();
}

void add_common(CLI::App* sub, Common& c, const std::string& default_format) {
  sub->add_option("-g,--graph", c.graph, "attack graph JSON")->required();
  sub->add_option("-p,--params", c.params, "game parameter JSON")->required();
  sub->add_option("-o,--output", c.output, "write output here instead of stdout");
  c.format = default_format;
  sub->add_option("--format", c.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sub->add_option("--max-hops", c.max_hops, "ignore paths longer than this");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Honeypot allocation and zero-day analysis on attack graphs", "decoygraph"};
  app.require_subcommand(1);

  Common common;
  auto* solve_cmd = app.add_subcommand("solve", "solve the base game");
  add_common(solve_cmd, common, "json");

  Common paths_common;
  auto* paths_cmd = app.add_subcommand("paths", "list attack paths");
  add_common(paths_cmd, paths_common, "csv");

  Common scan_common;
  std::string scan_criterion = "pes";
  std::string scan_pes_y = "best_response";
  std::size_t top = 0;
  auto* scan_cmd = app.add_subcommand("zeroday-scan", "rank zero-day candidate edges");
  add_common(scan_cmd, scan_common, "csv");
  scan_cmd->add_option("--criterion", scan_criterion)
      ->check(CLI::IsMember({"opt", "pes", "optimistic", "pessimistic"}));
  scan_cmd->add_option("--top", top, "keep only the first N rows (0 keeps all)");
  scan_cmd->add_option("--pessimistic-y", scan_pes_y)
      ->check(CLI::IsMember({"best_response", "game2_ne"}));

  Common mit_common;
  MitigateArgs mit;
  auto* mit_cmd = app.add_subcommand("mitigate", "build and evaluate a mitigation plan");
  add_common(mit_cmd, mit_common, "json");
  mit_cmd->add_option("--strategy", mit.strategy)
      ->check(CLI::IsMember({"alpha", "lp", "nature", "critical", "random", "none"}));
  mit_cmd->add_option("--criterion", mit.criterion)
      ->check(CLI::IsMember({"opt", "pes", "optimistic", "pessimistic"}));
  mit_cmd->add_option("--pessimistic-y", mit.pessimistic_y)
      ->check(CLI::IsMember({"best_response", "game2_ne"}));
  mit_cmd->add_option("-k", mit.k, "pinned honeypots for alpha/random")->check(CLI::PositiveNumber);
  mit_cmd->add_option("--kappa", mit.kappa)->check(CLI::Range(1.0, 1e9));
  mit_cmd->add_option("--budget-m", mit.budget)->check(CLI::NonNegativeNumber);
  mit_cmd->add_option("--locations", mit.locations, "nature-game locations")->check(CLI::PositiveNumber);
  mit_cmd->add_option("--critical-top", mit.critical_top)->check(CLI::PositiveNumber);
  mit_cmd->add_flag("--with-honeypot", mit.with_honeypot);
  mit_cmd->add_option("--seed", mit.seed);

  Common eval_common;
  std::string eval_def = "nash";
  std::string eval_atk = "nash";
  auto* eval_cmd = app.add_subcommand("evaluate", "evaluate a policy pair");
  add_common(eval_cmd, eval_common, "csv");
  eval_cmd->add_option("--defender", eval_def)->check(CLI::IsMember({"nash", "greedy", "random"}));
  eval_cmd->add_option("--attacker", eval_atk)->check(CLI::IsMember({"nash", "greedy", "random"}));

  Common sweep_common;
  std::string sweep_param;
  std::string sweep_values;
  std::string sweep_def = "nash";
  std::string sweep_atk = "nash";
  auto* sweep_cmd = app.add_subcommand("sweep", "sweep one parameter");
  add_common(sweep_cmd, sweep_common, "csv");
  sweep_cmd->add_option("--param", sweep_param)
      ->required()
      ->check(CLI::IsMember({"esc", "cap", "honeypots", "entry_nodes"}));
  sweep_cmd->add_option("--values", sweep_values, "comma-separated; entry sets use ';' inside")
      ->required();
  sweep_cmd->add_option("--defender", sweep_def)->check(CLI::IsMember({"nash", "greedy", "random"}));
  sweep_cmd->add_option("--attacker", sweep_atk)->check(CLI::IsMember({"nash", "greedy", "random"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 1;
  }

  try {
    std::string text;
    const Common* used = nullptr;
    if (solve_cmd->parsed()) {
      used = &common;
      text = solve_output(load(common), common.format);
    } else if (paths_cmd->parsed()) {
      used = &paths_common;
      text = paths_output(load(paths_common), paths_common.format);
    } else if (scan_cmd->parsed()) {
      used = &scan_common;
      Scan s = scan(load(scan_common), {parse_criterion(scan_criterion), parse_pessimistic(scan_pes_y)});
      if (top > 0 && s.report.rows.size() > top) s.report.rows.resize(top);
      if (scan_common.format == "json") {
        text = report_to_json(s.report) + "\n";
      } else {
        std::ostringstream o;
        write_report_csv(s.report, o);
        text = o.str();
      }
    } else if (mit_cmd->parsed()) {
      used = &mit_common;
      text = mitigate_output(load(mit_common), mit, mit_common.format);
    } else if (eval_cmd->parsed()) {
      used = &eval_common;
      text = evaluate_output(load(eval_common), eval_def, eval_atk, eval_common.format);
    } else {
      used = &sweep_common;
      text = sweep_output(load(sweep_common), sweep_param, sweep_values, sweep_def, sweep_atk,
                          sweep_common.format);
    }

    if (used->output.empty()) {
      out << text;
    } else {
      std::ofstream f(used->output, std::ios::binary);
      if (!f) throw ValidationError("cannot write output file: " + used->output);
      f << text;
      if (!f) throw ValidationError("failed writing output file: " + used->output);
    }
    return 0;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace decoygraph
