// Copyright 2026 The Cheaptalk Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end.
//
// Exit codes: 0 success / positive verdict, 1 negative verdict,
// 2 usage, parse or validation error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cheaptalk/cheaptalk.hpp"
#include "cheaptalk/io.hpp"

namespace cheaptalk {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitUsage = 2;

struct VerifyArgs {
  std::string game_path;
  std::string dist_path;
  std::string mode = "exact";
  double tolerance = kFloatTolerance;
  bool json = false;
};

struct SolveArgs {
  std::string game_path;
  std::string objective = "welfare";
  std::string mode = "exact";
  std::string out_path;
  bool json = false;
};

struct NashArgs {
  std::string game_path;
  std::string compare_path;
  bool json = false;
};

struct PunishArgs {
  std::string game_path;
  std::string dist_path;
  std::string served = "P1";
  std::string unserved = "P2";
  bool json = false;
};

struct SimulateArgs {
  std::string scenario_path;
  std::optional<std::uint64_t> rounds;
  std::optional<Seed> seed;
  std::string out_path;
  std::string csv_path;
  bool json = false;
};

void PrintJson(const Json& j) { std::cout << j.dump(2) << "\n"; }

RunManifest Manifest(std::string command, std::vector<std::string> inputs,
                     Json parameters, Seed seed, const Json& body) {
  RunManifest m;
  m.command = std::move(command);
  m.input_paths = std::move(inputs);
  m.parameters = std::move(parameters);
  m.seed = seed;
  m.output_digest = DigestOf(body);
  return m;
}

template <Scalar T>
int Verify(const VerifyArgs& args) {
  auto exact_game = LoadGame(args.game_path);
  auto game = ConvertGame<T>(exact_game);
  // Masses are read exactly, then converted, so a file summing to 1 as
  // decimals also passes in float mode.
  auto dist = ConvertDistribution<T>(LoadDistribution(exact_game, args.dist_path));
  auto report = VerifyCorrelated(game, dist, args.tolerance);
  if (args.json) {
    Json body = CeReportToJson(game, report);
    body["manifest"] = ManifestToJson(Manifest(
        "verify", {args.game_path, args.dist_path},
        {{"mode", args.mode}, {"tolerance", args.tolerance}}, 0, body));
    PrintJson(body);
  } else {
    std::cout << CeReportTable(game, report);
    for (const auto& v : report.Violations()) {
      std::cout << "violation: " << game.player_names()[v.player]
                << " told " << game.label(v.player, v.recommended)
                << " gains " << FormatScalar(v.gain) << " by playing "
                << game.label(v.player, v.alternative) << "\n";
    }
  }
  return report.verdict ? kExitOk : kExitNegative;
}

CeObjective ParseObjective(const NormalFormGame<Rational>& game,
                           const std::string& text) {
  if (text == "welfare") return CeObjective::MaxWelfare();
  if (text == "feasible") return CeObjective::Feasible();
  if (text.rfind("player=", 0) == 0) {
    std::string who = text.substr(7);
    bool numeric = !who.empty() &&
                   who.find_first_not_of("0123456789") == std::string::npos;
    if (numeric) {
      // 1-based, matching the P1/P2 naming.
      std::size_t i = std::stoul(who);
      if (i < 1 || i > game.player_count()) {
        throw GameError("player " + who + " out of range");
      }
      return CeObjective::MaxPlayer(i - 1);
    }
    return CeObjective::MaxPlayer(game.PlayerByName(who));
  }
  throw std::invalid_argument("unknown objective '" + text +
                              "' (welfare, feasible, player=i)");
}

template <Scalar T>
int SolveCeCommand(const SolveArgs& args) {
  auto exact_game = LoadGame(args.game_path);
  auto game = ConvertGame<T>(exact_game);
  CeObjective objective = ParseObjective(exact_game, args.objective);
  auto dist = SolveCe(game, objective);
  auto payoffs = ExpectedPayoffs(game, dist);
  T welfare = 0;
  for (const auto& p : payoffs) welfare += p;
  Json dist_json = DistributionToJson(game, dist);
  if (!args.out_path.empty()) WriteTextFile(args.out_path, dist_json.dump(2) + "\n");
  if (args.json) {
    Json body{{"distribution", dist_json},
              {"payoffs", PayoffsToJson(payoffs)},
              {"welfare", ScalarToJson(welfare)}};
    body["manifest"] = ManifestToJson(Manifest(
        "solve-ce", {args.game_path},
        {{"objective", args.objective}, {"mode", args.mode}}, 0, body));
    PrintJson(body);
  } else {
    std::cout << "distribution:\n";
    for (const auto& [index, mass] : dist.entries()) {
      std::cout << "  (" << game.OutcomeKey(game.Decode(index)) << ") "
                << FormatScalar(mass) << "\n";
    }
    std::cout << "payoffs:";
    for (const auto& p : payoffs) std::cout << " " << FormatScalar(p);
    std::cout << "\nwelfare: " << FormatScalar(welfare) << "\n";
  }
  return kExitOk;
}

int NashCommand(const NashArgs& args) {
  auto game = LoadGame(args.game_path);
  auto nash = NashTwoPlayer(game);
  Json body = NashListToJson(game, nash);
  std::optional<PayoffHull<Rational>> hull;
  if (!nash.equilibria.empty()) {
    hull = NashPayoffHull(nash);
    body["hull"] = HullToJson(*hull);
  }
  std::optional<bool> inside;
  PayoffVector<Rational> compared;
  if (!args.compare_path.empty()) {
    auto dist = LoadDistribution(game, args.compare_path);
    compared = ExpectedPayoffs(game, dist);
    if (hull) inside = HullContains(*hull, compared);
    body["compare"] = {{"payoffs", PayoffsToJson(compared)},
                       {"correlated", VerifyCorrelated(game, dist).verdict},
                       {"inside_nash_hull", inside ? Json(*inside) : Json()}};
  }
  if (args.json) {
    body["manifest"] = ManifestToJson(Manifest(
        "nash", {args.game_path}, {{"compare", args.compare_path}}, 0, body));
    PrintJson(body);
    return kExitOk;
  }
  std::cout << nash.equilibria.size() << " equilibri"
            << (nash.equilibria.size() == 1 ? "um" : "a") << "\n";
  for (const auto& eq : nash.equilibria) {
    std::cout << " ";
    for (PlayerIndex i = 0; i < 2; ++i) {
      std::cout << " " << game.player_names()[i] << "{";
      bool first = true;
      for (StrategyIndex s = 0; s < eq.profile[i].size(); ++s) {
        if (eq.profile[i][s] == 0) continue;
        std::cout << (first ? "" : " ") << game.label(i, s) << ":"
                  << FormatScalar(eq.profile[i][s]);
        first = false;
      }
      std::cout << "}";
    }
    std::cout << "  payoffs (" << FormatScalar(eq.payoffs[0]) << ", "
              << FormatScalar(eq.payoffs[1]) << ")\n";
  }
  if (nash.degenerate) {
    std::cout << "warning: degenerate game, " << nash.warnings.size()
              << " support pair(s) skipped; the list may be incomplete\n";
  }
  if (hull) {
    std::cout << "nash payoff hull:";
    for (const auto& v : hull->vertices()) {
      std::cout << " (" << FormatScalar(v.x) << ", " << FormatScalar(v.y) << ")";
    }
    std::cout << "\n";
  }
  if (!args.compare_path.empty()) {
    std::cout << "compared payoffs (" << FormatScalar(compared[0]) << ", "
              << FormatScalar(compared[1]) << ") "
              << (inside.value_or(false) ? "inside" : "outside")
              << " the nash payoff hull\n";
  }
  return kExitOk;
}

int PunishCommand(const PunishArgs& args) {
  auto game = LoadGame(args.game_path);
  auto dist = LoadDistribution(game, args.dist_path);
  auto report = VerifyPunishmentEquilibrium(game, dist, game.PlayerByName(args.served),
                                            game.PlayerByName(args.unserved));
  const auto& profile = report.profile;
  Json deviations = Json::array();
  for (const auto& d : report.deviations) {
    deviations.push_back(
        {{"player", game.player_names()[d.player]},
         {"recommendation",
          d.recommendation ? Json(game.label(d.player, *d.recommendation)) : Json()},
         {"from", game.label(d.player, d.from)},
         {"to", game.label(d.player, d.to)},
         {"gain", ScalarToJson(d.gain)}});
  }
  Json body{{"verdict", report.verdict},
            {"served", game.player_names()[profile.served]},
            {"unserved", game.player_names()[profile.unserved]},
            {"punishing_action", game.label(profile.unserved, profile.unserved_action())},
            {"minimax_value", ScalarToJson(profile.minimax.value)},
            {"payoffs", PayoffsToJson(report.payoffs)},
            {"worst_gain", ScalarToJson(report.worst_gain)},
            {"deviations", deviations}};
  if (args.json) {
    body["manifest"] = ManifestToJson(Manifest(
        "punish", {args.game_path, args.dist_path},
        {{"served", args.served}, {"unserved", args.unserved}}, 0, body));
    PrintJson(body);
  } else {
    std::cout << "punishment equilibrium: " << (report.verdict ? "yes" : "NO")
              << "\n  " << game.player_names()[profile.unserved] << " punishes with "
              << game.label(profile.unserved, profile.unserved_action())
              << " (minimax value " << FormatScalar(profile.minimax.value) << ")\n";
    for (const auto& d : report.deviations) {
      std::cout << "  " << game.player_names()[d.player];
      if (d.recommendation) {
        std::cout << " told " << game.label(d.player, *d.recommendation);
      } else {
        std::cout << " unserved";
      }
      std::cout << ": " << game.label(d.player, d.from) << " -> "
                << game.label(d.player, d.to) << " gain " << FormatScalar(d.gain)
                << "\n";
    }
  }
  return report.verdict ? kExitOk : kExitNegative;
}

int SimulateCommand(const SimulateArgs& args) {
  Scenario s = LoadScenario(args.scenario_path);
  if (args.rounds) s.rounds = *args.rounds;
  if (args.seed) s.seed = *args.seed;
  RunOptions options;
  options.record_rounds = !args.csv_path.empty();

  Json body;
  std::vector<RoundRecord> records;
  std::vector<double> payoffs;
  std::vector<double> errors;
  if (s.IsFair()) {
    auto r = RunMediated(s.game, s.config.distribution, s.policies, s.seed,
                         s.rounds, options);
    body = MediatedResultToJson(s.game, r);
    records = std::move(r.records);
    payoffs = r.empirical_payoffs;
    errors = r.payoff_std_errors;
  } else {
    auto r = RunCheapTalk(s.game, s.config, s.adversary, s.policies, s.seed,
                          s.rounds, options);
    body = CheapTalkResultToJson(s.game, r);
    records = std::move(r.records);
    payoffs = r.empirical_payoffs;
    errors = r.payoff_std_errors;
  }
  // Analytic value of the simulated profile, for comparison with the
  // empirical means.
  std::vector<Rational> delivery(s.game.player_count(), Rational(1));
  for (PlayerIndex i = 0; i < delivery.size(); ++i) {
    if (s.config.abort_set.count(i)) {
      delivery[i] = 0;
    } else {
      delivery[i] = Rational(1) - Rational(s.adversary.block_probability[i]);
    }
  }
  auto analytic = AnalyticPolicyPayoffs(s.game, s.config.distribution,
                                        s.policies, delivery);
  body["analytic_payoffs"] = PayoffsToJson(analytic);
  Json policies = Json::array();
  for (PlayerIndex i = 0; i < s.policies.size(); ++i) {
    policies.push_back(PolicyToJson(s.game, i, s.policies[i]));
  }
  body["policies"] = policies;

  Json params{{"rounds", s.rounds}};
  body["manifest"] = ManifestToJson(Manifest(
      "simulate", {args.scenario_path}, params, s.seed, body));
  if (!args.out_path.empty()) WriteTextFile(args.out_path, body.dump(2) + "\n");
  if (!args.csv_path.empty()) WriteTextFile(args.csv_path, RoundsToCsv(s.game, records));

  if (args.json) {
    PrintJson(body);
  } else {
    std::cout << "protocol: " << body["protocol"].get<std::string>()
              << "  rounds: " << s.rounds << "  seed: " << s.seed << "\n";
    for (PlayerIndex i = 0; i < s.game.player_count(); ++i) {
      std::cout << "  " << s.game.player_names()[i] << ": empirical "
                << payoffs[i] << " +/- " << errors[i] << " (analytic "
                << FormatScalar(analytic[i]) << ")\n";
    }
    std::cout << "transcript digest: "
              << body["transcript_digest"].get<std::string>() << "\n";
  }
  return kExitOk;
}

int Main(int argc, char** argv) {
  CLI::App app{"Correlated equilibria, mediated and cheap-talk games"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand(
      "verify", "Check whether a distribution is a correlated equilibrium");
  verify_cmd->add_option("game", verify.game_path, "Game JSON")->required();
  verify_cmd->add_option("distribution", verify.dist_path, "Distribution JSON")
      ->required();
  verify_cmd->add_option("--mode", verify.mode, "exact or float")
      ->check(CLI::IsMember({"exact", "float"}));
  verify_cmd->add_option("--tolerance", verify.tolerance,
                         "Float-mode tolerance on gains");
  verify_cmd->add_flag("--json", verify.json, "Machine-readable output");

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand(
      "solve-ce", "Compute a correlated equilibrium by linear programming");
  solve_cmd->add_option("game", solve.game_path, "Game JSON")->required();
  solve_cmd->add_option("--objective", solve.objective,
                        "welfare, feasible or player=i");
  solve_cmd->add_option("--mode", solve.mode, "exact or float")
      ->check(CLI::IsMember({"exact", "float"}));
  solve_cmd->add_option("--out", solve.out_path, "Write the distribution here");
  solve_cmd->add_flag("--json", solve.json, "Machine-readable output");

  NashArgs nash;
  auto* nash_cmd = app.add_subcommand(
      "nash", "Two-player Nash equilibria by support enumeration");
  nash_cmd->add_option("game", nash.game_path, "Game JSON")->required();
  nash_cmd->add_option("--compare", nash.compare_path,
                       "Distribution whose payoff is tested against the hull");
  nash_cmd->add_flag("--json", nash.json, "Machine-readable output");

  PunishArgs punish;
  auto* punish_cmd = app.add_subcommand(
      "punish", "Verify the minimax punishment profile when one output is blocked");
  punish_cmd->add_option("game", punish.game_path, "Game JSON")->required();
  punish_cmd->add_option("distribution", punish.dist_path, "CE distribution JSON")
      ->required();
  punish_cmd->add_option("--served", punish.served, "Player who receives output");
  punish_cmd->add_option("--unserved", punish.unserved, "Player who is blocked");
  punish_cmd->add_flag("--json", punish.json, "Machine-readable output");

  SimulateArgs simulate;
  auto* simulate_cmd = app.add_subcommand(
      "simulate", "Run a mediated or cheap-talk scenario");
  simulate_cmd->add_option("scenario", simulate.scenario_path, "Scenario JSON")
      ->required();
  simulate_cmd->add_option("--rounds", simulate.rounds, "Override rounds");
  simulate_cmd->add_option("--seed", simulate.seed, "Override seed");
  simulate_cmd->add_option("--out", simulate.out_path, "Write result JSON here");
  simulate_cmd->add_option("--csv", simulate.csv_path,
                           "Write the per-round audit log here");
  simulate_cmd->add_flag("--json", simulate.json, "Machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (name == "verify") {
      return verify.mode == "exact" ? Verify<Rational>(verify)
                                    : Verify<double>(verify);
    }
    if (name == "solve-ce") {
      return solve.mode == "exact" ? SolveCeCommand<Rational>(solve)
                                   : SolveCeCommand<double>(solve);
    }
    if (name == "nash") return NashCommand(nash);
    if (name == "punish") return PunishCommand(punish);
    if (name == "simulate") return SimulateCommand(simulate);
  } catch (const std::exception& e) {
    // Game, distribution, policy and format validation failures.
    std::string message = e.what();
    if (message.rfind(name + ":", 0) != 0) message = name + ": " + message;
    std::cerr << message << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace
}  // namespace cheaptalk

int main(int argc, char** argv) { return cheaptalk::Main(argc, argv); }
