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

#pragma once

// JSON and CSV formats.
//
// Game:
//   { "players": ["P1","P2"], "strategies": [["C","D"],["C","D"]],
//     "utilities": { "C,C": [3,3], "C,D": [0,5], "D,C": [5,0], "D,D": [1,1] } }
//
// Distribution (probabilities are strings holding rationals or decimals;
// plain JSON numbers are accepted too):
//   { "mass": { "C,C": "1/3", "C,D": "1/3", "D,C": "1/3" } }
//
// Scenario (paths are relative to the scenario file):
//   { "game": "chicken.json", "distribution": "chicken_ce.json",
//     "blocking": [0, 1], "abort": ["P2"], "seed": 7, "rounds": 100000,
//     "security_parameter": 128,
//     "policies": [ "obedient",
//                   {"kind": "mapped", "map": {"C": "D", "D": "D"},
//                    "no_output": "D"} ],
//     "punishment": { "served": "P1", "unserved": "P2" } }
//
// "punishment" replaces "policies" with the minimax punishment profile.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "cheaptalk/cheap_talk.hpp"
#include "cheaptalk/equilibria.hpp"
#include "cheaptalk/game.hpp"
#include "cheaptalk/hull.hpp"
#include "cheaptalk/mediation.hpp"
#include "cheaptalk/policy.hpp"

namespace cheaptalk {

using Json = nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace internal {

inline std::vector<std::string> SplitKey(const std::string& key) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : key) {
    if (c == ',') {
      parts.push_back(current);
      current.clear();
    } else if (c != ' ') {
      current += c;
    }
  }
  parts.push_back(current);
  return parts;
}

inline const Json& Require(const Json& j, const char* field) {
  if (!j.is_object() || !j.contains(field)) {
    throw FormatError(std::string("missing field '") + field + "'");
  }
  return j.at(field);
}

template <Scalar T>
Outcome OutcomeFromKey(const NormalFormGame<T>& game, const std::string& key) {
  auto parts = SplitKey(key);
  if (parts.size() != game.player_count()) {
    throw FormatError("outcome key '" + key + "' has " +
                      std::to_string(parts.size()) + " labels, expected " +
                      std::to_string(game.player_count()));
  }
  Outcome o;
  for (PlayerIndex i = 0; i < parts.size(); ++i) {
    o.actions.push_back(game.StrategyByLabel(i, parts[i]));
  }
  return o;
}

}  // namespace internal

inline Rational RationalFromJson(const Json& j) {
  if (j.is_string()) return ParseRational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_number_unsigned()) return Rational(j.get<std::uint64_t>());
  // Shortest round-trip text of the double, read as an exact decimal.
  if (j.is_number_float()) return ParseRational(j.dump());
  throw FormatError("expected a number, got " + j.dump());
}

template <Scalar T>
Json ScalarToJson(const T& x) {
  if constexpr (kIsExact<T>) {
    return x.str();
  } else {
    return x;
  }
}

inline Json ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

inline void WriteTextFile(const std::filesystem::path& path,
                          const std::string& text) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << text;
}

// ---------------------------------------------------------------------------
// Games

inline NormalFormGame<Rational> GameFromJson(const Json& j) {
  try {
    const Json& strategies = internal::Require(j, "strategies");
    auto labels = strategies.get<std::vector<std::vector<std::string>>>();
    std::vector<std::string> players;
    if (j.contains("players")) {
      players = j.at("players").get<std::vector<std::string>>();
    }
    if (labels.size() < 2) throw GameError("need at least two players");
    if (!players.empty() && players.size() != labels.size()) {
      throw GameError("dimension mismatch: players vs strategies");
    }
    std::vector<std::size_t> counts;
    for (const auto& l : labels) counts.push_back(l.size());
    GameShape shape(counts);

    std::map<Outcome, PayoffVector<Rational>> table;
    for (const auto& [key, payoffs] : internal::Require(j, "utilities").items()) {
      auto parts = internal::SplitKey(key);
      if (parts.size() != labels.size()) {
        throw FormatError("utility key '" + key + "' has wrong arity");
      }
      Outcome o;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        auto it = std::find(labels[i].begin(), labels[i].end(), parts[i]);
        if (it == labels[i].end()) {
          throw FormatError("utility key '" + key + "' names unknown strategy '" +
                            parts[i] + "'");
        }
        o.actions.push_back(static_cast<StrategyIndex>(it - labels[i].begin()));
      }
      if (!payoffs.is_array()) throw FormatError("payoffs must be an array");
      PayoffVector<Rational> v;
      for (const auto& x : payoffs) v.push_back(RationalFromJson(x));
      if (!table.emplace(o, std::move(v)).second) {
        throw FormatError("duplicate utility key '" + key + "'");
      }
    }
    return NewGame<Rational>(std::move(players), std::move(labels), table);
  } catch (const Json::exception& e) {
    throw FormatError(std::string("malformed game: ") + e.what());
  }
}

inline NormalFormGame<Rational> LoadGame(const std::filesystem::path& path) {
  return GameFromJson(ReadJsonFile(path));
}

template <Scalar T>
Json GameToJson(const NormalFormGame<T>& game) {
  Json j;
  j["players"] = game.player_names();
  j["strategies"] = game.strategy_labels();
  Json utilities = Json::object();
  for (OutcomeIndex index = 0; index < game.outcome_count(); ++index) {
    Json payoffs = Json::array();
    for (const auto& u : game.Payoffs(index)) {
      if constexpr (kIsExact<T>) {
        if (denominator(u) == 1) {
          payoffs.push_back(numerator(u).template convert_to<std::int64_t>());
          continue;
        }
      }
      payoffs.push_back(ScalarToJson(u));
    }
    utilities[game.OutcomeKey(game.Decode(index))] = payoffs;
  }
  j["utilities"] = utilities;
  return j;
}

// ---------------------------------------------------------------------------
// Distributions

template <Scalar T>
OutcomeDistribution<T> DistributionFromJson(const NormalFormGame<T>& game,
                                            const Json& j) {
  try {
    std::vector<typename OutcomeDistribution<T>::Entry> entries;
    for (const auto& [key, value] : internal::Require(j, "mass").items()) {
      Outcome o = internal::OutcomeFromKey(game, key);
      entries.emplace_back(game.Encode(o), Convert<T>(RationalFromJson(value)));
    }
    return OutcomeDistribution<T>(game.shape(), std::move(entries));
  } catch (const Json::exception& e) {
    throw FormatError(std::string("malformed distribution: ") + e.what());
  }
}

template <Scalar T>
OutcomeDistribution<T> LoadDistribution(const NormalFormGame<T>& game,
                                        const std::filesystem::path& path) {
  return DistributionFromJson(game, ReadJsonFile(path));
}

template <Scalar T>
Json DistributionToJson(const NormalFormGame<T>& game,
                        const OutcomeDistribution<T>& dist) {
  Json mass = Json::object();
  for (const auto& [index, p] : dist.entries()) {
    mass[game.OutcomeKey(game.Decode(index))] = FormatScalar(p);
  }
  return Json{{"mass", mass}};
}

// ---------------------------------------------------------------------------
// Reports

template <Scalar T>
Json CeReportToJson(const NormalFormGame<T>& game, const CeReport<T>& report) {
  Json entries = Json::array();
  for (const auto& e : report.entries) {
    entries.push_back({{"player", game.player_names()[e.player]},
                       {"recommended", game.label(e.player, e.recommended)},
                       {"alternative", game.label(e.player, e.alternative)},
                       {"gain", ScalarToJson(e.gain)},
                       {"violation", report.Exceeds(e.gain)}});
  }
  Json j{{"verdict", report.verdict},
         {"worst_violation", ScalarToJson(report.worst_violation)},
         {"mode", std::string(ToString(report.mode))},
         {"entries", entries}};
  if (report.mode == NumericMode::kFloat) j["tolerance"] = report.tolerance;
  return j;
}

template <Scalar T>
std::string CeReportTable(const NormalFormGame<T>& game,
                          const CeReport<T>& report) {
  std::ostringstream out;
  out << "correlated equilibrium: " << (report.verdict ? "yes" : "NO")
      << "  (mode " << ToString(report.mode)
      << ", worst gain " << FormatScalar(report.worst_violation) << ")\n";
  out << std::left << std::setw(10) << "player" << std::setw(14)
      << "recommended" << std::setw(14) << "alternative" << std::setw(14)
      << "gain" << "\n";
  for (const auto& e : report.entries) {
    out << std::left << std::setw(10) << game.player_names()[e.player]
        << std::setw(14) << game.label(e.player, e.recommended) << std::setw(14)
        << game.label(e.player, e.alternative) << std::setw(14)
        << FormatScalar(e.gain) << (report.Exceeds(e.gain) ? "violation" : "")
        << "\n";
  }
  return out.str();
}

template <Scalar T>
Json PayoffsToJson(const PayoffVector<T>& payoffs) {
  Json j = Json::array();
  for (const auto& p : payoffs) j.push_back(ScalarToJson(p));
  return j;
}

template <Scalar T>
Json NashListToJson(const NormalFormGame<T>& game, const NashList<T>& nash) {
  Json list = Json::array();
  for (const auto& eq : nash.equilibria) {
    Json profile = Json::object();
    for (PlayerIndex i = 0; i < 2; ++i) {
      Json mix = Json::object();
      for (StrategyIndex s = 0; s < eq.profile[i].size(); ++s) {
        if (eq.profile[i][s] != 0) {
          mix[game.label(i, s)] = FormatScalar(eq.profile[i][s]);
        }
      }
      profile[game.player_names()[i]] = mix;
    }
    list.push_back({{"profile", profile}, {"payoffs", PayoffsToJson(eq.payoffs)}});
  }
  return Json{{"equilibria", list},
              {"degenerate", nash.degenerate},
              {"warnings", nash.warnings}};
}

template <Scalar T>
Json HullToJson(const PayoffHull<T>& hull) {
  Json vertices = Json::array();
  for (const auto& v : hull.vertices()) {
    vertices.push_back(Json::array({ScalarToJson(v.x), ScalarToJson(v.y)}));
  }
  return vertices;
}

// ---------------------------------------------------------------------------
// Policies and scenarios

template <Scalar T>
PlayerPolicy PolicyFromJson(const NormalFormGame<T>& game, PlayerIndex player,
                            const Json& j) {
  auto action = [&](const Json& v) -> StrategyIndex {
    if (v.is_number_unsigned() || v.is_number_integer()) {
      return v.get<StrategyIndex>();
    }
    return game.StrategyByLabel(player, v.get<std::string>());
  };
  try {
    if (j.is_string()) {
      if (j.get<std::string>() == "obedient") return PlayerPolicy::Obedient();
      throw FormatError("unknown policy '" + j.get<std::string>() + "'");
    }
    const std::string kind = internal::Require(j, "kind").get<std::string>();
    PlayerPolicy policy = PlayerPolicy::Obedient();
    if (kind == "obedient") {
      policy = PlayerPolicy::Obedient();
    } else if (kind == "fixed") {
      policy = PlayerPolicy::Fixed(action(internal::Require(j, "action")));
    } else if (kind == "mapped") {
      const Json& map = internal::Require(j, "map");
      std::vector<StrategyIndex> table(game.strategy_count(player),
                                       static_cast<StrategyIndex>(-1));
      for (const auto& [from, to] : map.items()) {
        table.at(game.StrategyByLabel(player, from)) = action(to);
      }
      for (auto a : table) {
        if (a == static_cast<StrategyIndex>(-1)) {
          throw PolicyError("mapped policy for " + game.player_names()[player] +
                            " must cover every recommendation");
        }
      }
      policy = PlayerPolicy::Mapped(std::move(table));
    } else if (kind == "no_output_branch") {
      policy = PlayerPolicy::NoOutputBranch(action(internal::Require(j, "action")));
    } else {
      throw FormatError("unknown policy kind '" + kind + "'");
    }
    if (j.contains("no_output")) policy = policy.WithNoOutput(action(j.at("no_output")));
    policy.Validate(game.strategy_count(player));
    return policy;
  } catch (const Json::exception& e) {
    throw FormatError(std::string("malformed policy: ") + e.what());
  }
}

template <Scalar T>
Json PolicyToJson(const NormalFormGame<T>& game, PlayerIndex player,
                  const PlayerPolicy& policy) {
  Json j;
  switch (policy.kind()) {
    case PlayerPolicy::Kind::kObedient:
      j["kind"] = "obedient";
      break;
    case PlayerPolicy::Kind::kFixed:
      j["kind"] = "fixed";
      j["action"] = game.label(player, policy.fixed_action());
      break;
    case PlayerPolicy::Kind::kMapped: {
      j["kind"] = "mapped";
      Json map = Json::object();
      for (StrategyIndex s = 0; s < policy.table().size(); ++s) {
        map[game.label(player, s)] = game.label(player, policy.table()[s]);
      }
      j["map"] = map;
      break;
    }
  }
  if (policy.no_output_action()) {
    j["no_output"] = game.label(player, *policy.no_output_action());
  }
  return j;
}

struct Scenario {
  std::filesystem::path game_path;
  std::filesystem::path distribution_path;
  NormalFormGame<Rational> game;
  ProtocolConfig<Rational> config;
  AdversaryModel adversary;
  std::vector<PlayerPolicy> policies;
  Seed seed = 0;
  std::uint64_t rounds = 1000;
  bool punishment = false;
  PlayerIndex served = 0;
  PlayerIndex unserved = 1;

  // No blocking and no aborts: the protocol is exactly the mediator.
  bool IsFair() const {
    if (!config.abort_set.empty()) return false;
    for (double p : adversary.block_probability) {
      if (p != 0.0) return false;
    }
    return true;
  }
};

inline Scenario ScenarioFromJson(const Json& j,
                                 const std::filesystem::path& base_dir) {
  try {
    Scenario s;
    auto resolve = [&](const std::string& p) {
      std::filesystem::path path(p);
      return path.is_absolute() ? path : base_dir / path;
    };
    s.game_path = resolve(internal::Require(j, "game").get<std::string>());
    s.distribution_path =
        resolve(internal::Require(j, "distribution").get<std::string>());
    s.game = LoadGame(s.game_path);
    s.config.distribution = LoadDistribution(s.game, s.distribution_path);
    const std::size_t n = s.game.player_count();

    auto player_of = [&](const Json& v) -> PlayerIndex {
      if (v.is_number_unsigned() || v.is_number_integer()) {
        auto i = v.get<PlayerIndex>();
        if (i >= n) throw FormatError("player index out of range");
        return i;
      }
      return s.game.PlayerByName(v.get<std::string>());
    };

    s.adversary = AdversaryModel::Fair(n);
    if (j.contains("blocking")) {
      const Json& b = j.at("blocking");
      if (b.is_array()) {
        if (b.size() != n) throw FormatError("blocking needs one entry per player");
        for (std::size_t i = 0; i < n; ++i) {
          s.adversary.block_probability[i] = b[i].get<double>();
        }
      } else {
        for (const auto& [name, p] : b.items()) {
          s.adversary.block_probability[s.game.PlayerByName(name)] = p.get<double>();
        }
      }
      s.adversary.Validate(n);
    }
    if (j.contains("abort")) {
      for (const auto& v : j.at("abort")) s.config.abort_set.insert(player_of(v));
    }
    if (j.contains("security_parameter")) {
      s.config.security_parameter = j.at("security_parameter").get<std::uint64_t>();
    }
    s.seed = j.value("seed", Seed{0});
    s.rounds = j.value("rounds", std::uint64_t{1000});

    s.policies.assign(n, PlayerPolicy::Obedient());
    if (j.contains("policies")) {
      const Json& p = j.at("policies");
      if (!p.is_array() || p.size() != n) {
        throw FormatError("policies needs one entry per player");
      }
      for (PlayerIndex i = 0; i < n; ++i) {
        s.policies[i] = PolicyFromJson(s.game, i, p[i]);
      }
    }
    if (j.contains("punishment")) {
      const Json& p = j.at("punishment");
      s.punishment = true;
      s.served = player_of(internal::Require(p, "served"));
      s.unserved = player_of(internal::Require(p, "unserved"));
      s.policies = MakePunishmentProfile(s.game, s.config.distribution, s.served,
                                         s.unserved)
                       .Policies();
    }
    return s;
  } catch (const Json::exception& e) {
    throw FormatError(std::string("malformed scenario: ") + e.what());
  }
}

inline Scenario LoadScenario(const std::filesystem::path& path) {
  return ScenarioFromJson(ReadJsonFile(path), path.parent_path());
}

// ---------------------------------------------------------------------------
// Simulation results

inline std::string DigestHex(Digest d) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << d;
  return out.str();
}

template <Scalar T>
Json CountsToJson(const NormalFormGame<T>& game,
                  const std::vector<std::uint64_t>& counts) {
  Json j = Json::object();
  for (OutcomeIndex index = 0; index < counts.size(); ++index) {
    if (counts[index]) j[game.OutcomeKey(game.Decode(index))] = counts[index];
  }
  return j;
}

template <Scalar T>
Json MediatedResultToJson(const NormalFormGame<T>& game,
                          const MediatedRunResult& r) {
  return Json{{"protocol", "mediated"},
              {"rounds", r.rounds},
              {"empirical_payoffs", r.empirical_payoffs},
              {"payoff_std_errors", r.payoff_std_errors},
              {"recommendation_counts", CountsToJson(game, r.recommendation_counts)},
              {"transcript_digest", DigestHex(r.transcript_digest)}};
}

template <Scalar T>
Json CheapTalkResultToJson(const NormalFormGame<T>& game,
                           const CheapTalkResult& r) {
  Json delivered = Json::object();
  Json aborted = Json::object();
  for (PlayerIndex i = 0; i < game.player_count(); ++i) {
    delivered[game.player_names()[i]] = r.DeliveredCount(i);
    aborted[game.player_names()[i]] = static_cast<bool>(r.abort_occurred[i]);
  }
  return Json{{"protocol", "cheap_talk"},
              {"rounds", r.rounds},
              {"security_parameter", r.security_parameter},
              {"empirical_payoffs", r.empirical_payoffs},
              {"payoff_std_errors", r.payoff_std_errors},
              {"recommendation_counts", CountsToJson(game, r.recommendation_counts)},
              {"delivered_rounds", delivered},
              {"abort_occurred", aborted},
              {"transcript_digest", DigestHex(r.transcript_digest)}};
}

// Per-round audit log: recommendation vector ("-" when nothing was
// sampled), per-player delivery flag, action vector, payoffs.
template <Scalar T>
std::string RoundsToCsv(const NormalFormGame<T>& game,
                        const std::vector<RoundRecord>& records) {
  std::ostringstream out;
  const std::size_t n = game.player_count();
  out << "round";
  for (PlayerIndex i = 0; i < n; ++i) out << ",rec_" << game.player_names()[i];
  for (PlayerIndex i = 0; i < n; ++i) out << ",delivered_" << game.player_names()[i];
  for (PlayerIndex i = 0; i < n; ++i) out << ",action_" << game.player_names()[i];
  for (PlayerIndex i = 0; i < n; ++i) out << ",payoff_" << game.player_names()[i];
  out << "\n";
  for (std::size_t r = 0; r < records.size(); ++r) {
    const auto& rec = records[r];
    out << r;
    for (PlayerIndex i = 0; i < n; ++i) {
      out << ",";
      if (rec.recommendation == kNoRecommendation) {
        out << "-";
      } else {
        out << game.label(i, game.shape().ActionOf(rec.recommendation, i));
      }
    }
    for (PlayerIndex i = 0; i < n; ++i) out << "," << ((rec.delivered_mask >> i) & 1u);
    for (PlayerIndex i = 0; i < n; ++i) out << "," << game.label(i, rec.actions[i]);
    for (PlayerIndex i = 0; i < n; ++i) out << "," << FormatScalar(rec.payoffs[i]);
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Run manifest

struct RunManifest {
  std::string command;
  std::vector<std::string> input_paths;
  Json parameters = Json::object();
  Seed seed = 0;
  std::string tool_version = kToolVersion;
  // FNV-1a of the serialized output body.
  Digest output_digest = 0;
};

inline Digest DigestOf(const Json& body) {
  Fnv1a h;
  h.Update(body.dump());
  return h.value();
}

inline Json ManifestToJson(const RunManifest& m) {
  return Json{{"command", m.command},
              {"inputs", m.input_paths},
              {"parameters", m.parameters},
              {"seed", m.seed},
              {"tool_version", m.tool_version},
              {"output_digest", DigestHex(m.output_digest)}};
}

}  // namespace cheaptalk
