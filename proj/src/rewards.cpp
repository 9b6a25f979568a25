#include "veto/rewards.hpp"

#include <cmath>

#include "veto/errors.hpp"

namespace veto {

std::string_view to_string(RewardKind kind) {
  return kind == RewardKind::ZeroOne ? "zero-one" : "mor";
}

RewardKind parse_reward_kind(std::string_view text) {
  if (text == "zero-one" || text == "01" || text == "0/1") return RewardKind::ZeroOne;
  if (text == "mor") return RewardKind::MarginOfRounds;
  throw validation_error("unknown reward kind '" + std::string(text) + "', expected zero-one or mor");
}

void validate_decision(const DecisionRecord& r, RewardKind kind) {
  if ((r.kind == ActionKind::Ban) != r.ban_index.has_value()) {
    throw validation_error("decision in match '" + r.match_id + "': ban_index present iff ban");
  }
  if (r.ban_index && (*r.ban_index < 1 || *r.ban_index > 4)) {
    throw validation_error("decision in match '" + r.match_id + "': ban_index out of range");
  }
  if (r.behavior_propensity && !(*r.behavior_propensity > 0.0 && *r.behavior_propensity <= 1.0)) {
    throw validation_error("decision in match '" + r.match_id + "': propensity outside (0, 1]");
  }
  if (!r.reward) return;
  const double v = *r.reward;
  double lo = 0.0;
  double hi = 1.0;
  if (r.kind == ActionKind::Ban) {
    lo = -0.5;
    hi = 0.5;
  } else if (kind == RewardKind::MarginOfRounds) {
    lo = -1.0;
  }
  if (!(v >= lo && v <= hi)) {
    throw validation_error("decision in match '" + r.match_id + "': reward " + std::to_string(v) +
                           " out of bounds");
  }
}

std::vector<DecisionRecord> select_kind(const std::vector<DecisionRecord>& records,
                                        ActionKind kind) {
  std::vector<DecisionRecord> out;
  for (const auto& r : records) {
    if (r.kind == kind) out.push_back(r);
  }
  return out;
}

double pick_reward_zero_one(const GameResult& game, const VetoState& veto, const std::string& team) {
  if (team != veto.team_a() && team != veto.team_b()) {
    throw validation_error("team '" + team + "' did not play on " + std::string(game.map.name()));
  }
  return game.winner == team ? 1.0 : 0.0;
}

double pick_reward_mor(int rounds_for, int rounds_against) {
  const int total = rounds_for + rounds_against;
  if (total <= 0) throw validation_error("margin of rounds: game has zero total rounds");
  return static_cast<double>(rounds_for - rounds_against) / static_cast<double>(total);
}

double pick_reward_mor(const GameResult& game, const VetoState& veto, const std::string& team) {
  return pick_reward_mor(rounds_for(game, veto, team), rounds_against(game, veto, team));
}

double ban_reward(bool match_won, int ban_index) {
  if (ban_index < 1 || ban_index > 4) {
    throw validation_error("ban index must be in 1..4, got " + std::to_string(ban_index));
  }
  const double magnitude = std::ldexp(1.0, -ban_index);
  return match_won ? magnitude : -magnitude;
}

double pick_reward(const GameResult& game, const VetoState& veto, const std::string& team,
                   RewardKind kind) {
  return kind == RewardKind::ZeroOne ? pick_reward_zero_one(game, veto, team)
                                     : pick_reward_mor(game, veto, team);
}

std::vector<DecisionRecord> assign_rewards(const MatchRecord& match, RewardKind kind) {
  if (!match.veto.complete()) {
    throw validation_error("match '" + match.match_id + "': veto incomplete");
  }
  std::vector<DecisionRecord> out;
  out.reserve(kVetoSteps);
  const auto& decisions = match.veto.decisions();
  for (int step = 0; step < kVetoSteps; ++step) {
    const auto& d = decisions[static_cast<std::size_t>(step)];
    DecisionRecord r;
    r.action = d.map;
    r.kind = d.kind;
    r.team = d.team;
    r.opponent = match.veto.opponent_of(d.team);
    r.match_id = match.match_id;
    r.step = step;
    if (d.kind == ActionKind::Ban) {
      r.ban_index = ban_ordinal(step);
      r.reward = ban_reward(match.match_winner == d.team, *r.ban_index);
    } else {
      const GameResult* game = match.game_on(d.map);
      if (game == nullptr) {
        throw validation_error("match '" + match.match_id + "': no result for picked map " +
                               std::string(d.map.name()));
      }
      r.reward = pick_reward(*game, match.veto, d.team, kind);
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace veto
