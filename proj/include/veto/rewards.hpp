#ifndef VETO_REWARDS_HPP
#define VETO_REWARDS_HPP

#include <string>
#include <vector>

#include "veto/decision.hpp"
#include "veto/match.hpp"

namespace veto {

// 1 if `team` won the game, else 0.
double pick_reward_zero_one(const GameResult& game, const VetoState& veto, const std::string& team);

// Round margin of `team` over total rounds, in [-1, 1].
double pick_reward_mor(const GameResult& game, const VetoState& veto, const std::string& team);
double pick_reward_mor(int rounds_for, int rounds_against);

// +/- 2^-n by match outcome, n the global ban ordinal in 1..4.
double ban_reward(bool match_won, int ban_index);

// Reward attached to the picking team's map under `kind`.
double pick_reward(const GameResult& game, const VetoState& veto, const std::string& team,
                   RewardKind kind);

// Six reward-labelled decisions of a completed match in veto order (four bans,
// two picks; the decider is not a decision). Contexts are left zeroed: the
// caller fills them from running team statistics.
std::vector<DecisionRecord> assign_rewards(const MatchRecord& match, RewardKind kind);

}  // namespace veto

#endif  // VETO_REWARDS_HPP
