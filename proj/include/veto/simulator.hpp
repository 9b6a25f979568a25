#ifndef VETO_SIMULATOR_HPP
#define VETO_SIMULATOR_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "veto/decision.hpp"
#include "veto/match.hpp"
#include "veto/ope.hpp"
#include "veto/policy.hpp"
#include "veto/rng.hpp"

namespace veto {

// Latent per-map strengths plus a win-rate-greedy behavior policy per team.
struct TeamProfile {
  std::string id;
  std::array<double, kMapCount> strength{};
  double temperature = 0.2;
  std::optional<MapId> permaban;
};

struct EcosystemConfig {
  int n_teams = 20;
  std::uint64_t seed = 1;
  double strength_scale = 1.0;  // standard deviation of each map strength
  double permaban_fraction = 0.3;
  double temperature_min = 0.15;
  double temperature_max = 0.30;
};

struct SyntheticEcosystem {
  std::vector<TeamProfile> teams;
  EcosystemConfig config;

  const TeamProfile& team(const std::string& id) const;
};

SyntheticEcosystem generate_ecosystem(const EcosystemConfig& config);
SyntheticEcosystem generate_ecosystem(int n_teams, std::uint64_t seed);

using TeamStats = std::map<std::string, TeamRecord>;

// Situation of the team on turn: context from current statistics and
// availability, kind, ban ordinal, team and opponent.
DecisionRecord decision_situation(const VetoState& state, const TeamStats& stats);

// The simulated teams' own policy, exact: permaban on a team's first ban when
// still available, otherwise a masked softmax of (own - opponent) map win rate
// divided by the team's temperature (negated for bans).
class EcosystemBehaviorPolicy final : public DecisionPolicy {
public:
  explicit EcosystemBehaviorPolicy(const SyntheticEcosystem& eco) : eco_(&eco) {}
  ActionDistribution distribution(const DecisionRecord& situation) const override;
  std::string name() const override { return "simulator-behavior"; }

private:
  const SyntheticEcosystem* eco_;
};

double logistic(double z);
// P(team wins a game on map against opponent) = logistic(s_team - s_opp).
double map_win_probability(const SyntheticEcosystem& eco, const std::string& team,
                           const std::string& opponent, MapId map);

// Winner takes 16; the loser's rounds are Binomial(15, logistic(s_loser - s_winner)).
GameResult play_game(const SyntheticEcosystem& eco, const std::string& team_a,
                     const std::string& team_b, MapId map, Rng& rng);

// Exact expected pick reward of `team` choosing `map` against `opponent`.
double expected_pick_reward(const SyntheticEcosystem& eco, const std::string& team,
                            const std::string& opponent, MapId map, RewardKind kind);

struct SimulatedMatch {
  MatchRecord record;
  std::array<double, kVetoSteps> propensities{};  // behavior probability of each logged decision
};

SimulatedMatch simulate_match(const SyntheticEcosystem& eco, const std::string& team_a,
                              const std::string& team_b, Rng& rng, const TeamStats& stats = {},
                              std::string match_id = "m0", Timestamp date = {});

struct SeasonConfig {
  long n_matches = 1000;
  std::uint64_t seed = 1;
};

std::string season_match_id(long index);

// Matches drawn between uniformly chosen ordered team pairs; team statistics
// update after every match. Match k uses its own derived random stream.
std::vector<SimulatedMatch> simulate_season(const SyntheticEcosystem& eco, const SeasonConfig& config);

std::vector<MatchRecord> match_records(std::span<const SimulatedMatch> season);

// Sets behavior_propensity on each decision from the simulated matches (by
// match id and veto step).
void attach_true_propensities(std::span<DecisionRecord> records,
                              std::span<const SimulatedMatch> season);

struct TruthConfig {
  long warmup_matches = 0;
  long n_rollouts = 10000;
  std::uint64_t seed = 1;
};

struct TruthEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  long rollouts = 0;
};

// Monte-Carlo value of `policy` for `setting`: the season is replayed with the
// seed of simulate_season; for each rollout match after the warmup, every
// decision slot of the setting's kind is branched, decided by `policy`, and
// continued with behavior decisions and fresh game outcomes.
TruthEstimate true_policy_value(const SyntheticEcosystem& eco, const DecisionPolicy& policy,
                                Setting setting, const TruthConfig& config);

// Exact expected pick reward averaged over the given pick situations.
double expected_pick_value(const SyntheticEcosystem& eco, const DecisionPolicy& policy,
                           std::span<const DecisionRecord> situations, RewardKind kind);

}  // namespace veto

#endif  // VETO_SIMULATOR_HPP
