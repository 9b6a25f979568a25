#include "veto/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <unordered_map>

#include "veto/errors.hpp"
#include "veto/rewards.hpp"

namespace veto {

const TeamProfile& SyntheticEcosystem::team(const std::string& id) const {
  for (const auto& t : teams) {
    if (t.id == id) return t;
  }
  throw validation_error("team '" + id + "' is not part of the ecosystem");
}

SyntheticEcosystem generate_ecosystem(const EcosystemConfig& config) {
  if (config.n_teams < 2) throw validation_error("an ecosystem needs at least two teams");
  if (!(config.temperature_min > 0.0) || config.temperature_max < config.temperature_min) {
    throw validation_error("temperatures must be positive with min <= max");
  }
  if (!(config.permaban_fraction >= 0.0 && config.permaban_fraction <= 1.0)) {
    throw validation_error("permaban fraction must be in [0, 1]");
  }
  Rng rng(derive_seed(config.seed, 0xec0));
  SyntheticEcosystem eco;
  eco.config = config;
  const int width = config.n_teams < 100 ? 2 : (config.n_teams < 1000 ? 3 : 6);
  for (int i = 0; i < config.n_teams; ++i) {
    TeamProfile t;
    char id[32];
    std::snprintf(id, sizeof id, "team%0*d", width, i + 1);
    t.id = id;
    for (double& s : t.strength) s = config.strength_scale * rng.normal();
    t.temperature = config.temperature_min +
                    (config.temperature_max - config.temperature_min) * rng.uniform();
    eco.teams.push_back(std::move(t));
  }
  // Exactly round(fraction * n) teams get a permaban: their weakest map.
  std::vector<std::size_t> order(eco.teams.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  const auto n_perma = static_cast<std::size_t>(
      std::llround(config.permaban_fraction * static_cast<double>(config.n_teams)));
  for (std::size_t k = 0; k < n_perma; ++k) {
    auto& t = eco.teams[order[k]];
    const auto weakest = std::min_element(t.strength.begin(), t.strength.end()) - t.strength.begin();
    t.permaban = MapId(static_cast<int>(weakest));
  }
  return eco;
}

SyntheticEcosystem generate_ecosystem(int n_teams, std::uint64_t seed) {
  EcosystemConfig config;
  config.n_teams = n_teams;
  config.seed = seed;
  return generate_ecosystem(config);
}

namespace {

const TeamRecord& stats_of(const TeamStats& stats, const std::string& team) {
  static const TeamRecord empty{};
  auto it = stats.find(team);
  return it == stats.end() ? empty : it->second;
}

}  // namespace

DecisionRecord decision_situation(const VetoState& state, const TeamStats& stats) {
  DecisionRecord r;
  r.team = state.team_on_turn();
  r.opponent = state.opponent_of(r.team);
  r.kind = state.kind_on_turn();
  r.step = state.step();
  if (r.kind == ActionKind::Ban) r.ban_index = ban_ordinal(r.step);
  r.context = build_context(stats_of(stats, r.team), stats_of(stats, r.opponent), state.available());
  return r;
}

ActionDistribution EcosystemBehaviorPolicy::distribution(const DecisionRecord& s) const {
  const TeamProfile& team = eco_->team(s.team);
  const MapSet available = s.available();
  const bool first_ban = s.kind == ActionKind::Ban && s.ban_index && *s.ban_index <= 2;
  if (first_ban && team.permaban && available.contains(*team.permaban)) {
    ActionDistribution d;
    d.support = available;
    d.masked = true;
    d.probs[static_cast<std::size_t>(team.permaban->index())] = 1.0;
    return d;
  }
  std::array<double, kMapCount> scores{};
  const double sign = s.kind == ActionKind::Pick ? 1.0 : -1.0;
  for (std::size_t m = 0; m < kMapCount; ++m) {
    scores[m] = sign * (s.context[kDeciderMapRates + m] - s.context[kOpponentMapRates + m]) /
                team.temperature;
  }
  return softmax(scores, available, true);
}

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double map_win_probability(const SyntheticEcosystem& eco, const std::string& team,
                           const std::string& opponent, MapId map) {
  const auto m = static_cast<std::size_t>(map.index());
  return logistic(eco.team(team).strength[m] - eco.team(opponent).strength[m]);
}

GameResult play_game(const SyntheticEcosystem& eco, const std::string& team_a,
                     const std::string& team_b, MapId map, Rng& rng) {
  const double p_a = map_win_probability(eco, team_a, team_b, map);
  const bool a_wins = rng.bernoulli(p_a);
  // Loser's round share shrinks with the strength gap.
  const double q = a_wins ? 1.0 - p_a : p_a;
  int loser = 0;
  for (int k = 0; k < 15; ++k) loser += rng.bernoulli(q) ? 1 : 0;
  return a_wins ? make_game(map, 16, loser, team_a, team_b) : make_game(map, loser, 16, team_a, team_b);
}

namespace {

// P(L = l) for L ~ Binomial(15, q).
std::array<double, 16> binomial15(double q) {
  std::array<double, 16> pmf{};
  double coef = 1.0;
  for (int l = 0; l <= 15; ++l) {
    if (l > 0) coef = coef * (15 - l + 1) / l;
    pmf[static_cast<std::size_t>(l)] = coef * std::pow(q, l) * std::pow(1.0 - q, 15 - l);
  }
  return pmf;
}

}  // namespace

double expected_pick_reward(const SyntheticEcosystem& eco, const std::string& team,
                            const std::string& opponent, MapId map, RewardKind kind) {
  const double p = map_win_probability(eco, team, opponent, map);
  if (kind == RewardKind::ZeroOne) return p;
  // Win: opponent (loser) share q = 1 - p; loss: team's share q = p.
  const auto win_pmf = binomial15(1.0 - p);
  const auto loss_pmf = binomial15(p);
  double win_margin = 0.0;
  double loss_margin = 0.0;
  for (int l = 0; l <= 15; ++l) {
    win_margin += win_pmf[static_cast<std::size_t>(l)] * pick_reward_mor(16, l);
    loss_margin += loss_pmf[static_cast<std::size_t>(l)] * pick_reward_mor(l, 16);
  }
  return p * win_margin + (1.0 - p) * loss_margin;
}

namespace {

// Plays the remaining veto steps. Behavior decides every step except
// `override_step`, which `override_policy` decides.
void play_veto(const SyntheticEcosystem& eco, const TeamStats& stats, VetoState& state, Rng& rng,
               std::array<double, kVetoSteps>* propensities, int override_step = -1,
               const DecisionPolicy* override_policy = nullptr) {
  const EcosystemBehaviorPolicy behavior(eco);
  while (!state.complete()) {
    const DecisionRecord situation = decision_situation(state, stats);
    const DecisionPolicy& who =
        (state.step() == override_step && override_policy) ? *override_policy : behavior;
    const ActionDistribution dist = who.distribution(situation);
    const MapId choice = sample_action(dist, rng);
    if (propensities) (*propensities)[static_cast<std::size_t>(state.step())] = dist[choice];
    state = apply_decision(state, situation.team, situation.kind, choice);
  }
}

std::vector<GameResult> play_games(const SyntheticEcosystem& eco, const VetoState& veto, Rng& rng,
                                   std::string& winner) {
  const MapId order[3] = {picked_map(veto, Side::A), picked_map(veto, Side::B), decider(veto)};
  std::vector<GameResult> games;
  int wins_a = 0;
  int wins_b = 0;
  for (MapId m : order) {
    games.push_back(play_game(eco, veto.team_a(), veto.team_b(), m, rng));
    (games.back().winner == veto.team_a() ? wins_a : wins_b) += 1;
    if (wins_a == 2 || wins_b == 2) break;
  }
  winner = wins_a == 2 ? veto.team_a() : veto.team_b();
  return games;
}

}  // namespace

SimulatedMatch simulate_match(const SyntheticEcosystem& eco, const std::string& team_a,
                              const std::string& team_b, Rng& rng, const TeamStats& stats,
                              std::string match_id, Timestamp date) {
  SimulatedMatch out;
  VetoState state = new_veto(team_a, team_b);
  eco.team(team_a);
  eco.team(team_b);
  play_veto(eco, stats, state, rng, &out.propensities);
  out.record.match_id = std::move(match_id);
  out.record.date = date;
  out.record.games = play_games(eco, state, rng, out.record.match_winner);
  out.record.veto = std::move(state);
  return out;
}

std::string season_match_id(long index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "m%07ld", index);
  return buf;
}

namespace {

Timestamp season_date(long index) {
  using namespace std::chrono;
  return Timestamp{sys_days{year{2020} / 4 / 1}} + hours{index};
}

struct Pairing {
  std::size_t a;
  std::size_t b;
};

Pairing draw_pairing(const SyntheticEcosystem& eco, Rng& rng) {
  const auto n = eco.teams.size();
  const auto a = static_cast<std::size_t>(rng.below(n));
  auto b = static_cast<std::size_t>(rng.below(n - 1));
  if (b >= a) ++b;
  return {a, b};
}

void record_result(TeamStats& stats, const MatchRecord& m) {
  stats[m.team_a()] = update_team_stats(stats[m.team_a()], m, m.team_a());
  stats[m.team_b()] = update_team_stats(stats[m.team_b()], m, m.team_b());
}

}  // namespace

std::vector<SimulatedMatch> simulate_season(const SyntheticEcosystem& eco, const SeasonConfig& config) {
  if (config.n_matches < 0) throw validation_error("negative match count");
  std::vector<SimulatedMatch> season;
  season.reserve(static_cast<std::size_t>(config.n_matches));
  TeamStats stats;
  for (long k = 0; k < config.n_matches; ++k) {
    Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(k), 0));
    const Pairing p = draw_pairing(eco, rng);
    season.push_back(simulate_match(eco, eco.teams[p.a].id, eco.teams[p.b].id, rng, stats,
                                    season_match_id(k), season_date(k)));
    record_result(stats, season.back().record);
  }
  return season;
}

std::vector<MatchRecord> match_records(std::span<const SimulatedMatch> season) {
  std::vector<MatchRecord> out;
  out.reserve(season.size());
  for (const auto& s : season) out.push_back(s.record);
  return out;
}

void attach_true_propensities(std::span<DecisionRecord> records,
                              std::span<const SimulatedMatch> season) {
  std::unordered_map<std::string, const SimulatedMatch*> by_id;
  for (const auto& s : season) by_id[s.record.match_id] = &s;
  for (auto& r : records) {
    auto it = by_id.find(r.match_id);
    if (it == by_id.end()) throw validation_error("no simulated match '" + r.match_id + "'");
    r.behavior_propensity = it->second->propensities[static_cast<std::size_t>(r.step)];
  }
}

TruthEstimate true_policy_value(const SyntheticEcosystem& eco, const DecisionPolicy& policy,
                                Setting setting, const TruthConfig& config) {
  if (config.n_rollouts < 1) throw validation_error("true_policy_value needs at least one rollout");
  const ActionKind kind = setting_kind(setting);
  const RewardKind reward_kind = setting_reward(setting);
  std::vector<int> slots;
  for (int s = 0; s < kVetoSteps; ++s) {
    if (kVetoSchedule[static_cast<std::size_t>(s)].kind == kind) slots.push_back(s);
  }

  TeamStats stats;
  double sum = 0.0;
  double sum_sq = 0.0;
  const long total = config.warmup_matches + config.n_rollouts;
  for (long k = 0; k < total; ++k) {
    Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(k), 0));
    const Pairing p = draw_pairing(eco, rng);
    const std::string& a = eco.teams[p.a].id;
    const std::string& b = eco.teams[p.b].id;
    const SimulatedMatch factual = simulate_match(eco, a, b, rng, stats, season_match_id(k));

    if (k >= config.warmup_matches) {
      double match_sum = 0.0;
      for (int slot : slots) {
        Rng branch_rng(derive_seed(config.seed, static_cast<std::uint64_t>(k), 1 + static_cast<std::uint64_t>(slot)));
        VetoState state = new_veto(a, b);
        for (int s = 0; s < slot; ++s) {
          const auto& d = factual.record.veto.decisions()[static_cast<std::size_t>(s)];
          state = apply_decision(state, d.team, d.kind, d.map);
        }
        const std::string team = state.team_on_turn();
        play_veto(eco, stats, state, branch_rng, nullptr, slot, &policy);
        const VetoDecision& chosen = state.decisions()[static_cast<std::size_t>(slot)];
        std::string winner;
        const auto games = play_games(eco, state, branch_rng, winner);
        double reward = 0.0;
        if (kind == ActionKind::Pick) {
          const auto it = std::find_if(games.begin(), games.end(),
                                       [&](const GameResult& g) { return g.map == chosen.map; });
          reward = pick_reward(*it, state, team, reward_kind);
        } else {
          reward = ban_reward(winner == team, ban_ordinal(slot));
        }
        match_sum += reward;
      }
      const double v = match_sum / static_cast<double>(slots.size());
      sum += v;
      sum_sq += v * v;
    }
    record_result(stats, factual.record);
  }
  TruthEstimate est;
  const auto n = static_cast<double>(config.n_rollouts);
  est.rollouts = config.n_rollouts;
  est.value = sum / n;
  const double var = config.n_rollouts > 1 ? std::max(0.0, (sum_sq - n * est.value * est.value) / (n - 1.0)) : 0.0;
  est.standard_error = std::sqrt(var / n);
  return est;
}

double expected_pick_value(const SyntheticEcosystem& eco, const DecisionPolicy& policy,
                           std::span<const DecisionRecord> situations, RewardKind kind) {
  if (situations.empty()) throw validation_error("expected_pick_value needs situations");
  double sum = 0.0;
  for (const auto& s : situations) {
    const ActionDistribution pi = policy.distribution(s);
    for (int a = 0; a < kMapCount; ++a) {
      const double p = pi.probs[static_cast<std::size_t>(a)];
      if (p > 0.0) sum += p * expected_pick_reward(eco, s.team, s.opponent, MapId(a), kind);
    }
  }
  return sum / static_cast<double>(situations.size());
}

}  // namespace veto
