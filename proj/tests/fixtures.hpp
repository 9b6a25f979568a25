#ifndef VETO_TESTS_FIXTURES_HPP
#define VETO_TESTS_FIXTURES_HPP

#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "veto/decision.hpp"
#include "veto/match.hpp"
#include "veto/policy.hpp"
#include "veto/rng.hpp"
#include "veto/veto_state.hpp"

namespace fixtures {

// Builds a best-of-three match from six veto maps (schedule order) and the
// game scores as (rounds_a, rounds_b); games are played on pick A, pick B,
// then the decider.
inline veto::MatchRecord make_match(const std::string& id, const std::string& date,
                                    const std::string& a, const std::string& b,
                                    const std::array<int, 6>& maps,
                                    const std::vector<std::pair<int, int>>& scores) {
  using namespace veto;
  MatchRecord m;
  m.match_id = id;
  m.date = parse_iso8601(date);
  VetoState s = new_veto(a, b);
  for (int map : maps) s = apply_decision(s, s.team_on_turn(), s.kind_on_turn(), MapId(map));
  m.veto = s;
  const MapId order[3] = {picked_map(s, Side::A), picked_map(s, Side::B), decider(s)};
  int wins_a = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    m.games.push_back(make_game(order[i], scores[i].first, scores[i].second, a, b));
    if (scores[i].first > scores[i].second) ++wins_a;
  }
  m.match_winner = wins_a >= 2 ? a : b;
  return m;
}

// Default veto: bans dust2, inferno; picks mirage (A), nuke (B); bans
// overpass, train; decider vertigo.
inline constexpr std::array<int, 6> kDefaultVeto = {0, 1, 2, 3, 4, 5};

// Decision with random statistics features over `available`.
inline veto::DecisionRecord make_decision(veto::Rng& rng, veto::MapSet available,
                                          veto::ActionKind kind, int action, double reward,
                                          const std::string& match_id = "m", long sequence = 0,
                                          int step = 0) {
  using namespace veto;
  DecisionRecord r;
  for (int i = 0; i < kMapCount; ++i) {
    r.context[static_cast<std::size_t>(i)] = available.contains(MapId(i)) ? 1.0 : 0.0;
  }
  for (int i = kMapCount; i < kContextDim; ++i) r.context[static_cast<std::size_t>(i)] = rng.uniform();
  r.action = MapId(action);
  r.kind = kind;
  if (kind == ActionKind::Ban) r.ban_index = 1;
  r.reward = reward;
  r.match_id = match_id;
  r.sequence = sequence;
  r.step = step;
  r.team = "a";
  r.opponent = "b";
  return r;
}

// Returns a fixed distribution for picks and another for bans, masked to the
// record's availability.
class TablePolicy final : public veto::DecisionPolicy {
public:
  TablePolicy(std::array<double, veto::kMapCount> pick, std::array<double, veto::kMapCount> ban)
      : pick_(pick), ban_(ban) {}
  veto::ActionDistribution distribution(const veto::DecisionRecord& r) const override {
    const auto& w = r.kind == veto::ActionKind::Pick ? pick_ : ban_;
    std::array<double, veto::kMapCount> scores{};
    for (int a = 0; a < veto::kMapCount; ++a) scores[static_cast<std::size_t>(a)] = std::log(w[static_cast<std::size_t>(a)]);
    return veto::softmax(scores, r.available(), true);
  }
  std::string name() const override { return "table"; }

private:
  std::array<double, veto::kMapCount> pick_;
  std::array<double, veto::kMapCount> ban_;
};

}  // namespace fixtures

#endif  // VETO_TESTS_FIXTURES_HPP
