#include "veto/features.hpp"

#include <algorithm>

#include "veto/errors.hpp"

namespace veto {

MapSet ContextVector::available() const {
  MapSet s;
  for (int i = 0; i < kMapCount; ++i) {
    if (values[static_cast<std::size_t>(kAvailabilityOffset + i)] != 0.0) s = s.with(MapId(i));
  }
  return s;
}

double smoothed_win_rate(int wins, int matches) {
  if (wins < 0 || matches < 0 || wins > matches) {
    throw validation_error("smoothed_win_rate: need 0 <= wins <= matches, got " +
                           std::to_string(wins) + "/" + std::to_string(matches));
  }
  return (static_cast<double>(wins) + 5.0) / (static_cast<double>(matches) + 10.0);
}

TeamRecord update_team_stats(const TeamRecord& record, const MatchRecord& match,
                             const std::string& team) {
  if (!match.involves(team)) {
    throw validation_error("team '" + team + "' did not play match '" + match.match_id + "'");
  }
  TeamRecord next = record;
  next.match_count += 1;
  if (match.match_winner == team) next.match_wins += 1;
  for (const auto& g : match.games) {
    const auto m = static_cast<std::size_t>(g.map.index());
    next.map_count[m] += 1;
    if (g.winner == team) next.map_wins[m] += 1;
  }
  return next;
}

ContextVector build_context(const TeamRecord& decider, const TeamRecord& opponent,
                            MapSet available) {
  if (available.empty()) throw validation_error("build_context: no map available");
  ContextVector x;
  for (int i = 0; i < kMapCount; ++i) {
    const auto m = static_cast<std::size_t>(i);
    x[static_cast<std::size_t>(kAvailabilityOffset + i)] = available.contains(MapId(i)) ? 1.0 : 0.0;
    x[kDeciderMapRates + m] = smoothed_win_rate(decider.map_wins[m], decider.map_count[m]);
    x[kOpponentMapRates + m] = smoothed_win_rate(opponent.map_wins[m], opponent.map_count[m]);
  }
  x[kDeciderMatchRate] = smoothed_win_rate(decider.match_wins, decider.match_count);
  x[kOpponentMatchRate] = smoothed_win_rate(opponent.match_wins, opponent.match_count);
  return x;
}

std::vector<double> feature_map(const ContextVector& context, MapId action, int blocks,
                                int block_offset) {
  if ((blocks != kMapCount && blocks != 2 * kMapCount) ||
      (block_offset != 0 && block_offset != kMapCount) ||
      block_offset + action.index() >= blocks) {
    throw validation_error("feature_map: block offset " + std::to_string(block_offset) +
                           " incompatible with " + std::to_string(blocks) + " blocks");
  }
  std::vector<double> phi(static_cast<std::size_t>(blocks * kContextDim), 0.0);
  std::copy(context.values.begin(), context.values.end(),
            phi.begin() + (block_offset + action.index()) * kContextDim);
  return phi;
}

}  // namespace veto
