#ifndef VETO_MATCH_HPP
#define VETO_MATCH_HPP

#include <chrono>
#include <string>
#include <string_view>
#include <vector>

#include "veto/veto_state.hpp"

namespace veto {

using Timestamp = std::chrono::sys_seconds;

// Accepts "YYYY-MM-DD", "YYYY-MM-DDTHH:MM:SS" with optional trailing 'Z'.
Timestamp parse_iso8601(std::string_view text);
std::string format_iso8601(Timestamp t);

struct GameResult {
  MapId map;
  int rounds_a = 0;
  int rounds_b = 0;
  std::string winner;

  friend bool operator==(const GameResult&, const GameResult&) = default;
};

// Builds a game between team_a and team_b, deriving the winner from the
// rounds. Throws validation_error on ties or fewer than 16 total rounds.
GameResult make_game(MapId map, int rounds_a, int rounds_b, const std::string& team_a,
                     const std::string& team_b);

// Rounds won by `team` and by its opponent on this game.
int rounds_for(const GameResult& game, const VetoState& veto, const std::string& team);
int rounds_against(const GameResult& game, const VetoState& veto, const std::string& team);

struct MatchRecord {
  std::string match_id;
  Timestamp date{};
  VetoState veto;
  std::vector<GameResult> games;  // play order: pick A, pick B, decider
  std::string match_winner;

  const std::string& team_a() const { return veto.team_a(); }
  const std::string& team_b() const { return veto.team_b(); }
  bool involves(const std::string& team) const { return team == team_a() || team == team_b(); }

  // Game played on `map`, or nullptr.
  const GameResult* game_on(MapId map) const;

  friend bool operator==(const MatchRecord&, const MatchRecord&) = default;
};

// Checks every MatchRecord invariant: completed veto, 2 or 3 games played on
// the picks then the decider, consistent game and match winners.
void validate_match(const MatchRecord& match);

// The pick made at veto step 2 (team A) or 3 (team B).
MapId picked_map(const VetoState& veto, Side side);

}  // namespace veto

#endif  // VETO_MATCH_HPP
