#include "veto/match.hpp"

#include <charconv>
#include <cstdio>

#include "veto/errors.hpp"

namespace veto {

namespace {

int parse_field(std::string_view text, std::size_t pos, std::size_t len, std::string_view whole) {
  int value = 0;
  if (pos + len > text.size()) throw validation_error("malformed date '" + std::string(whole) + "'");
  auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, value);
  if (ec != std::errc() || ptr != text.data() + pos + len) {
    throw validation_error("malformed date '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

Timestamp parse_iso8601(std::string_view text) {
  using namespace std::chrono;
  std::string_view s = text;
  if (!s.empty() && s.back() == 'Z') s.remove_suffix(1);
  if (s.size() != 10 && s.size() != 19) {
    throw validation_error("malformed date '" + std::string(text) + "'");
  }
  if (s[4] != '-' || s[7] != '-') throw validation_error("malformed date '" + std::string(text) + "'");
  const year_month_day ymd{year{parse_field(s, 0, 4, text)},
                           month{static_cast<unsigned>(parse_field(s, 5, 2, text))},
                           day{static_cast<unsigned>(parse_field(s, 8, 2, text))}};
  if (!ymd.ok()) throw validation_error("invalid calendar date '" + std::string(text) + "'");
  Timestamp t = sys_days{ymd};
  if (s.size() == 19) {
    if (s[10] != 'T' || s[13] != ':' || s[16] != ':') {
      throw validation_error("malformed date '" + std::string(text) + "'");
    }
    const int hh = parse_field(s, 11, 2, text);
    const int mm = parse_field(s, 14, 2, text);
    const int ss = parse_field(s, 17, 2, text);
    if (hh > 23 || mm > 59 || ss > 59) {
      throw validation_error("invalid time of day '" + std::string(text) + "'");
    }
    t += hours{hh} + minutes{mm} + seconds{ss};
  }
  return t;
}

std::string format_iso8601(Timestamp t) {
  using namespace std::chrono;
  const auto days = floor<std::chrono::days>(t);
  const year_month_day ymd{days};
  const hh_mm_ss hms{t - days};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

GameResult make_game(MapId map, int rounds_a, int rounds_b, const std::string& team_a,
                     const std::string& team_b) {
  if (rounds_a < 0 || rounds_b < 0) throw validation_error("round counts must be non-negative");
  if (rounds_a == rounds_b) {
    throw validation_error("game on " + std::string(map.name()) + " is tied " +
                           std::to_string(rounds_a) + "-" + std::to_string(rounds_b));
  }
  if (rounds_a + rounds_b < 16) {
    throw validation_error("game on " + std::string(map.name()) + " has only " +
                           std::to_string(rounds_a + rounds_b) + " rounds");
  }
  return GameResult{map, rounds_a, rounds_b, rounds_a > rounds_b ? team_a : team_b};
}

int rounds_for(const GameResult& game, const VetoState& veto, const std::string& team) {
  if (team == veto.team_a()) return game.rounds_a;
  if (team == veto.team_b()) return game.rounds_b;
  throw validation_error("team '" + team + "' did not play on " + std::string(game.map.name()));
}

int rounds_against(const GameResult& game, const VetoState& veto, const std::string& team) {
  return rounds_for(game, veto, veto.opponent_of(team));
}

const GameResult* MatchRecord::game_on(MapId map) const {
  for (const auto& g : games) {
    if (g.map == map) return &g;
  }
  return nullptr;
}

MapId picked_map(const VetoState& veto, Side side) {
  const std::size_t step = side == Side::A ? 2 : 3;
  if (veto.decisions().size() <= step) {
    throw incomplete_veto_error("veto has no pick at step " + std::to_string(step), veto.step());
  }
  return veto.decisions()[step].map;
}

void validate_match(const MatchRecord& m) {
  const std::string where = "match '" + m.match_id + "': ";
  if (!m.veto.complete()) throw validation_error(where + "veto is incomplete");
  if (m.games.size() != 2 && m.games.size() != 3) {
    throw validation_error(where + "expected 2 or 3 games, got " + std::to_string(m.games.size()));
  }
  const MapId expected[3] = {picked_map(m.veto, Side::A), picked_map(m.veto, Side::B),
                             decider(m.veto)};
  int wins_a = 0;
  int wins_b = 0;
  for (std::size_t i = 0; i < m.games.size(); ++i) {
    const auto& g = m.games[i];
    if (g.map != expected[i]) {
      throw validation_error(where + "game " + std::to_string(i + 1) + " played on " +
                             std::string(g.map.name()) + ", expected " +
                             std::string(expected[i].name()));
    }
    if (g.rounds_a == g.rounds_b || g.rounds_a < 0 || g.rounds_b < 0 ||
        g.rounds_a + g.rounds_b < 16) {
      throw validation_error(where + "invalid score on " + std::string(g.map.name()));
    }
    const std::string& w = g.rounds_a > g.rounds_b ? m.team_a() : m.team_b();
    if (g.winner != w) {
      throw validation_error(where + "winner of " + std::string(g.map.name()) +
                             " inconsistent with rounds");
    }
    (w == m.team_a() ? wins_a : wins_b) += 1;
  }
  if (m.games.size() == 2 && wins_a != 2 && wins_b != 2) {
    throw validation_error(where + "two games split 1-1 but no decider was played");
  }
  if (m.games.size() == 3 && (wins_a == 3 || wins_b == 3 || (m.games[0].winner == m.games[1].winner))) {
    throw validation_error(where + "decider played although the first two games were decisive");
  }
  const std::string& winner = wins_a >= 2 ? m.team_a() : m.team_b();
  if (m.match_winner != winner) {
    throw validation_error(where + "match winner '" + m.match_winner + "' did not win two games");
  }
}

}  // namespace veto
