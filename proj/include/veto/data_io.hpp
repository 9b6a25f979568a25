#ifndef VETO_DATA_IO_HPP
#define VETO_DATA_IO_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "veto/decision.hpp"
#include "veto/match.hpp"

namespace veto {

// ---------------------------------------------------------------------------
// Match logs: one JSON object per line,
//   {"match_id", "date", "team_a", "team_b",
//    "veto": [{"team", "action": "ban"|"pick", "map"}, x6],
//    "games": [{"map", "rounds_a", "rounds_b"}, x2..3], "winner"}
// team_a is the first banner.
// ---------------------------------------------------------------------------

struct LineError {
  long line = 0;  // 1-based
  std::string reason;
};

struct ParseResult {
  std::vector<MatchRecord> matches;
  std::vector<LineError> errors;
};

// Parses and replays one line through the veto state machine. Throws
// validation_error or veto_error.
MatchRecord parse_match_line(std::string_view line);

// Invalid lines are collected, never fatal. Blank lines are skipped. Throws
// error if the stream cannot be read.
ParseResult parse_match_log(std::istream& in);

std::string serialize_match(const MatchRecord& match);
void write_match_log(std::ostream& out, std::span<const MatchRecord> matches);

// ---------------------------------------------------------------------------
// Filtering
// ---------------------------------------------------------------------------

struct FilterConfig {
  int min_games = 25;  // games against other retained teams
};

struct FilterReport {
  long input_matches = 0;
  long removed_format = 0;     // not best-of-three on the seven-map pool
  long removed_min_games = 0;  // involved a team dropped by the games rule
  long input_teams = 0;
  long removed_teams = 0;
  long retained_teams = 0;
  long retained_matches = 0;
  long retained_games = 0;
  int fixed_point_rounds = 0;
  std::vector<std::string> warnings;

  bool reconciles() const {
    return input_matches == retained_matches + removed_format + removed_min_games &&
           input_teams == retained_teams + removed_teams;
  }
  std::string to_json() const;
};

// Best-of-three check on a record built outside the parser.
bool is_supported_format(const MatchRecord& match);

// Keeps supported matches, then removes teams with fewer than min_games games
// against retained teams until no team falls below the threshold.
std::pair<std::vector<MatchRecord>, FilterReport> filter_dataset(std::vector<MatchRecord> matches,
                                                                 const FilterConfig& config = {});

// ---------------------------------------------------------------------------
// Splits
// ---------------------------------------------------------------------------

struct SplitResult {
  std::vector<MatchRecord> train;
  std::vector<MatchRecord> test;
};

// Sorts by (date, match_id); the last ceil(fraction * N) matches are test.
SplitResult chronological_split(std::vector<MatchRecord> matches, double test_fraction = 0.2);
// Shuffled assignment with the same sizes; each side is returned in
// chronological order.
SplitResult random_split(std::vector<MatchRecord> matches, double test_fraction, std::uint64_t seed);

void sort_chronologically(std::vector<MatchRecord>& matches);

// ---------------------------------------------------------------------------
// Decision dataset
// ---------------------------------------------------------------------------

struct DatasetOptions {
  // Stop updating team statistics after this many matches (the training
  // period); by default statistics update through every match.
  std::optional<std::size_t> freeze_stats_after;
};

// Single chronological pass: each match yields its six decisions with
// contexts built from statistics of strictly earlier matches.
std::vector<DecisionRecord> build_decision_dataset(std::span<const MatchRecord> matches,
                                                   RewardKind kind,
                                                   const DatasetOptions& options = {});

// Statistics of every team after all given matches (in chronological order).
std::map<std::string, TeamRecord> team_statistics(std::span<const MatchRecord> matches);

// Columns: c0..c22, action, kind, ban_index, reward, propensity, match_id,
// team, opponent, step.
void write_decision_csv(std::ostream& out, std::span<const DecisionRecord> records);

// Partitions decisions by the match ids of `test`.
std::pair<std::vector<DecisionRecord>, std::vector<DecisionRecord>> partition_decisions(
    std::span<const DecisionRecord> records, std::span<const MatchRecord> test);

}  // namespace veto

#endif  // VETO_DATA_IO_HPP
