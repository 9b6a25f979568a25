#include "doctest.h"

#include <algorithm>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "veto/data_io.hpp"
#include "veto/errors.hpp"

using namespace veto;
using fixtures::make_match;

namespace {

const char* kLine =
    R"({"match_id":"x1","date":"2020-05-01","team_a":"a","team_b":"b",)"
    R"("veto":[{"team":"a","action":"ban","map":"dust2"},{"team":"b","action":"ban","map":"inferno"},)"
    R"({"team":"a","action":"pick","map":"mirage"},{"team":"b","action":"pick","map":"nuke"},)"
    R"({"team":"a","action":"ban","map":"overpass"},{"team":"b","action":"ban","map":"train"}],)"
    R"("games":[{"map":"mirage","rounds_a":16,"rounds_b":10},{"map":"nuke","rounds_a":16,"rounds_b":14}],"winner":"a"})";

std::string replace(std::string s, const std::string& from, const std::string& to) {
  s.replace(s.find(from), from.size(), to);
  return s;
}

// Random league: `n_teams` teams, matches between random pairs.
std::vector<MatchRecord> random_league(Rng& rng, int n_teams, int n_matches) {
  std::vector<MatchRecord> out;
  for (int k = 0; k < n_matches; ++k) {
    const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_teams)));
    int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_teams - 1)));
    if (j >= i) ++j;
    const bool three = rng.bernoulli(0.4);
    const bool a_wins = rng.bernoulli(0.5);
    std::vector<std::pair<int, int>> scores;
    if (three) {
      scores = {{16, 5}, {5, 16}, a_wins ? std::pair{16, 9} : std::pair{9, 16}};
    } else {
      scores = a_wins ? std::vector<std::pair<int, int>>{{16, 3}, {16, 12}}
                      : std::vector<std::pair<int, int>>{{3, 16}, {12, 16}};
    }
    char date[32];
    std::snprintf(date, sizeof date, "2020-%02d-%02dT%02d:00:00", 1 + k / 600, 1 + (k / 24) % 25, k % 24);
    out.push_back(make_match("g" + std::to_string(k), date, "t" + std::to_string(i), "t" + std::to_string(j),
                             fixtures::kDefaultVeto, scores));
  }
  return out;
}

// Largest team set in which every member has at least `min_games` games
// against other members, by exhaustive search over subsets.
std::set<std::string> brute_force_core(const std::vector<MatchRecord>& matches, int min_games) {
  std::vector<std::string> teams;
  for (const auto& m : matches) {
    teams.push_back(m.team_a());
    teams.push_back(m.team_b());
  }
  std::sort(teams.begin(), teams.end());
  teams.erase(std::unique(teams.begin(), teams.end()), teams.end());
  const std::size_t n = teams.size();
  std::uint32_t best = 0;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    auto in = [&](const std::string& t) {
      const auto idx = std::lower_bound(teams.begin(), teams.end(), t) - teams.begin();
      return (mask >> idx) & 1u;
    };
    std::vector<int> games(n, 0);
    for (const auto& m : matches) {
      if (in(m.team_a()) && in(m.team_b())) {
        games[static_cast<std::size_t>(std::lower_bound(teams.begin(), teams.end(), m.team_a()) - teams.begin())] += static_cast<int>(m.games.size());
        games[static_cast<std::size_t>(std::lower_bound(teams.begin(), teams.end(), m.team_b()) - teams.begin())] += static_cast<int>(m.games.size());
      }
    }
    bool ok = true;
    for (std::size_t t = 0; t < n; ++t) {
      if (((mask >> t) & 1u) && games[t] < min_games) ok = false;
    }
    if (ok) best |= mask;  // valid sets are closed under union
  }
  std::set<std::string> out;
  for (std::size_t t = 0; t < n; ++t) {
    if ((best >> t) & 1u) out.insert(teams[t]);
  }
  return out;
}

}  // namespace

TEST_CASE("a well-formed line parses and round-trips") {
  const MatchRecord m = parse_match_line(kLine);
  CHECK(m.match_id == "x1");
  CHECK(m.team_a() == "a");
  CHECK(m.games.size() == 2);
  CHECK(m.match_winner == "a");
  CHECK(decider(m.veto) == MapId(6));
  const MatchRecord again = parse_match_line(serialize_match(m));
  CHECK(again == m);
}

TEST_CASE("invalid lines are rejected with a reason") {
  CHECK_THROWS_WITH_AS(parse_match_line("{not json"), doctest::Contains("malformed JSON"), validation_error);
  CHECK_THROWS_WITH_AS(parse_match_line(replace(kLine, R"("map":"overpass")", R"("map":"cache")")),
                       doctest::Contains("unsupported map pool"), validation_error);
  CHECK_THROWS_WITH_AS(
      parse_match_line(replace(kLine, R"(,{"team":"b","action":"ban","map":"train"})", "")),
      doctest::Contains("unsupported veto format"), validation_error);
  CHECK_THROWS_AS(parse_match_line(replace(kLine, R"({"team":"a","action":"pick","map":"mirage"})",
                                           R"({"team":"b","action":"pick","map":"mirage"})")),
                  turn_order_error);
  CHECK_THROWS_AS(parse_match_line(replace(kLine, R"("winner":"a")", R"("winner":"b")")), validation_error);
  CHECK_THROWS_AS(parse_match_line(replace(kLine, R"("winner":"a")", R"("winner":"c")")), validation_error);
  CHECK_THROWS_AS(parse_match_line(replace(kLine, R"("date":"2020-05-01")", R"("date":"yesterday")")),
                  validation_error);
  CHECK_THROWS_AS(parse_match_line(replace(kLine, R"("rounds_a":16,"rounds_b":10)", R"("rounds_a":15,"rounds_b":15)")),
                  validation_error);
}

TEST_CASE("parse_match_log collects line errors without stopping") {
  std::stringstream in;
  in << kLine << "\n\n" << "garbage\n" << replace(kLine, "x1", "x2") << "\n";
  const ParseResult r = parse_match_log(in);
  CHECK(r.matches.size() == 2);
  REQUIRE(r.errors.size() == 1);
  CHECK(r.errors[0].line == 3);
}

TEST_CASE("match log writer and parser agree") {
  Rng rng(1);
  const auto league = random_league(rng, 6, 40);
  std::stringstream buf;
  write_match_log(buf, league);
  const ParseResult r = parse_match_log(buf);
  CHECK(r.errors.empty());
  CHECK(r.matches == league);
}

TEST_CASE("filter reaches the brute-force fixed point") {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const int n_teams = 5 + static_cast<int>(rng.below(6));
    const auto league = random_league(rng, n_teams, 10 + static_cast<int>(rng.below(40)));
    const int min_games = 4 + static_cast<int>(rng.below(10));
    const auto [kept, report] = filter_dataset(league, FilterConfig{min_games});
    std::set<std::string> teams;
    for (const auto& m : kept) {
      teams.insert(m.team_a());
      teams.insert(m.team_b());
    }
    const auto core = brute_force_core(league, min_games);
    // Every match between core teams is retained, nothing else.
    long expected = 0;
    for (const auto& m : league) expected += core.count(m.team_a()) && core.count(m.team_b());
    CHECK(static_cast<long>(kept.size()) == expected);
    CHECK(report.retained_teams == static_cast<long>(core.size()));
    for (const auto& t : teams) CHECK(core.count(t));
    CHECK(report.reconciles());
  }
}

TEST_CASE("filter counts unsupported records and reconciles") {
  Rng rng(3);
  auto league = random_league(rng, 4, 30);
  league[0].games.pop_back();  // a single game is not best-of-three
  if (league[0].games.size() == 2) league[0].games.pop_back();
  const auto [kept, report] = filter_dataset(league, FilterConfig{1});
  CHECK(report.removed_format == 1);
  CHECK(report.retained_matches == 29);
  CHECK(report.reconciles());
  CHECK(report.to_json().find("\"retained\"") != std::string::npos);

  const auto [none, empty_report] = filter_dataset(league, FilterConfig{100000});
  CHECK(none.empty());
  CHECK_FALSE(empty_report.warnings.empty());
  CHECK(empty_report.reconciles());
}

TEST_CASE("chronological split takes the newest matches as test") {
  Rng rng(4);
  auto league = random_league(rng, 5, 53);
  std::reverse(league.begin(), league.end());
  const SplitResult s = chronological_split(league, 0.2);
  CHECK(s.test.size() == 11);  // ceil(0.2 * 53)
  CHECK(s.train.size() == 42);
  for (const auto& t : s.test) CHECK(t.date >= s.train.back().date);
  CHECK(chronological_split(random_league(rng, 5, 10), 0.2).test.size() == 2);
  CHECK_THROWS_AS(chronological_split(random_league(rng, 5, 4), 0.2), validation_error);
  CHECK_THROWS_AS(chronological_split(random_league(rng, 5, 20), 1.0), validation_error);
}

TEST_CASE("random split is seeded and disjoint") {
  Rng rng(5);
  const auto league = random_league(rng, 5, 50);
  const SplitResult a = random_split(league, 0.2, 9);
  const SplitResult b = random_split(league, 0.2, 9);
  CHECK(a.test == b.test);
  CHECK(a.test.size() == 10);
  std::set<std::string> ids;
  for (const auto& m : a.train) ids.insert(m.match_id);
  for (const auto& m : a.test) CHECK(ids.insert(m.match_id).second);
  CHECK(ids.size() == 50);
}

TEST_CASE("decision dataset uses only earlier matches") {
  Rng rng(6);
  const auto league = random_league(rng, 4, 60);
  const auto records = build_decision_dataset(league, RewardKind::ZeroOne);
  REQUIRE(records.size() == 360);
  for (int i = 0; i < 6; ++i) {
    for (int f = kDeciderMatchRate; f < kContextDim; ++f) CHECK(records[static_cast<std::size_t>(i)].context[static_cast<std::size_t>(f)] == 0.5);
  }
  // Availability shrinks along each veto.
  CHECK(records[0].available().size() == 7);
  CHECK(records[5].available().size() == 2);
  CHECK(records[6].sequence == 1);

  // Altering the outcome of match k leaves contexts up to match k unchanged.
  auto altered = league;
  const std::size_t k = 30;
  for (auto& g : altered[k].games) std::swap(g.rounds_a, g.rounds_b);
  for (auto& g : altered[k].games) g.winner = g.rounds_a > g.rounds_b ? altered[k].team_a() : altered[k].team_b();
  altered[k].match_winner = altered[k].match_winner == altered[k].team_a() ? altered[k].team_b() : altered[k].team_a();
  const auto changed = build_decision_dataset(altered, RewardKind::ZeroOne);
  for (std::size_t i = 0; i < (k + 1) * 6; ++i) CHECK(changed[i].context == records[i].context);
  bool later_differs = false;
  for (std::size_t i = (k + 1) * 6; i < records.size(); ++i) later_differs |= !(changed[i].context == records[i].context);
  CHECK(later_differs);

  // Frozen statistics: every context after the cut uses the same team table.
  DatasetOptions opt;
  opt.freeze_stats_after = 40;
  const auto frozen = build_decision_dataset(league, RewardKind::ZeroOne, opt);
  const auto stats = team_statistics(std::span(league).subspan(0, 40));
  for (std::size_t i = 40 * 6; i < frozen.size(); ++i) {
    const auto& r = frozen[i];
    const auto expect = build_context(stats.at(r.team), stats.at(r.opponent), r.available());
    CHECK(r.context == expect);
  }
}

TEST_CASE("decision csv and partition") {
  Rng rng(7);
  const auto league = random_league(rng, 4, 20);
  const auto records = build_decision_dataset(league, RewardKind::MarginOfRounds);
  std::stringstream out;
  write_decision_csv(out, records);
  std::string header;
  std::getline(out, header);
  CHECK(header.rfind("c0,c1,", 0) == 0);
  CHECK(header.find("action,kind,ban_index,reward,propensity,match_id,team,opponent,step") != std::string::npos);
  int rows = 0;
  for (std::string line; std::getline(out, line);) ++rows;
  CHECK(rows == 120);

  const SplitResult s = chronological_split(league, 0.25);
  const auto [train, test] = partition_decisions(records, s.test);
  CHECK(test.size() == 30);
  CHECK(train.size() == 90);
  std::set<std::string> test_ids;
  for (const auto& m : s.test) test_ids.insert(m.match_id);
  for (const auto& r : train) CHECK_FALSE(test_ids.count(r.match_id));
}
