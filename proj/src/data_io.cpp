#include "veto/data_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <unordered_set>

#include "json.hpp"

#include "veto/errors.hpp"
#include "veto/rewards.hpp"
#include "veto/rng.hpp"

namespace veto {

using nlohmann::json;

namespace {

const json& field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw validation_error(std::string("missing field '") + key + "'");
  return *it;
}

std::string string_field(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw validation_error(std::string("field '") + key + "' must be a string");
}

int int_field(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_number_integer()) throw validation_error(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

}  // namespace

MatchRecord parse_match_line(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw validation_error(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw validation_error("line is not a JSON object");

  MatchRecord m;
  m.match_id = string_field(j, "match_id");
  m.date = parse_iso8601(string_field(j, "date"));
  const std::string team_a = string_field(j, "team_a");
  const std::string team_b = string_field(j, "team_b");
  VetoState veto = new_veto(team_a, team_b);

  const json& steps = field(j, "veto");
  if (!steps.is_array()) throw validation_error("field 'veto' must be an array");
  // Pool check first so that foreign maps read as a pool problem, not a turn problem.
  for (const auto& s : steps) {
    if (!s.is_object()) throw validation_error("veto entries must be objects");
    const std::string name = string_field(s, "map");
    if (!MapId::from_name(name)) {
      throw validation_error("unsupported map pool: '" + name + "' is not one of the seven maps");
    }
  }
  if (steps.size() != kVetoSteps) {
    throw validation_error("unsupported veto format: expected 6 decisions, got " +
                           std::to_string(steps.size()));
  }
  for (const auto& s : steps) {
    veto = apply_decision(veto, string_field(s, "team"), parse_action_kind(string_field(s, "action")),
                          MapId::parse(string_field(s, "map")));
  }
  m.veto = std::move(veto);

  const json& games = field(j, "games");
  if (!games.is_array()) throw validation_error("field 'games' must be an array");
  for (const auto& g : games) {
    if (!g.is_object()) throw validation_error("game entries must be objects");
    m.games.push_back(make_game(MapId::parse(string_field(g, "map")), int_field(g, "rounds_a"),
                                int_field(g, "rounds_b"), team_a, team_b));
  }
  m.match_winner = string_field(j, "winner");
  if (!m.involves(m.match_winner)) {
    throw validation_error("winner '" + m.match_winner + "' is not one of the teams");
  }
  validate_match(m);
  return m;
}

ParseResult parse_match_log(std::istream& in) {
  if (!in) throw error("match log stream is not readable");
  ParseResult result;
  std::string line;
  long number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      result.matches.push_back(parse_match_line(line));
    } catch (const veto_error& e) {
      result.errors.push_back({number, e.what()});
    } catch (const validation_error& e) {
      result.errors.push_back({number, e.what()});
    }
  }
  if (in.bad()) throw error("read failure in match log");
  return result;
}

std::string serialize_match(const MatchRecord& m) {
  json j;
  j["match_id"] = m.match_id;
  j["date"] = format_iso8601(m.date);
  j["team_a"] = m.team_a();
  j["team_b"] = m.team_b();
  json veto = json::array();
  for (const auto& d : m.veto.decisions()) {
    veto.push_back({{"team", d.team}, {"action", std::string(to_string(d.kind))}, {"map", std::string(d.map.name())}});
  }
  j["veto"] = std::move(veto);
  json games = json::array();
  for (const auto& g : m.games) {
    games.push_back({{"map", std::string(g.map.name())}, {"rounds_a", g.rounds_a}, {"rounds_b", g.rounds_b}});
  }
  j["games"] = std::move(games);
  j["winner"] = m.match_winner;
  return j.dump();
}

void write_match_log(std::ostream& out, std::span<const MatchRecord> matches) {
  for (const auto& m : matches) out << serialize_match(m) << '\n';
}

std::string FilterReport::to_json() const {
  json j;
  j["input_matches"] = input_matches;
  j["removed"] = {{"format", removed_format}, {"min_games", removed_min_games}};
  j["input_teams"] = input_teams;
  j["removed_teams"] = removed_teams;
  j["retained"] = {{"teams", retained_teams}, {"matches", retained_matches}, {"games", retained_games}};
  j["fixed_point_rounds"] = fixed_point_rounds;
  j["warnings"] = warnings;
  return j.dump(2);
}

bool is_supported_format(const MatchRecord& m) {
  try {
    validate_match(m);
    return true;
  } catch (const error&) {
    return false;
  }
}

std::pair<std::vector<MatchRecord>, FilterReport> filter_dataset(std::vector<MatchRecord> matches,
                                                                 const FilterConfig& config) {
  FilterReport report;
  report.input_matches = static_cast<long>(matches.size());
  std::set<std::string> all_teams;
  for (const auto& m : matches) {
    all_teams.insert(m.team_a());
    all_teams.insert(m.team_b());
  }
  report.input_teams = static_cast<long>(all_teams.size());

  std::vector<MatchRecord> kept;
  kept.reserve(matches.size());
  for (auto& m : matches) {
    if (is_supported_format(m)) {
      kept.push_back(std::move(m));
    } else {
      ++report.removed_format;
    }
  }

  std::set<std::string> retained;
  for (const auto& m : kept) {
    retained.insert(m.team_a());
    retained.insert(m.team_b());
  }
  while (true) {
    std::map<std::string, long> games;
    for (const auto& t : retained) games[t] = 0;
    for (const auto& m : kept) {
      if (retained.count(m.team_a()) && retained.count(m.team_b())) {
        games[m.team_a()] += static_cast<long>(m.games.size());
        games[m.team_b()] += static_cast<long>(m.games.size());
      }
    }
    std::vector<std::string> below;
    for (const auto& [team, count] : games) {
      if (count < config.min_games) below.push_back(team);
    }
    if (below.empty()) break;
    ++report.fixed_point_rounds;
    for (const auto& t : below) retained.erase(t);
  }

  std::vector<MatchRecord> out;
  for (auto& m : kept) {
    if (retained.count(m.team_a()) && retained.count(m.team_b())) {
      report.retained_games += static_cast<long>(m.games.size());
      out.push_back(std::move(m));
    } else {
      ++report.removed_min_games;
    }
  }
  report.retained_matches = static_cast<long>(out.size());
  report.retained_teams = static_cast<long>(retained.size());
  report.removed_teams = report.input_teams - report.retained_teams;
  if (out.empty()) report.warnings.push_back("filter removed every match");
  return {std::move(out), std::move(report)};
}

void sort_chronologically(std::vector<MatchRecord>& matches) {
  std::stable_sort(matches.begin(), matches.end(), [](const MatchRecord& a, const MatchRecord& b) {
    return a.date != b.date ? a.date < b.date : a.match_id < b.match_id;
  });
}

namespace {

std::size_t test_count(std::size_t n, double fraction) {
  if (n < 5) throw validation_error("split needs at least 5 matches, got " + std::to_string(n));
  if (!(fraction > 0.0 && fraction < 1.0)) throw validation_error("test fraction must be in (0, 1)");
  // Guard against 0.2 * 10 landing a hair above 2.
  const double raw = fraction * static_cast<double>(n);
  const double nearest = std::round(raw);
  const auto k = static_cast<std::size_t>(std::abs(raw - nearest) < 1e-9 ? nearest : std::ceil(raw));
  return std::min(k, n - 1);
}

}  // namespace

SplitResult chronological_split(std::vector<MatchRecord> matches, double test_fraction) {
  const std::size_t k = test_count(matches.size(), test_fraction);
  sort_chronologically(matches);
  SplitResult s;
  const auto cut = matches.size() - k;
  s.train.assign(std::make_move_iterator(matches.begin()),
                 std::make_move_iterator(matches.begin() + static_cast<std::ptrdiff_t>(cut)));
  s.test.assign(std::make_move_iterator(matches.begin() + static_cast<std::ptrdiff_t>(cut)),
                std::make_move_iterator(matches.end()));
  return s;
}

SplitResult random_split(std::vector<MatchRecord> matches, double test_fraction, std::uint64_t seed) {
  const std::size_t k = test_count(matches.size(), test_fraction);
  sort_chronologically(matches);
  std::vector<std::size_t> order(matches.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.below(i)]);
  }
  std::vector<bool> is_test(matches.size(), false);
  for (std::size_t i = 0; i < k; ++i) is_test[order[i]] = true;
  SplitResult s;
  for (std::size_t i = 0; i < matches.size(); ++i) {
    (is_test[i] ? s.test : s.train).push_back(std::move(matches[i]));
  }
  return s;
}

std::vector<DecisionRecord> build_decision_dataset(std::span<const MatchRecord> matches,
                                                   RewardKind kind, const DatasetOptions& options) {
  std::vector<const MatchRecord*> ordered;
  ordered.reserve(matches.size());
  for (const auto& m : matches) ordered.push_back(&m);
  std::stable_sort(ordered.begin(), ordered.end(), [](const MatchRecord* a, const MatchRecord* b) {
    return a->date != b->date ? a->date < b->date : a->match_id < b->match_id;
  });

  std::map<std::string, TeamRecord> stats;
  std::vector<DecisionRecord> out;
  out.reserve(ordered.size() * kVetoSteps);
  long sequence = 0;
  for (const MatchRecord* m : ordered) {
    auto records = assign_rewards(*m, kind);
    VetoState replay = new_veto(m->team_a(), m->team_b());
    for (auto& r : records) {
      r.context = build_context(stats[r.team], stats[r.opponent], replay.available());
      r.sequence = sequence;
      replay = apply_decision(replay, r.team, r.kind, r.action);
      out.push_back(std::move(r));
    }
    const bool frozen = options.freeze_stats_after &&
                        static_cast<std::size_t>(sequence) >= *options.freeze_stats_after;
    if (!frozen) {
      stats[m->team_a()] = update_team_stats(stats[m->team_a()], *m, m->team_a());
      stats[m->team_b()] = update_team_stats(stats[m->team_b()], *m, m->team_b());
    }
    ++sequence;
  }
  return out;
}

std::map<std::string, TeamRecord> team_statistics(std::span<const MatchRecord> matches) {
  std::vector<MatchRecord> ordered(matches.begin(), matches.end());
  sort_chronologically(ordered);
  std::map<std::string, TeamRecord> stats;
  for (const auto& m : ordered) {
    stats[m.team_a()] = update_team_stats(stats[m.team_a()], m, m.team_a());
    stats[m.team_b()] = update_team_stats(stats[m.team_b()], m, m.team_b());
  }
  return stats;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_decision_csv(std::ostream& out, std::span<const DecisionRecord> records) {
  for (int j = 0; j < kContextDim; ++j) out << 'c' << j << ',';
  out << "action,kind,ban_index,reward,propensity,match_id,team,opponent,step\n";
  for (const auto& r : records) {
    for (double v : r.context.values) out << number(v) << ',';
    out << r.action.name() << ',' << to_string(r.kind) << ',';
    if (r.ban_index) out << *r.ban_index;
    out << ',';
    if (r.reward) out << number(*r.reward);
    out << ',';
    if (r.behavior_propensity) out << number(*r.behavior_propensity);
    out << ',' << csv_field(r.match_id) << ',' << csv_field(r.team) << ',' << csv_field(r.opponent)
        << ',' << r.step << '\n';
  }
}

std::pair<std::vector<DecisionRecord>, std::vector<DecisionRecord>> partition_decisions(
    std::span<const DecisionRecord> records, std::span<const MatchRecord> test) {
  std::unordered_set<std::string> test_ids;
  for (const auto& m : test) test_ids.insert(m.match_id);
  std::pair<std::vector<DecisionRecord>, std::vector<DecisionRecord>> out;
  for (const auto& r : records) (test_ids.count(r.match_id) ? out.second : out.first).push_back(r);
  return out;
}

}  // namespace veto
