#include "veto/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "veto/advisor.hpp"
#include "veto/behavior.hpp"
#include "veto/data_io.hpp"
#include "veto/model_io.hpp"
#include "veto/ope.hpp"
#include "veto/simulator.hpp"
#include "veto/training.hpp"

namespace veto {

using nlohmann::json;

namespace {

struct Options {
  std::string command;
  std::string input;
  std::string output;
  std::string variant = "combo";
  std::string reward = "zero-one";
  double lr = 0.01;
  int epochs = 3;
  std::uint64_t seed = 1;
  std::string mask = "on";
  double lambda = 1.0;
  double test_fraction = 0.2;
  std::string stats = "live";
  int port = kDefaultAdvisorPort;
  std::string host = "127.0.0.1";
  std::string grid;
  int teams = 20;
  long matches = 5000;
  double strength_scale = 1.0;
  double permaban_fraction = 0.3;
  int min_games = 25;
  int checkpoint_every = 100;
  std::string checkpoint_unit = "decisions";
  std::vector<std::string> models;
  std::string state;

  json to_json() const {
    return json{{"command", command},
                {"input", input},
                {"output", output},
                {"variant", variant},
                {"reward", reward},
                {"lr", lr},
                {"epochs", epochs},
                {"seed", seed},
                {"mask", mask},
                {"lambda", lambda},
                {"test-fraction", test_fraction},
                {"stats", stats},
                {"port", port},
                {"host", host},
                {"grid", grid},
                {"teams", teams},
                {"matches", matches},
                {"strength-scale", strength_scale},
                {"permaban-fraction", permaban_fraction},
                {"min-games", min_games},
                {"checkpoint-every", checkpoint_every},
                {"checkpoint-unit", checkpoint_unit},
                {"model", models},
                {"state", state}};
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw error("cannot write '" + path + "'");
  out << content;
  if (!out) throw error("write failure on '" + path + "'");
}

void require(const std::string& value, const char* flag, const std::string& command) {
  if (value.empty()) throw validation_error(command + " needs " + flag);
}

json input_entry(const std::string& path) {
  return json{{"path", path}, {"fnv1a64", hex64(fnv1a64(read_file(path)))}};
}

void write_manifest(const Options& opt, const std::string& output, const json& inputs) {
  json m{{"tool", "veto_bandit"}, {"config", opt.to_json()}, {"inputs", inputs}};
  write_file(output + ".manifest.json", m.dump(1) + "\n");
}

std::vector<MatchRecord> load_matches(const std::string& path, std::ostream& err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error("cannot read '" + path + "'");
  ParseResult parsed = parse_match_log(in);
  if (!parsed.errors.empty()) {
    err << "warning: skipped " << parsed.errors.size() << " invalid line(s); first at line "
        << parsed.errors.front().line << ": " << parsed.errors.front().reason << "\n";
  }
  sort_chronologically(parsed.matches);
  return std::move(parsed.matches);
}

TrainingConfig training_config(const Options& opt) {
  TrainingConfig c;
  c.learning_rate = opt.lr;
  c.epochs = opt.epochs;
  c.reward_kind = parse_reward_kind(opt.reward);
  c.variant = parse_bandit_variant(opt.variant);
  c.seed = opt.seed;
  c.checkpoint_every = opt.checkpoint_every;
  c.checkpoint_unit = parse_checkpoint_unit(opt.checkpoint_unit);
  c.mask = opt.mask == "on";
  c.validate();
  return c;
}

// Filtered matches split chronologically; decision records (statistics live
// or frozen after the training period) with fitted behavior propensities.
struct Prepared {
  std::vector<MatchRecord> train_matches;
  std::vector<MatchRecord> test_matches;
  std::vector<DecisionRecord> train;
  std::vector<DecisionRecord> test;
  FilterReport report;
};

Prepared prepare(const Options& opt, RewardKind kind, std::ostream& err) {
  auto [kept, report] = filter_dataset(load_matches(opt.input, err), FilterConfig{opt.min_games});
  for (const auto& w : report.warnings) err << "warning: " << w << "\n";
  SplitResult split = chronological_split(std::move(kept), opt.test_fraction);
  std::vector<MatchRecord> all = split.train;
  all.insert(all.end(), split.test.begin(), split.test.end());
  DatasetOptions dopt;
  if (opt.stats == "frozen") dopt.freeze_stats_after = split.train.size();
  const auto records = build_decision_dataset(all, kind, dopt);
  auto [train, test] = partition_decisions(records, split.test);
  const BehaviorModel behavior = fit_behavior_policy(train);
  for (const auto& w : behavior.warnings) err << "warning: " << w << "\n";
  attach_propensities(behavior, train);
  attach_propensities(behavior, test);
  return {std::move(split.train), std::move(split.test), std::move(train), std::move(test),
          std::move(report)};
}

std::string model_id(const std::string& path) { return std::filesystem::path(path).stem().string(); }

std::map<std::string, TeamRecord> load_stats(const Options& opt, std::ostream& err) {
  if (opt.input.empty()) return {};
  return team_statistics(load_matches(opt.input, err));
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

// ---------------------------------------------------------------------------

int cmd_simulate(const Options& opt, std::ostream& out) {
  require(opt.output, "--output", "simulate");
  EcosystemConfig eco_cfg;
  eco_cfg.n_teams = opt.teams;
  eco_cfg.seed = opt.seed;
  eco_cfg.strength_scale = opt.strength_scale;
  eco_cfg.permaban_fraction = opt.permaban_fraction;
  const SyntheticEcosystem eco = generate_ecosystem(eco_cfg);
  const auto season = simulate_season(eco, {opt.matches, derive_seed(opt.seed, 1)});
  std::ostringstream log;
  write_match_log(log, match_records(season));
  write_file(opt.output, log.str());
  write_manifest(opt, opt.output, json::array());
  out << "wrote " << season.size() << " matches to " << opt.output << "\n";
  return 0;
}

int cmd_ingest(const Options& opt, std::ostream& out, std::ostream& err) {
  require(opt.input, "--input", "ingest");
  require(opt.output, "--output", "ingest");
  auto [kept, report] = filter_dataset(load_matches(opt.input, err), FilterConfig{opt.min_games});
  const auto records = build_decision_dataset(kept, parse_reward_kind(opt.reward));
  std::ostringstream csv;
  write_decision_csv(csv, records);
  write_file(opt.output, csv.str());
  write_file(opt.output + ".report.json", report.to_json() + "\n");
  write_manifest(opt, opt.output, json::array({input_entry(opt.input)}));
  out << "retained " << report.retained_matches << " of " << report.input_matches << " matches ("
      << report.retained_teams << " teams); wrote " << records.size() << " decisions to "
      << opt.output << "\n";
  return 0;
}

int cmd_train(const Options& opt, std::ostream& out, std::ostream& err) {
  require(opt.input, "--input", "train");
  require(opt.output, "--output", "train");
  TrainingConfig config = training_config(opt);
  const Prepared data = prepare(opt, config.reward_kind, err);

  json grid_scores = json::array();
  if (!opt.grid.empty()) {
    const auto grid = opt.grid == "default" ? default_grid() : parse_grid(opt.grid);
    const GridSearchResult gs = grid_search(data.train, 0.2, grid, config);
    for (const auto& [point, score] : gs.scores) {
      grid_scores.push_back({{"lr", point.learning_rate}, {"epochs", point.epochs}, {"value", score}});
    }
    config = gs.best_config;
  }

  const auto test_picks = select_kind(data.test, ActionKind::Pick);
  const auto test_bans = select_kind(data.test, ActionKind::Ban);
  if (test_picks.empty() || test_bans.empty()) throw validation_error("test split has no decisions");
  const CheckpointEvaluator evaluator = [&](const TrainedPolicy& p) {
    return std::pair{sn_iw_value(p, test_picks).value, sn_iw_value(p, test_bans).value};
  };
  const TrainedPolicy policy = train(data.train, config, evaluator);

  const json inputs = json::array({input_entry(opt.input)});
  json provenance{{"config", opt.to_json()}, {"inputs", inputs}, {"train_matches", data.train_matches.size()},
                  {"test_matches", data.test_matches.size()}};
  if (!grid_scores.empty()) provenance["grid"] = grid_scores;
  save_policy(opt.output, policy, provenance.dump());

  std::ostringstream csv;
  csv << "decision_index,pick_value,ban_value\n" << std::setprecision(17);
  for (const auto& c : policy.checkpoints) {
    csv << c.decision_index << ',' << c.pick_value << ',' << c.ban_value << '\n';
  }
  const std::string checkpoint_path = opt.output + ".checkpoints.csv";
  write_file(checkpoint_path, csv.str());
  write_manifest(opt, opt.output, inputs);
  out << "trained " << policy.name() << " (lr " << config.learning_rate << ", epochs " << config.epochs
      << ") on " << data.train.size() << " decisions; " << policy.checkpoints.size()
      << " checkpoints in " << checkpoint_path << "\n";
  return 0;
}

int cmd_evaluate(const Options& opt, std::ostream& out, std::ostream& err) {
  require(opt.input, "--input", "evaluate");
  require(opt.output, "--output", "evaluate");
  const Prepared zo = prepare(opt, RewardKind::ZeroOne, err);
  const Prepared mor = prepare(opt, RewardKind::MarginOfRounds, err);

  TrainingConfig base = training_config(opt);
  std::vector<TrainedPolicy> trained;
  trained.reserve(6);
  for (BanditVariant v : {BanditVariant::Split, BanditVariant::Combo, BanditVariant::Episodic}) {
    base.variant = v;
    base.reward_kind = RewardKind::ZeroOne;
    trained.push_back(train(zo.train, base));
    base.reward_kind = RewardKind::MarginOfRounds;
    trained.push_back(train(mor.train, base));
  }
  const std::vector<ModelEntry> models = {{"Split", &trained[0], &trained[1]},
                                          {"Combo", &trained[2], &trained[3]},
                                          {"Episodic", &trained[4], &trained[5]}};
  OpeConfig ope;
  ope.lambda = opt.lambda;
  const EvaluationGrid grid = evaluation_grid(models, {zo.test, mor.test}, ope);
  write_file(opt.output, grid.to_csv());
  write_file(opt.output + ".txt", grid.to_text());
  write_manifest(opt, opt.output, json::array({input_entry(opt.input)}));
  out << grid.to_text();
  return 0;
}

int cmd_recommend(const Options& opt, std::ostream& out, std::ostream& err) {
  if (opt.models.empty()) throw validation_error("recommend needs --model");
  require(opt.state, "--state", "recommend");
  std::map<std::string, TrainedPolicy> models;
  const std::string id = model_id(opt.models.front());
  models.emplace(id, load_policy(opt.models.front()));
  const Advisor advisor(std::move(models), load_stats(opt, err));

  json state_json;
  try {
    state_json = json::parse(read_file(opt.state));
  } catch (const json::parse_error& e) {
    throw validation_error(std::string("draft state is not JSON: ") + e.what());
  }
  if (state_json.is_object() && !state_json.contains("model_id")) state_json["model_id"] = id;
  const Recommendation rec = advisor.recommend(parse_draft_state(state_json.dump()));

  out << "model " << rec.model_id << " (" << to_string(rec.variant) << "), step " << rec.step;
  if (rec.cold_start) out << ", cold start";
  out << "\n";
  if (rec.complete) {
    out << "veto complete; decider: " << rec.decider->name() << "\n";
    return 0;
  }
  out << rec.team << " to " << to_string(rec.kind) << "\n";
  for (const auto& [map, p] : rec.distribution) {
    out << std::left << std::setw(10) << map.name() << format_double(p) << "\n";
  }
  return 0;
}

int cmd_serve(const Options& opt, std::ostream& out, std::ostream& err) {
  if (opt.models.empty()) throw validation_error("serve needs at least one --model");
  std::map<std::string, TrainedPolicy> models;
  for (const auto& path : opt.models) {
    if (!models.emplace(model_id(path), load_policy(path)).second) {
      throw validation_error("duplicate model id '" + model_id(path) + "'");
    }
  }
  const Advisor advisor(std::move(models), load_stats(opt, err));
  AdvisorServer server(advisor);
  const int port = server.bind(opt.host, opt.port);
  out << "listening on " << opt.host << ":" << port << std::endl;
  server.listen();
  return 0;
}

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

int fail(std::ostream& err, const char* category, const std::string& message, int status = 1) {
  err << json{{"error", category}, {"message", one_line(message)}}.dump() << "\n";
  return status;
}

}  // namespace

int execute_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Map veto contextual-bandit toolkit", "veto_bandit"};
  app.set_config("--config", "", "Flat key=value file mirroring flag names")->envname(kConfigEnvVar);
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--input", opt.input, "Input match log");
  app.add_option("--output", opt.output, "Output path");
  app.add_option("--variant", opt.variant)->check(CLI::IsMember({"split", "combo", "episodic"}));
  app.add_option("--reward", opt.reward)->check(CLI::IsMember({"zero-one", "mor"}));
  app.add_option("--lr", opt.lr, "Learning rate");
  app.add_option("--epochs", opt.epochs);
  app.add_option("--seed", opt.seed);
  app.add_option("--mask", opt.mask, "Restrict training softmax to available maps")
      ->check(CLI::IsMember({"on", "off"}));
  app.add_option("--lambda", opt.lambda, "Ridge penalty of the direct-method reward model");
  app.add_option("--test-fraction", opt.test_fraction);
  app.add_option("--stats", opt.stats, "Team statistics through the test period: live or frozen after training")
      ->check(CLI::IsMember({"live", "frozen"}));
  app.add_option("--port", opt.port);
  app.add_option("--host", opt.host);
  app.add_option("--grid", opt.grid, "Grid search: 'default' or 'lr,lr;epochs,epochs'");
  app.add_option("--teams", opt.teams);
  app.add_option("--matches", opt.matches);
  app.add_option("--strength-scale", opt.strength_scale);
  app.add_option("--permaban-fraction", opt.permaban_fraction);
  app.add_option("--min-games", opt.min_games);
  app.add_option("--checkpoint-every", opt.checkpoint_every);
  app.add_option("--checkpoint-unit", opt.checkpoint_unit)->check(CLI::IsMember({"decisions", "matches"}));
  app.add_option("--model", opt.models, "Serialized model (repeatable for serve)");
  app.add_option("--state", opt.state, "Draft state JSON file");

  app.add_subcommand("simulate", "Generate a synthetic match log");
  app.add_subcommand("ingest", "Filter a match log and write the decision dataset");
  app.add_subcommand("train", "Train a bandit policy");
  app.add_subcommand("evaluate", "Off-policy evaluation grid of all variants");
  app.add_subcommand("recommend", "Print the policy distribution for a draft state");
  app.add_subcommand("serve", "Run the advisor HTTP service");

  std::vector<std::string> argv_store{"veto_bandit"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    return fail(err, "usage", e.what(), 2);
  }
  opt.command = app.get_subcommands().front()->get_name();

  try {
    if (opt.command == "simulate") return cmd_simulate(opt, out);
    if (opt.command == "ingest") return cmd_ingest(opt, out, err);
    if (opt.command == "train") return cmd_train(opt, out, err);
    if (opt.command == "evaluate") return cmd_evaluate(opt, out, err);
    if (opt.command == "recommend") return cmd_recommend(opt, out, err);
    return cmd_serve(opt, out, err);
  } catch (const advisor_error& e) {
    return fail(err, "draft", e.what());
  } catch (const validation_error& e) {
    return fail(err, "validation", e.what());
  } catch (const veto_error& e) {
    return fail(err, "veto", e.what());
  } catch (const estimation_error& e) {
    return fail(err, "estimation", e.what());
  } catch (const training_error& e) {
    return fail(err, "training", e.what());
  } catch (const error& e) {
    return fail(err, "io", e.what());
  } catch (const std::exception& e) {
    return fail(err, "internal", e.what());
  }
}

}  // namespace veto
