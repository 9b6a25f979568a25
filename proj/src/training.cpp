#include "veto/training.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <set>
#include <sstream>

#include "veto/errors.hpp"
#include "veto/ope.hpp"

namespace veto {

std::string_view to_string(BanditVariant v) {
  switch (v) {
    case BanditVariant::Split: return "split";
    case BanditVariant::Combo: return "combo";
    case BanditVariant::Episodic: return "episodic";
  }
  return "?";
}

BanditVariant parse_bandit_variant(std::string_view text) {
  if (text == "split") return BanditVariant::Split;
  if (text == "combo") return BanditVariant::Combo;
  if (text == "episodic") return BanditVariant::Episodic;
  throw validation_error("unknown variant '" + std::string(text) + "', expected split, combo or episodic");
}

std::string_view to_string(CheckpointUnit u) {
  return u == CheckpointUnit::Decisions ? "decisions" : "matches";
}

CheckpointUnit parse_checkpoint_unit(std::string_view text) {
  if (text == "decisions") return CheckpointUnit::Decisions;
  if (text == "matches") return CheckpointUnit::Matches;
  throw validation_error("unknown checkpoint unit '" + std::string(text) + "', expected decisions or matches");
}

void TrainingConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw validation_error("learning rate must be positive");
  }
  if (epochs < 1) throw validation_error("epochs must be at least 1");
  if (checkpoint_every < 1) throw validation_error("checkpoint interval must be at least 1");
}

TrainedPolicy::TrainedPolicy(const TrainingConfig& cfg) : variant(cfg.variant), config(cfg) {
  switch (variant) {
    case BanditVariant::Split:
      pick = PolicyParameters::zeros(PolicyVariant::SplitPick);
      ban = PolicyParameters::zeros(PolicyVariant::SplitBan);
      break;
    case BanditVariant::Combo:
      pick = PolicyParameters::zeros(PolicyVariant::Combo);
      break;
    case BanditVariant::Episodic:
      pick = PolicyParameters::zeros(PolicyVariant::Episodic);
      break;
  }
}

ActionDistribution TrainedPolicy::pick_distribution(const ContextVector& x, bool masked) const {
  return action_probabilities(pick, x, masked, 0);
}

ActionDistribution TrainedPolicy::ban_distribution(const ContextVector& x, bool masked) const {
  switch (variant) {
    case BanditVariant::Split: return action_probabilities(*ban, x, masked, 0);
    case BanditVariant::Combo: return derived_ban_distribution(pick, x, masked, 0);
    case BanditVariant::Episodic: return action_probabilities(pick, x, masked, kMapCount);
  }
  throw validation_error("unknown variant");
}

ActionDistribution TrainedPolicy::distribution_for(const ContextVector& x, ActionKind kind,
                                                   bool masked) const {
  return kind == ActionKind::Pick ? pick_distribution(x, masked) : ban_distribution(x, masked);
}

ActionDistribution TrainedPolicy::distribution(const DecisionRecord& situation) const {
  return distribution_for(situation.context, situation.kind, true);
}

std::string TrainedPolicy::name() const {
  return std::string(to_string(variant)) + "/" + std::string(to_string(config.reward_kind));
}

std::vector<double> sgd_step(std::span<const double> theta, std::span<const double> gradient,
                             double reward, double eta) {
  if (theta.size() != gradient.size()) {
    throw training_error("sgd_step: theta has " + std::to_string(theta.size()) +
                         " entries but gradient has " + std::to_string(gradient.size()));
  }
  if (!std::isfinite(reward) || !std::isfinite(eta)) {
    throw training_error("sgd_step: non-finite reward or learning rate");
  }
  std::vector<double> next(theta.begin(), theta.end());
  for (std::size_t i = 0; i < next.size(); ++i) {
    if (!std::isfinite(gradient[i])) {
      throw training_error("sgd_step: non-finite gradient entry " + std::to_string(i) + " (block " +
                           std::to_string(i / kContextDim) + ", feature " +
                           std::to_string(i % kContextDim) + ")");
    }
    next[i] += eta * reward * gradient[i];
  }
  return next;
}

namespace {

struct MatchSpan {
  std::size_t begin;
  std::size_t end;
};

// Groups contiguous records by match and checks chronological order.
std::vector<MatchSpan> group_matches(std::span<const DecisionRecord> data) {
  std::vector<MatchSpan> groups;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& r = data[i];
    if (!r.reward) {
      throw training_error("record " + std::to_string(i) + " of match '" + r.match_id +
                           "' has no reward");
    }
    if (groups.empty() || data[groups.back().begin].match_id != r.match_id) {
      if (!groups.empty() && data[groups.back().begin].sequence > r.sequence) {
        throw training_error("dataset is not chronologically ordered at match '" + r.match_id + "'");
      }
      if (!seen.insert(r.match_id).second) {
        throw training_error("records of match '" + r.match_id + "' are not contiguous");
      }
      groups.push_back({i, i + 1});
    } else {
      if (data[i - 1].step >= r.step) {
        throw training_error("records of match '" + r.match_id + "' are not in veto order");
      }
      groups.back().end = i + 1;
    }
  }
  return groups;
}

void apply_update(std::vector<double>& theta, const std::vector<double>& delta) {
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (!std::isfinite(delta[i])) {
      throw training_error("non-finite update at weight " + std::to_string(i) + " (block " +
                           std::to_string(i / kContextDim) + ", feature " +
                           std::to_string(i % kContextDim) + ")");
    }
    theta[i] += delta[i];
  }
}

}  // namespace

TrainedPolicy train(std::span<const DecisionRecord> dataset, const TrainingConfig& config,
                    const CheckpointEvaluator& evaluator) {
  config.validate();
  TrainedPolicy policy(config);
  const auto groups = group_matches(dataset);
  const double eta = config.learning_rate;
  const bool masked = config.mask;

  long decisions_seen = 0;
  long matches_seen = 0;
  auto checkpoint = [&] {
    const auto [pick_value, ban_value] = evaluator(policy);
    policy.checkpoints.push_back({decisions_seen, pick_value, ban_value});
  };
  auto tick = [&] {
    ++decisions_seen;
    if (evaluator && config.checkpoint_unit == CheckpointUnit::Decisions &&
        decisions_seen % config.checkpoint_every == 0) {
      checkpoint();
    }
  };

  const std::size_t dim = policy.pick.dimension();
  std::vector<double> episode(dim);
  std::vector<double> ban_episode(policy.ban ? policy.ban->dimension() : 0);
  std::vector<double> grad(dim);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (const auto& g : groups) {
      std::fill(episode.begin(), episode.end(), 0.0);
      std::fill(ban_episode.begin(), ban_episode.end(), 0.0);
      bool episode_pending = false;
      bool ban_pending = false;

      for (std::size_t i = g.begin; i < g.end; ++i) {
        const DecisionRecord& r = dataset[i];
        const double reward = *r.reward;
        const bool is_pick = r.kind == ActionKind::Pick;
        switch (config.variant) {
          case BanditVariant::Split:
            if (is_pick) {
              std::fill(grad.begin(), grad.end(), 0.0);
              accumulate_log_gradient(policy.pick, r.context, r.action, masked, 0, 1.0, grad);
              policy.pick.theta = sgd_step(policy.pick.theta, grad, reward, eta);
              ++policy.counts.pick_terms;
              ++policy.counts.parameter_updates;
            } else {
              accumulate_log_gradient(*policy.ban, r.context, r.action, masked, 0, eta * reward,
                                      ban_episode);
              ++policy.counts.ban_terms;
              ban_pending = true;
            }
            break;
          case BanditVariant::Combo:
            if (is_pick) {
              std::fill(grad.begin(), grad.end(), 0.0);
              accumulate_log_gradient(policy.pick, r.context, r.action, masked, 0, 1.0, grad);
              policy.pick.theta = sgd_step(policy.pick.theta, grad, reward, eta);
              ++policy.counts.pick_terms;
              ++policy.counts.parameter_updates;
            } else {
              accumulate_derived_ban_gradient(policy.pick, r.context, r.action, masked, 0,
                                              eta * reward, episode);
              ++policy.counts.ban_terms;
              episode_pending = true;
            }
            break;
          case BanditVariant::Episodic:
            accumulate_log_gradient(policy.pick, r.context, r.action, masked,
                                    is_pick ? 0 : kMapCount, eta * reward, episode);
            ++(is_pick ? policy.counts.pick_terms : policy.counts.ban_terms);
            episode_pending = true;
            break;
        }
        tick();
      }

      if (episode_pending) {
        apply_update(policy.pick.theta, episode);
        ++policy.counts.parameter_updates;
      }
      if (ban_pending) {
        apply_update(policy.ban->theta, ban_episode);
        ++policy.counts.parameter_updates;
      }
      ++matches_seen;
      if (evaluator && config.checkpoint_unit == CheckpointUnit::Matches &&
          matches_seen % config.checkpoint_every == 0) {
        checkpoint();
      }
    }
  }
  return policy;
}

std::vector<GridPoint> default_grid() {
  std::vector<GridPoint> grid;
  for (double lr : {0.001, 0.01, 0.1, 0.5}) {
    for (int epochs : {1, 2, 3}) grid.push_back({lr, epochs});
  }
  return grid;
}

std::vector<GridPoint> parse_grid(std::string_view text) {
  const auto semi = text.find(';');
  if (semi == std::string_view::npos) {
    throw validation_error("grid must look like 'lr1,lr2,...;epochs1,epochs2,...'");
  }
  auto split = [](std::string_view part) {
    std::vector<std::string> out;
    std::stringstream ss{std::string(part)};
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) out.push_back(item);
    }
    return out;
  };
  std::vector<GridPoint> grid;
  const auto rates = split(text.substr(0, semi));
  const auto epochs = split(text.substr(semi + 1));
  try {
    for (const auto& lr : rates) {
      for (const auto& e : epochs) grid.push_back({std::stod(lr), std::stoi(e)});
    }
  } catch (const std::exception&) {
    throw validation_error("grid contains a non-numeric entry: '" + std::string(text) + "'");
  }
  if (grid.empty()) throw validation_error("grid is empty");
  return grid;
}

GridSearchResult grid_search(std::span<const DecisionRecord> train_set, double validation_fraction,
                             const std::vector<GridPoint>& grid, const TrainingConfig& base_config) {
  if (grid.empty()) throw validation_error("grid search needs at least one grid point");
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
    throw validation_error("validation fraction must be in (0, 1)");
  }
  const auto groups = group_matches(train_set);
  const auto n_valid = static_cast<std::size_t>(
      std::ceil(validation_fraction * static_cast<double>(groups.size())));
  if (n_valid == 0 || n_valid >= groups.size()) {
    throw validation_error("validation split leaves an empty side");
  }
  const std::size_t cut = groups[groups.size() - n_valid].begin;
  const auto reduced = train_set.subspan(0, cut);
  std::vector<DecisionRecord> validation_picks;
  for (std::size_t i = cut; i < train_set.size(); ++i) {
    if (train_set[i].kind == ActionKind::Pick) validation_picks.push_back(train_set[i]);
  }
  if (validation_picks.size() < 50) {
    throw validation_error("validation slice has " + std::to_string(validation_picks.size()) +
                           " pick decisions; SN-IW needs at least 50");
  }

  std::vector<GridPoint> ordered = grid;
  std::stable_sort(ordered.begin(), ordered.end(), [](const GridPoint& a, const GridPoint& b) {
    return a.learning_rate != b.learning_rate ? a.learning_rate < b.learning_rate
                                              : a.epochs < b.epochs;
  });

  std::vector<std::future<std::pair<TrainedPolicy, double>>> jobs;
  for (const auto& point : ordered) {
    TrainingConfig cfg = base_config;
    cfg.learning_rate = point.learning_rate;
    cfg.epochs = point.epochs;
    jobs.push_back(std::async(std::launch::async, [cfg, reduced, &validation_picks] {
      TrainedPolicy p = train(reduced, cfg);
      const double score = sn_iw_value(p, validation_picks).value;
      return std::make_pair(std::move(p), score);
    }));
  }

  GridSearchResult result;
  bool have_best = false;
  double best = 0.0;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    auto [policy, score] = jobs[k].get();
    result.scores.emplace_back(ordered[k], score);
    if (!have_best || score > best) {
      have_best = true;
      best = score;
      result.best_config = policy.config;
      result.best_policy = std::move(policy);
    }
  }
  return result;
}

}  // namespace veto
