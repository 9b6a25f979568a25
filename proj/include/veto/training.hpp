#ifndef VETO_TRAINING_HPP
#define VETO_TRAINING_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "veto/decision.hpp"
#include "veto/policy.hpp"

namespace veto {

enum class BanditVariant : std::uint8_t { Split, Combo, Episodic };

std::string_view to_string(BanditVariant v);
BanditVariant parse_bandit_variant(std::string_view text);

enum class CheckpointUnit : std::uint8_t { Decisions, Matches };

std::string_view to_string(CheckpointUnit u);
CheckpointUnit parse_checkpoint_unit(std::string_view text);

struct TrainingConfig {
  double learning_rate = 0.01;
  int epochs = 3;
  RewardKind reward_kind = RewardKind::ZeroOne;
  BanditVariant variant = BanditVariant::Combo;
  std::uint64_t seed = 1;
  int checkpoint_every = 100;  // units between checkpoints
  CheckpointUnit checkpoint_unit = CheckpointUnit::Decisions;
  bool mask = true;            // restrict softmax to available maps while training

  void validate() const;
};

struct Checkpoint {
  long decision_index = 0;
  double pick_value = 0.0;
  double ban_value = 0.0;
};

// Number of per-record gradient terms applied and parameter writes performed.
struct UpdateCounts {
  long pick_terms = 0;
  long ban_terms = 0;
  long parameter_updates = 0;
};

// Split: independent pick and ban parameters. Combo: one parameter vector,
// bans derived from picks. Episodic: one double-width vector, pick blocks then
// ban blocks. Inference is always masked to the available maps.
class TrainedPolicy final : public DecisionPolicy {
public:
  TrainedPolicy() = default;
  explicit TrainedPolicy(const TrainingConfig& config);

  BanditVariant variant = BanditVariant::Combo;
  TrainingConfig config;
  PolicyParameters pick;
  std::optional<PolicyParameters> ban;  // Split only
  std::vector<Checkpoint> checkpoints;
  UpdateCounts counts;

  ActionDistribution pick_distribution(const ContextVector& x, bool masked = true) const;
  ActionDistribution ban_distribution(const ContextVector& x, bool masked = true) const;
  ActionDistribution distribution_for(const ContextVector& x, ActionKind kind,
                                      bool masked = true) const;

  ActionDistribution distribution(const DecisionRecord& situation) const override;
  std::string name() const override;
};

// theta + eta * reward * gradient. Throws training_error on non-finite input.
std::vector<double> sgd_step(std::span<const double> theta, std::span<const double> gradient,
                             double reward, double eta);

// Returns (pick value, ban value) for a snapshot of the policy.
using CheckpointEvaluator = std::function<std::pair<double, double>(const TrainedPolicy&)>;

// Policy-gradient training over decisions grouped by match in chronological
// order. Picks update online; bans (and, for Episodic, everything) update once
// per match from accumulated terms.
TrainedPolicy train(std::span<const DecisionRecord> dataset, const TrainingConfig& config,
                    const CheckpointEvaluator& evaluator = {});

struct GridPoint {
  double learning_rate = 0.0;
  int epochs = 0;
};

std::vector<GridPoint> default_grid();
// "0.001,0.01;1,2,3" style: learning rates, then epochs.
std::vector<GridPoint> parse_grid(std::string_view text);

struct GridSearchResult {
  TrainingConfig best_config;
  TrainedPolicy best_policy;  // trained on the reduced training set
  std::vector<std::pair<GridPoint, double>> scores;  // validation SN-IW pick value
};

// Holds out the chronologically last `validation_fraction` of matches, trains
// each grid point on the rest and keeps the best SN-IW pick value. Ties go to
// the lowest learning rate, then the fewest epochs. Validation records need
// behavior propensities.
GridSearchResult grid_search(std::span<const DecisionRecord> train_set, double validation_fraction,
                             const std::vector<GridPoint>& grid, const TrainingConfig& base_config);

}  // namespace veto

#endif  // VETO_TRAINING_HPP
