#ifndef VETO_OPE_HPP
#define VETO_OPE_HPP

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "veto/decision.hpp"
#include "veto/policy.hpp"
#include "veto/training.hpp"

namespace veto {

enum class Estimator : std::uint8_t { OnPolicy, SelfNormalizedIW, DirectMethod };

// The four columns of the evaluation grid.
enum class Setting : std::uint8_t { PicksZeroOne, PicksMoR, BansZeroOne, BansMoR };
inline constexpr std::array<Setting, 4> kSettings = {Setting::PicksZeroOne, Setting::PicksMoR,
                                                      Setting::BansZeroOne, Setting::BansMoR};

std::string_view to_string(Estimator e);
std::string_view to_string(Setting s);
ActionKind setting_kind(Setting s);
RewardKind setting_reward(Setting s);

struct ValueEstimate {
  Estimator method = Estimator::OnPolicy;
  double value = 0.0;
  double effective_sample_size = 0.0;  // SN-IW only
  long n = 0;
};

ValueEstimate on_policy_value(std::span<const DecisionRecord> decisions);

struct SnIwOptions {
  std::optional<double> weight_cap;  // diagnostics only; off by default
};

// sum(w r) / sum(w), w = pi(a|x) / mu(a|x) with the target masked to the
// record's available maps.
ValueEstimate sn_iw_value(const DecisionPolicy& policy, std::span<const DecisionRecord> decisions,
                          const SnIwOptions& options = {});

class RewardPredictor {
public:
  virtual ~RewardPredictor() = default;
  virtual double predict(const ContextVector& context, MapId action) const = 0;
};

// One importance-weighted ridge regression per arm on the 23 context features
// with an unpenalized intercept.
class RidgeRewardModel final : public RewardPredictor {
public:
  struct ArmModel {
    double intercept = 0.0;
    std::array<double, kContextDim> weights{};
    bool fitted = false;  // false: predicts the global mean reward
    long records = 0;
  };

  double predict(const ContextVector& context, MapId action) const override;

  double lambda = 1.0;
  double global_mean = 0.0;
  std::array<ArmModel, kMapCount> arms{};
  std::vector<std::string> warnings;
};

RidgeRewardModel fit_reward_model(std::span<const DecisionRecord> decisions,
                                  const DecisionPolicy& target, double lambda = 1.0);

// (1/N) sum_i sum_a pi(a|x_i) rhat_a(x_i), pi masked to availability.
ValueEstimate dm_value(const DecisionPolicy& policy, std::span<const DecisionRecord> decisions,
                       const RewardPredictor& reward_model);

struct OpeConfig {
  double lambda = 1.0;
  SnIwOptions sn_iw;
};

struct GridCell {
  ValueEstimate sn_iw;
  ValueEstimate dm;
};

struct GridRow {
  std::string label;
  std::array<GridCell, 4> cells{};  // indexed like kSettings
};

struct EvaluationGrid {
  std::vector<GridRow> rows;

  std::string to_csv() const;
  std::string to_text() const;  // one "snIW/DM" cell per setting
};

// A bandit trained once per pick reward kind.
struct ModelEntry {
  std::string label;
  const TrainedPolicy* zero_one = nullptr;
  const TrainedPolicy* mor = nullptr;
};

// Test decisions labelled under each pick reward kind, with behavior
// propensities estimated from the training split.
struct EvaluationData {
  std::span<const DecisionRecord> zero_one;
  std::span<const DecisionRecord> mor;
};

// Rows: uniform, logging (on-policy mean in both slots), then each model.
// Reward models for DM are fitted on the evaluated records, per target.
EvaluationGrid evaluation_grid(const std::vector<ModelEntry>& models, const EvaluationData& test,
                               const OpeConfig& config = {});

}  // namespace veto

#endif  // VETO_OPE_HPP
