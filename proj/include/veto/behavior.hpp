#ifndef VETO_BEHAVIOR_HPP
#define VETO_BEHAVIOR_HPP

#include <span>
#include <string>
#include <vector>

#include "veto/decision.hpp"
#include "veto/policy.hpp"

namespace veto {

struct BehaviorFitConfig {
  int max_iterations = 50;
  double ridge = 1e-3;          // L2 penalty; removes the softmax shift degeneracy
  double tolerance = 1e-9;      // on the mean absolute gradient entry
  double propensity_floor = 0.01;
};

// Behavior-cloned logging policy: masked softmax with the pick and ban
// decisions fitted separately by maximum likelihood.
class BehaviorModel final : public DecisionPolicy {
public:
  PolicyParameters pick = PolicyParameters::zeros(PolicyVariant::SplitPick);
  PolicyParameters ban = PolicyParameters::zeros(PolicyVariant::SplitBan);
  bool converged = true;
  int iterations = 0;
  std::vector<std::string> warnings;

  ActionDistribution distribution(const DecisionRecord& situation) const override;
  std::string name() const override { return "behavior-clone"; }
};

// Newton ascent on the penalized log-likelihood. Throws validation_error on
// empty input; on non-convergence keeps the best iterate and adds a warning.
BehaviorModel fit_behavior_policy(std::span<const DecisionRecord> decisions,
                                  const BehaviorFitConfig& config = {});

// Fits one masked softmax on `decisions` (all of one kind).
PolicyParameters fit_softmax_mle(std::span<const DecisionRecord> decisions, PolicyVariant variant,
                                 const BehaviorFitConfig& config, bool* converged = nullptr,
                                 int* iterations = nullptr);

// Writes the model's probability of each logged action, clamped to
// [floor, 1], into behavior_propensity.
void attach_propensities(const DecisionPolicy& behavior, std::span<DecisionRecord> records,
                         double floor = 0.01);

}  // namespace veto

#endif  // VETO_BEHAVIOR_HPP
