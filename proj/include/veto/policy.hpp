#ifndef VETO_POLICY_HPP
#define VETO_POLICY_HPP

#include <array>
#include <span>
#include <string>
#include <vector>

#include "veto/decision.hpp"
#include "veto/features.hpp"
#include "veto/rng.hpp"

namespace veto {

enum class PolicyVariant : std::uint8_t { SplitPick, SplitBan, Combo, Episodic };

std::string_view to_string(PolicyVariant v);
PolicyVariant parse_policy_variant(std::string_view text);

// Number of 23-wide blocks: one per arm, doubled for the episodic layout
// (pick blocks 0..6, ban blocks 7..13).
int block_count(PolicyVariant v);

struct PolicyParameters {
  PolicyVariant variant = PolicyVariant::Combo;
  std::vector<double> theta;

  static PolicyParameters zeros(PolicyVariant v);

  int blocks() const { return block_count(variant); }
  std::size_t dimension() const { return theta.size(); }
  // Throws validation_error on size mismatch or non-finite entries.
  void validate() const;

  friend bool operator==(const PolicyParameters&, const PolicyParameters&) = default;
};

struct ActionDistribution {
  std::array<double, kMapCount> probs{};
  MapSet support = MapSet::all();  // arm set the softmax ran over
  bool masked = false;

  double operator[](MapId m) const { return probs[static_cast<std::size_t>(m.index())]; }
  double total() const;
};

// Per-arm linear scores theta_{block_offset + a} . x.
std::array<double, kMapCount> arm_scores(const PolicyParameters& params,
                                         const ContextVector& context, int block_offset);

// Max-subtracted softmax over `support`; arms outside it get exactly 0.
ActionDistribution softmax(const std::array<double, kMapCount>& scores, MapSet support, bool masked);

ActionDistribution action_probabilities(const PolicyParameters& params, const ContextVector& context,
                                        bool masked, int block_offset = 0);

// phi(x, a) - sum_i pi(i|x) phi(x, i) over the same arm set as action_probabilities.
std::vector<double> log_policy_gradient(const PolicyParameters& params, const ContextVector& context,
                                        MapId action, bool masked, int block_offset = 0);

// Adds scale * grad log pi(action|x) into `out` (size params.dimension()).
void accumulate_log_gradient(const PolicyParameters& params, const ContextVector& context,
                             MapId action, bool masked, int block_offset, double scale,
                             std::span<double> out);

// Ban distribution derived from a pick distribution:
// (1 - pi_P(a)) / sum over the available set of (1 - pi_P).
ActionDistribution derived_ban_probabilities(const ActionDistribution& pick_dist, MapSet available);

// Ban distribution of a single parameter vector through the derivation above.
ActionDistribution derived_ban_distribution(const PolicyParameters& params,
                                            const ContextVector& context, bool masked,
                                            int block_offset = 0);

// grad log pi_B(a|x) = -pi_P(a) / (1 - pi_P(a)) * grad log pi_P(a|x).
std::vector<double> derived_ban_log_gradient(const PolicyParameters& params,
                                             const ContextVector& context, MapId action,
                                             bool masked, int block_offset = 0);
void accumulate_derived_ban_gradient(const PolicyParameters& params, const ContextVector& context,
                                     MapId action, bool masked, int block_offset, double scale,
                                     std::span<double> out);

// Inverse-CDF draw.
MapId sample_action(const ActionDistribution& dist, Rng& rng);

// Anything that maps a decision situation to a distribution over maps. The
// record's context, kind, ban_index, team and opponent describe the situation;
// its action and reward are ignored.
class DecisionPolicy {
public:
  virtual ~DecisionPolicy() = default;
  virtual ActionDistribution distribution(const DecisionRecord& situation) const = 0;
  virtual std::string name() const = 0;
};

// Uniform over the maps still available.
class UniformPolicy final : public DecisionPolicy {
public:
  ActionDistribution distribution(const DecisionRecord& situation) const override;
  std::string name() const override { return "uniform"; }
};

}  // namespace veto

#endif  // VETO_POLICY_HPP
