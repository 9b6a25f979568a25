#include "veto/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "veto/errors.hpp"

namespace veto {

std::string_view to_string(PolicyVariant v) {
  switch (v) {
    case PolicyVariant::SplitPick: return "split-pick";
    case PolicyVariant::SplitBan: return "split-ban";
    case PolicyVariant::Combo: return "combo";
    case PolicyVariant::Episodic: return "episodic";
  }
  return "?";
}

PolicyVariant parse_policy_variant(std::string_view text) {
  if (text == "split-pick") return PolicyVariant::SplitPick;
  if (text == "split-ban") return PolicyVariant::SplitBan;
  if (text == "combo") return PolicyVariant::Combo;
  if (text == "episodic") return PolicyVariant::Episodic;
  throw validation_error("unknown policy variant '" + std::string(text) + "'");
}

int block_count(PolicyVariant v) {
  return v == PolicyVariant::Episodic ? 2 * kMapCount : kMapCount;
}

PolicyParameters PolicyParameters::zeros(PolicyVariant v) {
  return PolicyParameters{v, std::vector<double>(static_cast<std::size_t>(block_count(v) * kContextDim), 0.0)};
}

void PolicyParameters::validate() const {
  const auto expected = static_cast<std::size_t>(blocks() * kContextDim);
  if (theta.size() != expected) {
    throw validation_error("policy parameters for " + std::string(to_string(variant)) + " need " +
                           std::to_string(expected) + " weights, got " +
                           std::to_string(theta.size()));
  }
  for (double w : theta) {
    if (!std::isfinite(w)) throw validation_error("policy parameters contain a non-finite weight");
  }
}

double ActionDistribution::total() const {
  double s = 0.0;
  for (double p : probs) s += p;
  return s;
}

namespace {

void check_offset(const PolicyParameters& params, int block_offset) {
  if (block_offset < 0 || block_offset + kMapCount > params.blocks()) {
    throw validation_error("block offset " + std::to_string(block_offset) + " out of range for " +
                           std::string(to_string(params.variant)) + " parameters");
  }
  if (params.theta.size() != static_cast<std::size_t>(params.blocks() * kContextDim)) {
    throw validation_error("policy parameter vector has the wrong dimension");
  }
}

MapSet arm_set(const ContextVector& context, bool masked) {
  if (!masked) return MapSet::all();
  const MapSet s = context.available();
  if (s.empty()) throw validation_error("masked policy: no map is available");
  return s;
}

}  // namespace

std::array<double, kMapCount> arm_scores(const PolicyParameters& params,
                                         const ContextVector& context, int block_offset) {
  check_offset(params, block_offset);
  std::array<double, kMapCount> scores{};
  for (int a = 0; a < kMapCount; ++a) {
    const double* w = params.theta.data() + (block_offset + a) * kContextDim;
    double s = 0.0;
    for (int j = 0; j < kContextDim; ++j) s += w[j] * context.values[static_cast<std::size_t>(j)];
    scores[static_cast<std::size_t>(a)] = s;
  }
  return scores;
}

ActionDistribution softmax(const std::array<double, kMapCount>& scores, MapSet support, bool masked) {
  if (support.empty()) throw validation_error("softmax over an empty arm set");
  double top = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < kMapCount; ++a) {
    if (support.contains(MapId(a))) top = std::max(top, scores[static_cast<std::size_t>(a)]);
  }
  ActionDistribution d;
  d.support = support;
  d.masked = masked;
  double z = 0.0;
  for (int a = 0; a < kMapCount; ++a) {
    const auto i = static_cast<std::size_t>(a);
    if (support.contains(MapId(a))) {
      d.probs[i] = std::exp(scores[i] - top);
      z += d.probs[i];
    }
  }
  for (double& p : d.probs) p /= z;
  return d;
}

ActionDistribution action_probabilities(const PolicyParameters& params, const ContextVector& context,
                                        bool masked, int block_offset) {
  return softmax(arm_scores(params, context, block_offset), arm_set(context, masked), masked);
}

void accumulate_log_gradient(const PolicyParameters& params, const ContextVector& context,
                             MapId action, bool masked, int block_offset, double scale,
                             std::span<double> out) {
  const ActionDistribution pi = action_probabilities(params, context, masked, block_offset);
  if (!pi.support.contains(action)) {
    throw validation_error("gradient requested for unavailable map " + std::string(action.name()));
  }
  if (out.size() != params.theta.size()) throw validation_error("gradient buffer has wrong size");
  for (int i = 0; i < kMapCount; ++i) {
    const double coef = ((i == action.index()) ? 1.0 : 0.0) - pi.probs[static_cast<std::size_t>(i)];
    if (coef == 0.0) continue;
    double* g = out.data() + (block_offset + i) * kContextDim;
    for (int j = 0; j < kContextDim; ++j) g[j] += scale * coef * context.values[static_cast<std::size_t>(j)];
  }
}

std::vector<double> log_policy_gradient(const PolicyParameters& params, const ContextVector& context,
                                        MapId action, bool masked, int block_offset) {
  std::vector<double> g(params.theta.size(), 0.0);
  accumulate_log_gradient(params, context, action, masked, block_offset, 1.0, g);
  return g;
}

ActionDistribution derived_ban_probabilities(const ActionDistribution& pick_dist, MapSet available) {
  if (available.size() < 2) {
    throw validation_error("derived ban policy needs at least two available maps");
  }
  ActionDistribution d;
  d.support = available;
  d.masked = pick_dist.masked;
  double denom = 0.0;
  for (int a = 0; a < kMapCount; ++a) {
    if (available.contains(MapId(a))) denom += 1.0 - pick_dist.probs[static_cast<std::size_t>(a)];
  }
  if (!(denom > 0.0)) throw validation_error("derived ban policy: zero normalizer");
  for (int a = 0; a < kMapCount; ++a) {
    const auto i = static_cast<std::size_t>(a);
    d.probs[i] = available.contains(MapId(a)) ? (1.0 - pick_dist.probs[i]) / denom : 0.0;
  }
  return d;
}

ActionDistribution derived_ban_distribution(const PolicyParameters& params,
                                            const ContextVector& context, bool masked,
                                            int block_offset) {
  const ActionDistribution pick = action_probabilities(params, context, masked, block_offset);
  return derived_ban_probabilities(pick, pick.support);
}

void accumulate_derived_ban_gradient(const PolicyParameters& params, const ContextVector& context,
                                     MapId action, bool masked, int block_offset, double scale,
                                     std::span<double> out) {
  const ActionDistribution pick = action_probabilities(params, context, masked, block_offset);
  if (pick.support.size() < 2) {
    throw validation_error("derived ban policy needs at least two available maps");
  }
  // 1 - pi_P(a) summed from the other arms keeps precision when pi_P(a) -> 1.
  double rest = 0.0;
  for (int b = 0; b < kMapCount; ++b) {
    if (b != action.index()) rest += pick.probs[static_cast<std::size_t>(b)];
  }
  const double factor = -pick[action] / rest;
  accumulate_log_gradient(params, context, action, masked, block_offset, scale * factor, out);
}

std::vector<double> derived_ban_log_gradient(const PolicyParameters& params,
                                             const ContextVector& context, MapId action,
                                             bool masked, int block_offset) {
  std::vector<double> g(params.theta.size(), 0.0);
  accumulate_derived_ban_gradient(params, context, action, masked, block_offset, 1.0, g);
  return g;
}

MapId sample_action(const ActionDistribution& dist, Rng& rng) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  int last = -1;
  for (int a = 0; a < kMapCount; ++a) {
    const double p = dist.probs[static_cast<std::size_t>(a)];
    if (p <= 0.0) continue;
    cumulative += p;
    last = a;
    if (u < cumulative) return MapId(a);
  }
  if (last < 0) throw validation_error("cannot sample from an all-zero distribution");
  return MapId(last);  // rounding slack at the top of the CDF
}

ActionDistribution UniformPolicy::distribution(const DecisionRecord& situation) const {
  return softmax(std::array<double, kMapCount>{}, situation.available(), true);
}

}  // namespace veto
