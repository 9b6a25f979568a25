#include "veto/behavior.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "veto/errors.hpp"

namespace veto {

ActionDistribution BehaviorModel::distribution(const DecisionRecord& situation) const {
  return action_probabilities(situation.kind == ActionKind::Pick ? pick : ban, situation.context,
                              true, 0);
}

namespace {

constexpr int kDim = kMapCount * kContextDim;

double penalized_log_likelihood(std::span<const DecisionRecord> data, const PolicyParameters& params,
                                double ridge) {
  double ll = 0.0;
  for (const auto& r : data) {
    ll += std::log(action_probabilities(params, r.context, true, 0)[r.action]);
  }
  double norm2 = 0.0;
  for (double w : params.theta) norm2 += w * w;
  return ll - 0.5 * ridge * norm2;
}

}  // namespace

PolicyParameters fit_softmax_mle(std::span<const DecisionRecord> data, PolicyVariant variant,
                                 const BehaviorFitConfig& config, bool* converged, int* iterations) {
  if (data.empty()) throw validation_error("behavior fit needs at least one decision");
  if (block_count(variant) != kMapCount) throw validation_error("behavior fit uses a 7-block layout");
  PolicyParameters params = PolicyParameters::zeros(variant);
  double objective = penalized_log_likelihood(data, params, config.ridge);
  const double n = static_cast<double>(data.size());

  Eigen::MatrixXd hessian(kDim, kDim);
  Eigen::VectorXd gradient(kDim);
  Eigen::Matrix<double, kContextDim, kContextDim> outer;
  Eigen::Matrix<double, kContextDim, 1> x;

  bool done = false;
  int it = 0;
  for (; it < config.max_iterations && !done; ++it) {
    hessian.setZero();
    gradient.setZero();
    for (const auto& r : data) {
      const ActionDistribution pi = action_probabilities(params, r.context, true, 0);
      if (!pi.support.contains(r.action)) {
        throw validation_error("logged action " + std::string(r.action.name()) + " in match '" +
                               r.match_id + "' was not available");
      }
      for (int j = 0; j < kContextDim; ++j) x(j) = r.context.values[static_cast<std::size_t>(j)];
      outer.noalias() = x * x.transpose();
      for (int a = 0; a < kMapCount; ++a) {
        const double pa = pi.probs[static_cast<std::size_t>(a)];
        if (pa == 0.0 && a != r.action.index()) continue;
        gradient.segment<kContextDim>(a * kContextDim) +=
            ((a == r.action.index() ? 1.0 : 0.0) - pa) * x;
        for (int b = 0; b <= a; ++b) {
          const double pb = pi.probs[static_cast<std::size_t>(b)];
          if (pb == 0.0) continue;
          const double c = (a == b ? pa : 0.0) - pa * pb;
          hessian.block<kContextDim, kContextDim>(a * kContextDim, b * kContextDim) += c * outer;
        }
      }
    }
    // Negative Hessian of the penalized objective, lower blocks filled above.
    for (int a = 0; a < kMapCount; ++a) {
      for (int b = 0; b < a; ++b) {
        hessian.block<kContextDim, kContextDim>(b * kContextDim, a * kContextDim) =
            hessian.block<kContextDim, kContextDim>(a * kContextDim, b * kContextDim).transpose();
      }
    }
    const Eigen::Map<const Eigen::VectorXd> theta(params.theta.data(), kDim);
    gradient -= config.ridge * theta;
    hessian.diagonal().array() += config.ridge;

    if (gradient.cwiseAbs().mean() / n < config.tolerance) {
      done = true;
      break;
    }
    const Eigen::VectorXd step = hessian.ldlt().solve(gradient);

    // Backtracking keeps the iteration monotone.
    double t = 1.0;
    bool improved = false;
    for (int k = 0; k < 30; ++k, t *= 0.5) {
      PolicyParameters trial = params;
      for (int j = 0; j < kDim; ++j) trial.theta[static_cast<std::size_t>(j)] += t * step(j);
      const double trial_obj = penalized_log_likelihood(data, trial, config.ridge);
      if (std::isfinite(trial_obj) && trial_obj >= objective) {
        const double gain = trial_obj - objective;
        params = std::move(trial);
        objective = trial_obj;
        improved = true;
        if (gain <= 1e-12 * std::max(1.0, std::abs(objective))) done = true;
        break;
      }
    }
    if (!improved) done = true;
  }
  if (converged) *converged = done;
  if (iterations) *iterations = it;
  return params;
}

BehaviorModel fit_behavior_policy(std::span<const DecisionRecord> decisions,
                                  const BehaviorFitConfig& config) {
  if (decisions.empty()) throw validation_error("behavior fit needs at least one decision");
  std::vector<DecisionRecord> picks;
  std::vector<DecisionRecord> bans;
  for (const auto& r : decisions) (r.kind == ActionKind::Pick ? picks : bans).push_back(r);

  BehaviorModel model;
  model.iterations = 0;
  auto fit = [&](const std::vector<DecisionRecord>& data, PolicyVariant v, const char* what) {
    if (data.empty()) {
      model.warnings.push_back(std::string("no ") + what + " decisions; using the uniform policy");
      return PolicyParameters::zeros(v);
    }
    bool ok = false;
    int its = 0;
    PolicyParameters p = fit_softmax_mle(data, v, config, &ok, &its);
    model.iterations = std::max(model.iterations, its);
    if (!ok) {
      model.converged = false;
      model.warnings.push_back(std::string(what) + " fit did not converge after " +
                               std::to_string(its) + " iterations; keeping the best iterate");
    }
    return p;
  };
  model.pick = fit(picks, PolicyVariant::SplitPick, "pick");
  model.ban = fit(bans, PolicyVariant::SplitBan, "ban");
  return model;
}

void attach_propensities(const DecisionPolicy& behavior, std::span<DecisionRecord> records,
                         double floor) {
  if (!(floor > 0.0 && floor <= 1.0)) throw validation_error("propensity floor must be in (0, 1]");
  for (auto& r : records) {
    const double p = behavior.distribution(r)[r.action];
    r.behavior_propensity = std::clamp(p, floor, 1.0);
  }
}

}  // namespace veto
