#include "veto/ope.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "veto/errors.hpp"

namespace veto {

std::string_view to_string(Estimator e) {
  switch (e) {
    case Estimator::OnPolicy: return "on-policy";
    case Estimator::SelfNormalizedIW: return "sn-iw";
    case Estimator::DirectMethod: return "dm";
  }
  return "?";
}

std::string_view to_string(Setting s) {
  switch (s) {
    case Setting::PicksZeroOne: return "Picks (0/1)";
    case Setting::PicksMoR: return "Picks (MoR)";
    case Setting::BansZeroOne: return "Bans (0/1)";
    case Setting::BansMoR: return "Bans (MoR)";
  }
  return "?";
}

ActionKind setting_kind(Setting s) {
  return (s == Setting::PicksZeroOne || s == Setting::PicksMoR) ? ActionKind::Pick : ActionKind::Ban;
}

RewardKind setting_reward(Setting s) {
  return (s == Setting::PicksZeroOne || s == Setting::BansZeroOne) ? RewardKind::ZeroOne
                                                                   : RewardKind::MarginOfRounds;
}

namespace {

double reward_of(const DecisionRecord& r) {
  if (!r.reward) throw validation_error("decision in match '" + r.match_id + "' has no reward");
  return *r.reward;
}

double propensity_of(const DecisionRecord& r) {
  if (!r.behavior_propensity || !(*r.behavior_propensity > 0.0)) {
    throw validation_error("decision in match '" + r.match_id +
                           "' has no positive behavior propensity");
  }
  return *r.behavior_propensity;
}

}  // namespace

ValueEstimate on_policy_value(std::span<const DecisionRecord> decisions) {
  if (decisions.empty()) throw estimation_error("on-policy value of an empty decision set");
  double sum = 0.0;
  for (const auto& r : decisions) sum += reward_of(r);
  ValueEstimate e;
  e.method = Estimator::OnPolicy;
  e.n = static_cast<long>(decisions.size());
  e.value = sum / static_cast<double>(decisions.size());
  e.effective_sample_size = static_cast<double>(decisions.size());
  return e;
}

ValueEstimate sn_iw_value(const DecisionPolicy& policy, std::span<const DecisionRecord> decisions,
                          const SnIwOptions& options) {
  if (decisions.empty()) throw estimation_error("SN-IW value of an empty decision set");
  double sum_w = 0.0;
  double sum_wr = 0.0;
  double sum_w2 = 0.0;
  for (const auto& r : decisions) {
    const double target = policy.distribution(r)[r.action];
    double w = target / propensity_of(r);
    if (options.weight_cap) w = std::min(w, *options.weight_cap);
    sum_w += w;
    sum_wr += w * reward_of(r);
    sum_w2 += w * w;
  }
  if (!(sum_w > 0.0)) {
    throw estimation_error("SN-IW undefined: target policy puts no mass on any logged action");
  }
  ValueEstimate e;
  e.method = Estimator::SelfNormalizedIW;
  e.n = static_cast<long>(decisions.size());
  e.value = sum_wr / sum_w;
  e.effective_sample_size = sum_w * sum_w / sum_w2;
  return e;
}

double RidgeRewardModel::predict(const ContextVector& context, MapId action) const {
  const auto& arm = arms[static_cast<std::size_t>(action.index())];
  if (!arm.fitted) return global_mean;
  double v = arm.intercept;
  for (std::size_t j = 0; j < kContextDim; ++j) v += arm.weights[j] * context.values[j];
  return v;
}

RidgeRewardModel fit_reward_model(std::span<const DecisionRecord> decisions,
                                  const DecisionPolicy& target, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw validation_error("ridge penalty must be a finite non-negative number");
  }
  if (decisions.empty()) throw estimation_error("cannot fit a reward model without decisions");
  RidgeRewardModel model;
  model.lambda = lambda;
  model.global_mean = on_policy_value(decisions).value;

  constexpr int p = kContextDim + 1;  // intercept first
  for (int a = 0; a < kMapCount; ++a) {
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(p, p);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd row(p);
    long count = 0;
    double total_weight = 0.0;
    for (const auto& r : decisions) {
      if (r.action.index() != a) continue;
      const double w = target.distribution(r)[r.action] / propensity_of(r);
      row(0) = 1.0;
      for (int j = 0; j < kContextDim; ++j) row(j + 1) = r.context.values[static_cast<std::size_t>(j)];
      gram.selfadjointView<Eigen::Lower>().rankUpdate(row, w);
      rhs += w * reward_of(r) * row;
      total_weight += w;
      ++count;
    }
    auto& arm = model.arms[static_cast<std::size_t>(a)];
    arm.records = count;
    if (count == 0 || !(total_weight > 0.0)) {
      model.warnings.push_back("arm " + std::string(MapId(a).name()) +
                               " has no weighted records; predicting the global mean reward");
      continue;
    }
    gram.triangularView<Eigen::Upper>() = gram.transpose();
    for (int j = 1; j < p; ++j) gram(j, j) += lambda;
    Eigen::VectorXd beta;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive() && lambda > 0.0) {
      beta = ldlt.solve(rhs);
    } else {
      beta = gram.completeOrthogonalDecomposition().solve(rhs);
    }
    arm.intercept = beta(0);
    for (int j = 0; j < kContextDim; ++j) arm.weights[static_cast<std::size_t>(j)] = beta(j + 1);
    arm.fitted = true;
  }
  return model;
}

ValueEstimate dm_value(const DecisionPolicy& policy, std::span<const DecisionRecord> decisions,
                       const RewardPredictor& reward_model) {
  if (decisions.empty()) throw estimation_error("DM value of an empty decision set");
  double sum = 0.0;
  for (const auto& r : decisions) {
    const ActionDistribution pi = policy.distribution(r);
    for (int a = 0; a < kMapCount; ++a) {
      const double p = pi.probs[static_cast<std::size_t>(a)];
      if (p > 0.0) sum += p * reward_model.predict(r.context, MapId(a));
    }
  }
  ValueEstimate e;
  e.method = Estimator::DirectMethod;
  e.n = static_cast<long>(decisions.size());
  e.value = sum / static_cast<double>(decisions.size());
  return e;
}

namespace {

std::vector<DecisionRecord> records_for(const EvaluationData& test, Setting s) {
  const auto source = setting_reward(s) == RewardKind::ZeroOne ? test.zero_one : test.mor;
  std::vector<DecisionRecord> out;
  for (const auto& r : source) {
    if (r.kind == setting_kind(s)) out.push_back(r);
  }
  if (out.empty()) {
    throw estimation_error("no " + std::string(to_string(setting_kind(s))) +
                           " decisions for setting " + std::string(to_string(s)));
  }
  return out;
}

GridCell estimate_cell(const DecisionPolicy& policy, const std::vector<DecisionRecord>& records,
                       const OpeConfig& config) {
  GridCell cell;
  cell.sn_iw = sn_iw_value(policy, records, config.sn_iw);
  const RidgeRewardModel model = fit_reward_model(records, policy, config.lambda);
  cell.dm = dm_value(policy, records, model);
  return cell;
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  // Avoid "-0.000".
  if (std::string(buf) == "-0.000") return "0.000";
  return buf;
}

std::string full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

EvaluationGrid evaluation_grid(const std::vector<ModelEntry>& models, const EvaluationData& test,
                               const OpeConfig& config) {
  std::array<std::vector<DecisionRecord>, 4> records;
  for (std::size_t c = 0; c < kSettings.size(); ++c) records[c] = records_for(test, kSettings[c]);

  EvaluationGrid grid;
  const UniformPolicy uniform;
  GridRow uniform_row{"Uniform policy", {}};
  GridRow logging_row{"Logging policy", {}};
  for (std::size_t c = 0; c < kSettings.size(); ++c) {
    uniform_row.cells[c] = estimate_cell(uniform, records[c], config);
    const ValueEstimate on = on_policy_value(records[c]);
    logging_row.cells[c] = GridCell{on, on};
  }
  grid.rows.push_back(std::move(uniform_row));
  grid.rows.push_back(std::move(logging_row));

  for (const auto& m : models) {
    if (m.zero_one == nullptr || m.mor == nullptr) {
      throw validation_error("model row '" + m.label + "' needs both reward kinds");
    }
    GridRow row{m.label, {}};
    for (std::size_t c = 0; c < kSettings.size(); ++c) {
      const TrainedPolicy& policy =
          setting_reward(kSettings[c]) == RewardKind::ZeroOne ? *m.zero_one : *m.mor;
      row.cells[c] = estimate_cell(policy, records[c], config);
    }
    grid.rows.push_back(std::move(row));
  }
  return grid;
}

std::string EvaluationGrid::to_csv() const {
  std::ostringstream out;
  out << "policy,setting,sn_iw,dm,ess,n\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < kSettings.size(); ++c) {
      const auto& cell = row.cells[c];
      out << row.label << ',' << to_string(kSettings[c]) << ',' << full(cell.sn_iw.value) << ','
          << full(cell.dm.value) << ',' << full(cell.sn_iw.effective_sample_size) << ','
          << cell.sn_iw.n << '\n';
    }
  }
  return out.str();
}

std::string EvaluationGrid::to_text() const {
  std::size_t label_width = 24;
  for (const auto& row : rows) label_width = std::max(label_width, row.label.size() + 2);
  constexpr int cell_width = 16;
  std::ostringstream out;
  char buf[64];
  out << std::string(label_width, ' ');
  for (Setting s : kSettings) {
    std::snprintf(buf, sizeof buf, "%*s", cell_width, std::string(to_string(s)).c_str());
    out << buf;
  }
  out << '\n';
  for (const auto& row : rows) {
    out << row.label << std::string(label_width - row.label.size(), ' ');
    for (const auto& cell : row.cells) {
      const std::string text = fixed3(cell.sn_iw.value) + "/" + fixed3(cell.dm.value);
      std::snprintf(buf, sizeof buf, "%*s", cell_width, text.c_str());
      out << buf;
    }
    out << '\n';
  }
  out << "cells: SN-IW/DM; logging row: on-policy mean in both slots\n";
  return out.str();
}

}  // namespace veto
