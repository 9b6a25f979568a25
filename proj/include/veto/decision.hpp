#ifndef VETO_DECISION_HPP
#define VETO_DECISION_HPP

#include <optional>
#include <string>
#include <vector>

#include "veto/features.hpp"

namespace veto {

enum class RewardKind : std::uint8_t { ZeroOne, MarginOfRounds };

std::string_view to_string(RewardKind kind);
RewardKind parse_reward_kind(std::string_view text);  // "zero-one" or "mor"

// One logged team decision of a veto.
struct DecisionRecord {
  ContextVector context;
  MapId action;
  ActionKind kind = ActionKind::Pick;
  std::optional<int> ban_index;  // 1..4 for bans
  std::optional<double> reward;
  std::optional<double> behavior_propensity;
  std::string team;
  std::string opponent;
  std::string match_id;
  int step = 0;      // veto step 0..5
  long sequence = 0; // chronological ordinal of the match

  MapSet available() const { return context.available(); }
};

// Throws validation_error when ban_index or reward bounds are violated.
void validate_decision(const DecisionRecord& record, RewardKind kind);

std::vector<DecisionRecord> select_kind(const std::vector<DecisionRecord>& records,
                                        ActionKind kind);

}  // namespace veto

#endif  // VETO_DECISION_HPP
