#include "veto/veto_state.hpp"

#include "veto/errors.hpp"

namespace veto {

int ban_ordinal(int step) {
  switch (step) {
    case 0: return 1;
    case 1: return 2;
    case 4: return 3;
    case 5: return 4;
    default: return 0;
  }
}

bool is_legal_slot(int step, Side side, ActionKind kind) {
  if (step < 0 || step >= kVetoSteps) return false;
  const auto& slot = kVetoSchedule[static_cast<std::size_t>(step)];
  return slot.side == side && slot.kind == kind;
}

const std::string& VetoState::team_on_turn() const {
  if (complete()) throw turn_order_error("veto complete: only the decider remains", step());
  return kVetoSchedule[static_cast<std::size_t>(step())].side == Side::A ? team_a_ : team_b_;
}

ActionKind VetoState::kind_on_turn() const {
  if (complete()) throw turn_order_error("veto complete: only the decider remains", step());
  return kVetoSchedule[static_cast<std::size_t>(step())].kind;
}

const std::string& VetoState::opponent_of(const std::string& team) const {
  if (team == team_a_) return team_b_;
  if (team == team_b_) return team_a_;
  throw validation_error("team '" + team + "' is not part of this veto");
}

VetoState new_veto(std::string team_a, std::string team_b) {
  if (team_a.empty() || team_b.empty()) throw validation_error("team ids must be non-empty");
  if (team_a == team_b) throw validation_error("team ids must be distinct: '" + team_a + "'");
  VetoState s;
  s.team_a_ = std::move(team_a);
  s.team_b_ = std::move(team_b);
  return s;
}

VetoState apply_decision(const VetoState& state, const std::string& team, ActionKind kind,
                         MapId map) {
  const int step = state.step();
  if (state.complete()) {
    throw turn_order_error("step 6: veto complete, the decider is not a team decision", step);
  }
  const TurnSlot slot = kVetoSchedule[static_cast<std::size_t>(step)];
  const std::string& expected_team = slot.side == Side::A ? state.team_a_ : state.team_b_;
  if (team != expected_team || kind != slot.kind) {
    throw turn_order_error("step " + std::to_string(step) + ": expected " +
                               std::string(to_string(slot.kind)) + " by '" + expected_team +
                               "', got " + std::string(to_string(kind)) + " by '" + team + "'",
                           step);
  }
  if (!state.available_.contains(map)) {
    throw unavailable_map_error(
        "step " + std::to_string(step) + ": map '" + std::string(map.name()) + "' is not available",
        step);
  }
  VetoState next = state;
  next.available_ = state.available_.without(map);
  next.decisions_.push_back({team, kind, map});
  return next;
}

MapId decider(const VetoState& state) {
  if (!state.complete()) {
    throw incomplete_veto_error(
        "veto incomplete at step " + std::to_string(state.step()) + ": no decider yet", state.step());
  }
  for (int i = 0; i < kMapCount; ++i) {
    if (state.available().contains(MapId(i))) return MapId(i);
  }
  throw validation_error("corrupt veto state: no map left");
}

}  // namespace veto
