#ifndef VETO_VETO_STATE_HPP
#define VETO_VETO_STATE_HPP

#include <array>
#include <string>
#include <vector>

#include "veto/maps.hpp"

namespace veto {

enum class Side : std::uint8_t { A, B };

struct TurnSlot {
  Side side;
  ActionKind kind;
};

inline constexpr int kVetoSteps = 6;

// Best-of-three veto: ban, ban, pick, pick, ban, ban; the seventh map is the
// decider. Team A is the first banner.
inline constexpr std::array<TurnSlot, kVetoSteps> kVetoSchedule = {{
    {Side::A, ActionKind::Ban},
    {Side::B, ActionKind::Ban},
    {Side::A, ActionKind::Pick},
    {Side::B, ActionKind::Pick},
    {Side::A, ActionKind::Ban},
    {Side::B, ActionKind::Ban},
}};

// Global ordinal (1..4) of the ban made at `step`, or 0 if the step is a pick.
int ban_ordinal(int step);

struct VetoDecision {
  std::string team;
  ActionKind kind;
  MapId map;

  friend bool operator==(const VetoDecision&, const VetoDecision&) = default;
};

class VetoState {
public:
  const std::string& team_a() const noexcept { return team_a_; }
  const std::string& team_b() const noexcept { return team_b_; }
  MapSet available() const noexcept { return available_; }
  const std::vector<VetoDecision>& decisions() const noexcept { return decisions_; }
  int step() const noexcept { return static_cast<int>(decisions_.size()); }
  bool complete() const noexcept { return step() == kVetoSteps; }

  // Team and kind expected at the current step. Throw turn_order_error once
  // the veto is complete.
  const std::string& team_on_turn() const;
  ActionKind kind_on_turn() const;
  const std::string& opponent_of(const std::string& team) const;

  friend bool operator==(const VetoState&, const VetoState&) = default;

private:
  friend VetoState new_veto(std::string team_a, std::string team_b);
  friend VetoState apply_decision(const VetoState& state, const std::string& team,
                                  ActionKind kind, MapId map);

  std::string team_a_;
  std::string team_b_;
  MapSet available_ = MapSet::all();
  std::vector<VetoDecision> decisions_;
};

VetoState new_veto(std::string team_a, std::string team_b);
VetoState apply_decision(const VetoState& state, const std::string& team, ActionKind kind,
                         MapId map);
MapId decider(const VetoState& state);

// Whether (team side, kind) is the legal slot at `step`.
bool is_legal_slot(int step, Side side, ActionKind kind);

}  // namespace veto

#endif  // VETO_VETO_STATE_HPP
