#include "doctest.h"

#include <set>

#include "veto/errors.hpp"
#include "veto/maps.hpp"
#include "veto/rng.hpp"
#include "veto/veto_state.hpp"

using namespace veto;

TEST_CASE("map ids parse, name and reject unknown maps") {
  for (int i = 0; i < kMapCount; ++i) {
    const MapId m(i);
    CHECK(MapId::parse(m.name()) == m);
  }
  CHECK_FALSE(MapId::from_name("cache").has_value());
  CHECK_THROWS_AS(MapId::parse("cache"), validation_error);
  CHECK_THROWS_AS(MapId(7), validation_error);
  CHECK_THROWS_AS(MapId(-1), validation_error);
  CHECK(parse_action_kind("pick") == ActionKind::Pick);
  CHECK(parse_action_kind("ban") == ActionKind::Ban);
  CHECK_THROWS_AS(parse_action_kind("skip"), validation_error);
}

TEST_CASE("map set operations") {
  MapSet s = MapSet::all();
  CHECK(s.size() == 7);
  s = s.without(MapId(3));
  CHECK_FALSE(s.contains(MapId(3)));
  CHECK(s.size() == 6);
  CHECK(s.with(MapId(3)) == MapSet::all());
  CHECK(MapSet{}.empty());
}

namespace {

// The best-of-three schedule written out independently of the implementation.
struct Expected {
  bool team_a;
  ActionKind kind;
};
constexpr Expected kTable[6] = {{true, ActionKind::Ban},  {false, ActionKind::Ban},
                                {true, ActionKind::Pick}, {false, ActionKind::Pick},
                                {true, ActionKind::Ban},  {false, ActionKind::Ban}};

}  // namespace

TEST_CASE("legality table covers every (step, side, kind)") {
  for (int step = 0; step < kVetoSteps; ++step) {
    for (Side side : {Side::A, Side::B}) {
      for (ActionKind kind : {ActionKind::Pick, ActionKind::Ban}) {
        const bool expected = kTable[step].team_a == (side == Side::A) && kTable[step].kind == kind;
        CHECK_MESSAGE(is_legal_slot(step, side, kind) == expected, "step " << step);
      }
    }
  }
  CHECK_FALSE(is_legal_slot(6, Side::A, ActionKind::Ban));
  CHECK_FALSE(is_legal_slot(-1, Side::A, ActionKind::Ban));
}

TEST_CASE("ban ordinals count bans globally") {
  CHECK(ban_ordinal(0) == 1);
  CHECK(ban_ordinal(1) == 2);
  CHECK(ban_ordinal(2) == 0);
  CHECK(ban_ordinal(3) == 0);
  CHECK(ban_ordinal(4) == 3);
  CHECK(ban_ordinal(5) == 4);
}

TEST_CASE("apply_decision enforces the schedule at every step") {
  VetoState s = new_veto("alpha", "bravo");
  CHECK(s.team_on_turn() == "alpha");
  CHECK(s.kind_on_turn() == ActionKind::Ban);
  const int order[6] = {3, 0, 2, 5, 1, 6};
  for (int step = 0; step < kVetoSteps; ++step) {
    const std::string& on_turn = s.team_on_turn();
    const std::string& other = s.opponent_of(on_turn);
    const ActionKind kind = s.kind_on_turn();
    const ActionKind wrong = kind == ActionKind::Ban ? ActionKind::Pick : ActionKind::Ban;
    CHECK_THROWS_AS(apply_decision(s, other, kind, MapId(order[step])), turn_order_error);
    CHECK_THROWS_AS(apply_decision(s, on_turn, wrong, MapId(order[step])), turn_order_error);
    if (step > 0) {
      CHECK_THROWS_AS(apply_decision(s, on_turn, kind, MapId(order[step - 1])), unavailable_map_error);
    }
    try {
      apply_decision(s, other, kind, MapId(order[step]));
    } catch (const veto_error& e) {
      CHECK(e.step() == step);
    }
    const VetoState before = s;
    s = apply_decision(s, on_turn, kind, MapId(order[step]));
    CHECK(before.step() == step);  // the old state is untouched
    CHECK(s.available().size() == 6 - step);
  }
  CHECK(s.complete());
  CHECK(decider(s) == MapId(4));
  CHECK_THROWS_AS(s.team_on_turn(), turn_order_error);
  CHECK_THROWS_AS(apply_decision(s, "alpha", ActionKind::Ban, MapId(4)), turn_order_error);
}

TEST_CASE("decider is unavailable before completion") {
  const VetoState s = new_veto("alpha", "bravo");
  CHECK_THROWS_AS(decider(s), incomplete_veto_error);
}

TEST_CASE("new_veto rejects degenerate teams") {
  CHECK_THROWS_AS(new_veto("same", "same"), validation_error);
  CHECK_THROWS_AS(new_veto("", "x"), validation_error);
}

TEST_CASE("random legal vetoes keep their invariants") {
  Rng rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    VetoState s = new_veto("alpha", "bravo");
    std::set<int> used;
    while (!s.complete()) {
      std::vector<int> open;
      for (int m = 0; m < kMapCount; ++m) {
        if (s.available().contains(MapId(m))) open.push_back(m);
      }
      REQUIRE(static_cast<int>(open.size()) == kMapCount - s.step());
      const int pick = open[rng.below(open.size())];
      const int step = s.step();
      s = apply_decision(s, s.team_on_turn(), s.kind_on_turn(), MapId(pick));
      CHECK(s.decisions()[static_cast<std::size_t>(step)].map == MapId(pick));
      CHECK(used.insert(pick).second);
    }
    REQUIRE(s.available().size() == 1);
    CHECK_FALSE(used.count(decider(s).index()));
    CHECK(s.available().contains(decider(s)));
  }
}
