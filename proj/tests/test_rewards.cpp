#include "doctest.h"

#include <cmath>

#include "fixtures.hpp"
#include "veto/errors.hpp"
#include "veto/rewards.hpp"
#include "veto/rng.hpp"

using namespace veto;

TEST_CASE("reward formulas at frozen values") {
  CHECK(std::abs(pick_reward_mor(16, 14) - 2.0 / 30.0) < 1e-12);
  CHECK(pick_reward_mor(14, 16) == -pick_reward_mor(16, 14));
  CHECK(pick_reward_mor(16, 0) == 1.0);
  CHECK(ban_reward(true, 1) == 0.5);
  CHECK(ban_reward(false, 2) == -0.25);
  CHECK(ban_reward(true, 4) == 0.0625);
  CHECK(ban_reward(false, 3) == -0.125);
  CHECK_THROWS_AS(ban_reward(true, 0), validation_error);
  CHECK_THROWS_AS(ban_reward(true, 5), validation_error);
  CHECK_THROWS_AS(pick_reward_mor(0, 0), validation_error);
}

TEST_CASE("margin of rounds is antisymmetric and bounded") {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const int loser = static_cast<int>(rng.below(15));
    const int winner = 16 + static_cast<int>(rng.below(4)) * (loser == 14 ? 1 : 0);
    const double r = pick_reward_mor(winner, loser);
    CHECK(r > 0.0);
    CHECK(r <= 1.0);
    CHECK(pick_reward_mor(loser, winner) == -r);
  }
}

TEST_CASE("reward kinds parse") {
  CHECK(parse_reward_kind("zero-one") == RewardKind::ZeroOne);
  CHECK(parse_reward_kind("mor") == RewardKind::MarginOfRounds);
  CHECK_THROWS_AS(parse_reward_kind("elo"), validation_error);
}

TEST_CASE("assign_rewards labels all six decisions") {
  // a wins 2-1: a took mirage, lost nuke, won the decider.
  const MatchRecord m = fixtures::make_match("x", "2020-01-01", "a", "b", fixtures::kDefaultVeto,
                                             {{16, 10}, {12, 16}, {16, 14}});
  for (RewardKind kind : {RewardKind::ZeroOne, RewardKind::MarginOfRounds}) {
    const auto rs = assign_rewards(m, kind);
    REQUIRE(rs.size() == 6);
    CHECK(rs[0].team == "a");
    CHECK(rs[0].opponent == "b");
    CHECK(*rs[0].ban_index == 1);
    CHECK(*rs[0].reward == 0.5);
    CHECK(*rs[1].ban_index == 2);
    CHECK(*rs[1].reward == -0.25);
    CHECK(*rs[4].ban_index == 3);
    CHECK(*rs[4].reward == 0.125);
    CHECK(*rs[5].ban_index == 4);
    CHECK(*rs[5].reward == -0.0625);
    CHECK_FALSE(rs[2].ban_index.has_value());
    CHECK(rs[2].kind == ActionKind::Pick);
    CHECK(rs[2].action == MapId(2));
    if (kind == RewardKind::ZeroOne) {
      CHECK(*rs[2].reward == 1.0);
      CHECK(*rs[3].reward == 1.0);  // b won its own pick
    } else {
      CHECK(*rs[2].reward == doctest::Approx(6.0 / 26.0));
      CHECK(*rs[3].reward == doctest::Approx(4.0 / 28.0));
    }
    for (const auto& r : rs) CHECK_NOTHROW(validate_decision(r, kind));
  }
}

TEST_CASE("ban rewards of a match are zero-sum between the teams") {
  const MatchRecord m = fixtures::make_match("x", "2020-01-01", "a", "b", {6, 5, 4, 3, 2, 1},
                                             {{3, 16}, {10, 16}});
  const auto rs = assign_rewards(m, RewardKind::ZeroOne);
  double a_total = 0.0;
  for (const auto& r : rs) {
    if (r.kind == ActionKind::Ban && r.team == "a") a_total += *r.reward;
  }
  CHECK(a_total == -(0.5 + 0.125));
  CHECK(*rs[2].reward == 0.0);
}

TEST_CASE("validate_decision rejects out-of-range records") {
  DecisionRecord r;
  r.kind = ActionKind::Ban;
  CHECK_THROWS_AS(validate_decision(r, RewardKind::ZeroOne), validation_error);
  r.ban_index = 5;
  CHECK_THROWS_AS(validate_decision(r, RewardKind::ZeroOne), validation_error);
  r.ban_index = 2;
  r.reward = 0.6;
  CHECK_THROWS_AS(validate_decision(r, RewardKind::ZeroOne), validation_error);
  r.reward = -0.25;
  CHECK_NOTHROW(validate_decision(r, RewardKind::ZeroOne));
  DecisionRecord p;
  p.kind = ActionKind::Pick;
  p.reward = -0.5;
  CHECK_THROWS_AS(validate_decision(p, RewardKind::ZeroOne), validation_error);
  CHECK_NOTHROW(validate_decision(p, RewardKind::MarginOfRounds));
  p.behavior_propensity = 0.0;
  CHECK_THROWS_AS(validate_decision(p, RewardKind::MarginOfRounds), validation_error);
}
