#include "doctest.h"

#include "fixtures.hpp"
#include "veto/errors.hpp"
#include "veto/features.hpp"

using namespace veto;

TEST_CASE("smoothed win rate") {
  CHECK(smoothed_win_rate(20, 30) == doctest::Approx(0.625).epsilon(1e-12));
  CHECK(smoothed_win_rate(0, 0) == 0.5);
  CHECK(smoothed_win_rate(3, 3) == doctest::Approx(8.0 / 13.0));
  CHECK_THROWS_AS(smoothed_win_rate(4, 3), validation_error);
  CHECK_THROWS_AS(smoothed_win_rate(-1, 3), validation_error);
  // Bounded strictly inside (0, 1) for any history.
  for (int m = 0; m < 200; m += 7) {
    for (int w = 0; w <= m; w += 3) {
      const double r = smoothed_win_rate(w, m);
      CHECK(r > 0.0);
      CHECK(r < 1.0);
    }
  }
}

TEST_CASE("team statistics count matches and map games") {
  const MatchRecord m = fixtures::make_match("x", "2020-01-01", "a", "b", fixtures::kDefaultVeto,
                                             {{16, 10}, {12, 16}, {16, 14}});
  const TeamRecord a = update_team_stats({}, m, "a");
  CHECK(a.match_count == 1);
  CHECK(a.match_wins == 1);
  CHECK(a.map_count[2] == 1);
  CHECK(a.map_wins[2] == 1);
  CHECK(a.map_count[3] == 1);
  CHECK(a.map_wins[3] == 0);
  CHECK(a.map_count[6] == 1);
  CHECK(a.map_count[0] == 0);
  const TeamRecord b = update_team_stats({}, m, "b");
  CHECK(b.match_wins == 0);
  CHECK(b.map_wins[3] == 1);
  CHECK_THROWS_AS(update_team_stats({}, m, "c"), validation_error);
}

TEST_CASE("context layout") {
  TeamRecord d;
  d.match_wins = 20;
  d.match_count = 30;
  d.map_wins[4] = 5;
  d.map_count[4] = 10;
  TeamRecord o;
  o.map_count[1] = 10;
  const MapSet avail = MapSet::all().without(MapId(0)).without(MapId(5));
  const ContextVector x = build_context(d, o, avail);
  CHECK(x[0] == 0.0);
  CHECK(x[1] == 1.0);
  CHECK(x[5] == 0.0);
  CHECK(x[kDeciderMatchRate] == doctest::Approx(0.625));
  CHECK(x[kDeciderMapRates + 4] == doctest::Approx(0.5));
  CHECK(x[kDeciderMapRates + 0] == 0.5);
  CHECK(x[kOpponentMatchRate] == 0.5);
  CHECK(x[kOpponentMapRates + 1] == doctest::Approx(0.25));
  CHECK(x.available() == avail);
  CHECK_THROWS_AS(build_context(d, o, MapSet{}), validation_error);
}

TEST_CASE("block one-hot feature map") {
  ContextVector x;
  for (int i = 0; i < kContextDim; ++i) x[static_cast<std::size_t>(i)] = i + 1.0;
  for (int blocks : {7, 14}) {
    for (int offset : {0, 7}) {
      if (offset == 7 && blocks == 7) {
        CHECK_THROWS_AS(feature_map(x, MapId(0), blocks, offset), validation_error);
        continue;
      }
      for (int a = 0; a < kMapCount; ++a) {
        const auto phi = feature_map(x, MapId(a), blocks, offset);
        REQUIRE(phi.size() == static_cast<std::size_t>(blocks * kContextDim));
        double sum = 0.0;
        for (double v : phi) sum += v;
        CHECK(sum == doctest::Approx(276.0));  // 1 + 2 + ... + 23
        const std::size_t start = static_cast<std::size_t>((offset + a) * kContextDim);
        for (int i = 0; i < kContextDim; ++i) CHECK(phi[start + static_cast<std::size_t>(i)] == i + 1.0);
      }
    }
  }
  CHECK_THROWS_AS(feature_map(x, MapId(0), 8, 0), validation_error);
}
