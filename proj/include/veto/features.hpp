#ifndef VETO_FEATURES_HPP
#define VETO_FEATURES_HPP

#include <array>
#include <string>
#include <vector>

#include "veto/maps.hpp"
#include "veto/match.hpp"

namespace veto {

inline constexpr int kContextDim = 23;

// Context layout.
inline constexpr int kAvailabilityOffset = 0;
inline constexpr int kDeciderMatchRate = 7;
inline constexpr int kDeciderMapRates = 8;
inline constexpr int kOpponentMatchRate = 15;
inline constexpr int kOpponentMapRates = 16;

// Running history of a team. Map counts are games played on the map, match
// counts are whole matches.
struct TeamRecord {
  int match_wins = 0;
  int match_count = 0;
  std::array<int, kMapCount> map_wins{};
  std::array<int, kMapCount> map_count{};

  friend bool operator==(const TeamRecord&, const TeamRecord&) = default;
};

struct ContextVector {
  std::array<double, kContextDim> values{};

  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }

  // Availability flags read back as a set.
  MapSet available() const;

  friend bool operator==(const ContextVector&, const ContextVector&) = default;
};

// Laplace-smoothed rate (wins + 5) / (matches + 10).
double smoothed_win_rate(int wins, int matches);

TeamRecord update_team_stats(const TeamRecord& record, const MatchRecord& match,
                             const std::string& team);

ContextVector build_context(const TeamRecord& decider, const TeamRecord& opponent,
                            MapSet available);

// Block one-hot action-feature map: a zero vector of blocks * 23 entries with
// the context copied into block (block_offset + action).
std::vector<double> feature_map(const ContextVector& context, MapId action, int blocks,
                                int block_offset);

}  // namespace veto

#endif  // VETO_FEATURES_HPP
