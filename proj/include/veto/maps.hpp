#ifndef VETO_MAPS_HPP
#define VETO_MAPS_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace veto {

inline constexpr int kMapCount = 7;

inline constexpr std::array<std::string_view, kMapCount> kMapNames = {
    "dust2", "inferno", "mirage", "nuke", "overpass", "train", "vertigo"};

// One arm of the bandit: a map of the seven-map pool.
class MapId {
public:
  constexpr MapId() = default;
  explicit MapId(int index);

  static std::optional<MapId> from_name(std::string_view name);
  static MapId parse(std::string_view name);  // throws validation_error

  constexpr int index() const noexcept { return index_; }
  std::string_view name() const noexcept { return kMapNames[static_cast<std::size_t>(index_)]; }

  friend constexpr bool operator==(MapId, MapId) = default;
  friend constexpr auto operator<=>(MapId, MapId) = default;

private:
  int index_ = 0;
};

enum class ActionKind : std::uint8_t { Pick, Ban };

std::string_view to_string(ActionKind kind);
ActionKind parse_action_kind(std::string_view text);  // "pick" or "ban"

// Set of maps still in the pool.
class MapSet {
public:
  constexpr MapSet() = default;
  static constexpr MapSet all() { return MapSet(0x7f); }
  static constexpr MapSet from_bits(std::uint8_t bits) { return MapSet(bits & 0x7f); }

  constexpr bool contains(MapId m) const { return (bits_ >> m.index()) & 1u; }
  constexpr MapSet with(MapId m) const { return MapSet(bits_ | (1u << m.index())); }
  constexpr MapSet without(MapId m) const { return MapSet(bits_ & ~(1u << m.index())); }
  constexpr int size() const { return __builtin_popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint8_t bits() const { return bits_; }

  friend constexpr bool operator==(MapSet, MapSet) = default;

private:
  constexpr explicit MapSet(unsigned bits) : bits_(static_cast<std::uint8_t>(bits)) {}
  std::uint8_t bits_ = 0;
};

}  // namespace veto

#endif  // VETO_MAPS_HPP
