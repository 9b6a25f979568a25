#include "veto/maps.hpp"

#include "veto/errors.hpp"

namespace veto {

MapId::MapId(int index) : index_(index) {
  if (index < 0 || index >= kMapCount) {
    throw validation_error("map index out of range: " + std::to_string(index));
  }
}

std::optional<MapId> MapId::from_name(std::string_view name) {
  for (int i = 0; i < kMapCount; ++i) {
    if (kMapNames[static_cast<std::size_t>(i)] == name) return MapId(i);
  }
  return std::nullopt;
}

MapId MapId::parse(std::string_view name) {
  if (auto m = from_name(name)) return *m;
  throw validation_error("unsupported map pool: unknown map '" + std::string(name) + "'");
}

std::string_view to_string(ActionKind kind) {
  return kind == ActionKind::Pick ? "pick" : "ban";
}

ActionKind parse_action_kind(std::string_view text) {
  if (text == "pick") return ActionKind::Pick;
  if (text == "ban") return ActionKind::Ban;
  throw validation_error("unknown action '" + std::string(text) + "', expected pick or ban");
}

}  // namespace veto
