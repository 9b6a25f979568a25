#ifndef VETO_MODEL_IO_HPP
#define VETO_MODEL_IO_HPP

#include <cstdint>
#include <string>
#include <string_view>

#include "veto/training.hpp"

namespace veto {

inline constexpr int kModelFormatVersion = 1;

// 64-bit FNV-1a, printed as 16 hex digits.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

// Canonical JSON text of a training configuration; its hash identifies the
// configuration inside model files.
std::string config_json(const TrainingConfig& config);
std::string config_hash(const TrainingConfig& config);

// Versioned JSON container: variant, reward kind, feature layout, every
// parameter block with its dimension, the config and its hash. `provenance`
// (a JSON object text, may be empty) is embedded verbatim.
std::string serialize_policy(const TrainedPolicy& policy, std::string_view provenance = {});
TrainedPolicy deserialize_policy(std::string_view text);

void save_policy(const std::string& path, const TrainedPolicy& policy,
                 std::string_view provenance = {});
TrainedPolicy load_policy(const std::string& path);

}  // namespace veto

#endif  // VETO_MODEL_IO_HPP
