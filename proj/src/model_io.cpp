#include "veto/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "veto/errors.hpp"

namespace veto {

using nlohmann::json;

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

namespace {

json config_to_json(const TrainingConfig& c) {
  return json{{"learning_rate", c.learning_rate},
              {"epochs", c.epochs},
              {"reward_kind", std::string(to_string(c.reward_kind))},
              {"variant", std::string(to_string(c.variant))},
              {"seed", c.seed},
              {"checkpoint_every", c.checkpoint_every},
              {"checkpoint_unit", std::string(to_string(c.checkpoint_unit))},
              {"mask", c.mask}};
}

TrainingConfig config_from_json(const json& j) {
  TrainingConfig c;
  c.learning_rate = j.at("learning_rate").get<double>();
  c.epochs = j.at("epochs").get<int>();
  c.reward_kind = parse_reward_kind(j.at("reward_kind").get<std::string>());
  c.variant = parse_bandit_variant(j.at("variant").get<std::string>());
  c.seed = j.at("seed").get<std::uint64_t>();
  c.checkpoint_every = j.at("checkpoint_every").get<int>();
  c.checkpoint_unit = parse_checkpoint_unit(j.at("checkpoint_unit").get<std::string>());
  c.mask = j.at("mask").get<bool>();
  return c;
}

json params_to_json(const PolicyParameters& p) {
  return json{{"tag", std::string(to_string(p.variant))},
              {"blocks", p.blocks()},
              {"dimension", p.dimension()},
              {"theta", p.theta}};
}

PolicyParameters params_from_json(const json& j) {
  PolicyParameters p;
  p.variant = parse_policy_variant(j.at("tag").get<std::string>());
  p.theta = j.at("theta").get<std::vector<double>>();
  if (j.at("dimension").get<std::size_t>() != p.theta.size()) {
    throw validation_error("model file: declared dimension does not match theta length");
  }
  p.validate();
  return p;
}

}  // namespace

std::string config_json(const TrainingConfig& config) { return config_to_json(config).dump(); }

std::string config_hash(const TrainingConfig& config) { return hex64(fnv1a64(config_json(config))); }

std::string serialize_policy(const TrainedPolicy& policy, std::string_view provenance) {
  json j;
  j["format"] = "veto-bandit-model";
  j["version"] = kModelFormatVersion;
  j["variant"] = std::string(to_string(policy.variant));
  j["reward_kind"] = std::string(to_string(policy.config.reward_kind));
  j["feature_layout"] = {{"context_dim", kContextDim},
                         {"arms", kMapCount},
                         {"maps", std::vector<std::string>(kMapNames.begin(), kMapNames.end())},
                         {"context", "avail[0..7) dec_match[7] dec_map[8..15) opp_match[15] opp_map[16..23)"},
                         {"phi", "block one-hot, block = offset + arm"}};
  json params = json::array();
  params.push_back(params_to_json(policy.pick));
  if (policy.ban) params.push_back(params_to_json(*policy.ban));
  j["parameters"] = std::move(params);
  j["config"] = config_to_json(policy.config);
  j["config_hash"] = config_hash(policy.config);
  j["update_counts"] = {{"pick_terms", policy.counts.pick_terms},
                        {"ban_terms", policy.counts.ban_terms},
                        {"parameter_updates", policy.counts.parameter_updates}};
  if (!provenance.empty()) j["provenance"] = json::parse(provenance);
  return j.dump(1);
}

TrainedPolicy deserialize_policy(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw validation_error(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != "veto-bandit-model") {
      throw validation_error("not a veto-bandit model file");
    }
    const int version = j.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw validation_error("unsupported model format version " + std::to_string(version));
    }
    if (j.at("feature_layout").at("context_dim").get<int>() != kContextDim ||
        j.at("feature_layout").at("arms").get<int>() != kMapCount) {
      throw validation_error("model feature layout does not match this build");
    }
    TrainedPolicy p(config_from_json(j.at("config")));
    if (p.variant != parse_bandit_variant(j.at("variant").get<std::string>())) {
      throw validation_error("model variant disagrees with its config");
    }
    const auto& params = j.at("parameters");
    const std::size_t expected = p.variant == BanditVariant::Split ? 2 : 1;
    if (!params.is_array() || params.size() != expected) {
      throw validation_error("model has the wrong number of parameter blocks");
    }
    p.pick = params_from_json(params[0]);
    if (p.variant == BanditVariant::Split) p.ban = params_from_json(params[1]);
    const auto want_pick = p.variant == BanditVariant::Split ? PolicyVariant::SplitPick
                           : p.variant == BanditVariant::Combo ? PolicyVariant::Combo
                                                               : PolicyVariant::Episodic;
    if (p.pick.variant != want_pick || (p.ban && p.ban->variant != PolicyVariant::SplitBan)) {
      throw validation_error("model parameter tags do not match the variant");
    }
    if (j.value("config_hash", "") != config_hash(p.config)) {
      throw validation_error("model config hash mismatch");
    }
    if (auto it = j.find("update_counts"); it != j.end()) {
      p.counts.pick_terms = it->value("pick_terms", 0L);
      p.counts.ban_terms = it->value("ban_terms", 0L);
      p.counts.parameter_updates = it->value("parameter_updates", 0L);
    }
    return p;
  } catch (const json::exception& e) {
    throw validation_error(std::string("malformed model file: ") + e.what());
  }
}

void save_policy(const std::string& path, const TrainedPolicy& policy, std::string_view provenance) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw error("cannot write model file '" + path + "'");
  out << serialize_policy(policy, provenance) << '\n';
  if (!out) throw error("write failure on '" + path + "'");
}

TrainedPolicy load_policy(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error("cannot read model file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return deserialize_policy(ss.str());
}

}  // namespace veto
