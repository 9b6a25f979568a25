#include "veto/advisor.hpp"

#include <algorithm>

#include "httplib.h"
#include "json.hpp"

#include "veto/model_io.hpp"
#include "veto/veto_state.hpp"

namespace veto {

using nlohmann::json;

Advisor::Advisor(std::map<std::string, TrainedPolicy> models, std::map<std::string, TeamRecord> stats)
    : models_(std::move(models)), stats_(std::move(stats)) {}

const TrainedPolicy& Advisor::model(const std::string& id) const {
  auto it = models_.find(id);
  if (it == models_.end()) throw advisor_error(404, "unknown model '" + id + "'");
  return it->second;
}

std::vector<ModelDescriptor> Advisor::models() const {
  std::vector<ModelDescriptor> out;
  for (const auto& [id, p] : models_) {
    out.push_back({id, p.variant, p.config.reward_kind,
                   p.pick.dimension() + (p.ban ? p.ban->dimension() : 0), config_hash(p.config)});
  }
  return out;
}

namespace {

VetoState replay(const DraftState& state) {
  VetoState veto;
  try {
    veto = new_veto(state.team_a, state.team_b);
  } catch (const validation_error& e) {
    throw advisor_error(422, e.what());
  }
  for (const auto& d : state.decisions) {
    try {
      veto = apply_decision(veto, d.team, d.kind, d.map);
    } catch (const veto_error& e) {
      throw advisor_error(422, e.what(), e.step());
    }
  }
  return veto;
}

}  // namespace

Recommendation Advisor::recommend(const DraftState& state) const {
  const TrainedPolicy& policy = model(state.model_id);
  const VetoState veto = replay(state);
  if (state.requesting_team && *state.requesting_team != state.team_a &&
      *state.requesting_team != state.team_b) {
    throw advisor_error(422, "requesting team '" + *state.requesting_team + "' is not in this draft");
  }

  Recommendation rec;
  rec.model_id = state.model_id;
  rec.variant = policy.variant;
  rec.step = veto.step();
  rec.cold_start = !stats_.count(state.team_a) || !stats_.count(state.team_b);
  if (veto.complete()) {
    rec.complete = true;
    rec.decider = decider(veto);
    return rec;
  }
  rec.team = veto.team_on_turn();
  rec.kind = veto.kind_on_turn();
  const std::string& opponent = veto.opponent_of(rec.team);
  static const TeamRecord fresh{};
  auto lookup = [&](const std::string& t) -> const TeamRecord& {
    auto it = stats_.find(t);
    return it == stats_.end() ? fresh : it->second;
  };
  const ContextVector x = build_context(lookup(rec.team), lookup(opponent), veto.available());
  const ActionDistribution dist = policy.distribution_for(x, rec.kind, true);
  for (int a = 0; a < kMapCount; ++a) {
    if (veto.available().contains(MapId(a))) {
      rec.distribution.emplace_back(MapId(a), dist.probs[static_cast<std::size_t>(a)]);
    }
  }
  std::stable_sort(rec.distribution.begin(), rec.distribution.end(),
                   [](const auto& l, const auto& r) { return l.second > r.second; });
  return rec;
}

Recommendation Advisor::what_if(const DraftState& state, const DraftDecision& hypothetical) const {
  DraftState branch = state;
  branch.decisions.push_back(hypothetical);
  return recommend(branch);
}

namespace {

DraftDecision parse_decision(const json& j) {
  if (!j.is_object()) throw advisor_error(400, "decision must be an object");
  DraftDecision d;
  try {
    d.team = j.at("team").get<std::string>();
    d.kind = parse_action_kind(j.at("action").get<std::string>());
    d.map = MapId::parse(j.at("map").get<std::string>());
  } catch (const json::exception& e) {
    throw advisor_error(400, std::string("malformed decision: ") + e.what());
  } catch (const validation_error& e) {
    throw advisor_error(422, e.what());
  }
  return d;
}

DraftState parse_state_json(const json& j) {
  if (!j.is_object()) throw advisor_error(400, "draft state must be an object");
  DraftState s;
  try {
    s.team_a = j.at("team_a").get<std::string>();
    s.team_b = j.at("team_b").get<std::string>();
    s.model_id = j.at("model_id").get<std::string>();
    if (auto it = j.find("requesting_team"); it != j.end() && !it->is_null()) {
      s.requesting_team = it->get<std::string>();
    }
  } catch (const json::exception& e) {
    throw advisor_error(400, std::string("malformed draft state: ") + e.what());
  }
  if (auto it = j.find("decisions"); it != j.end()) {
    if (!it->is_array()) throw advisor_error(400, "'decisions' must be an array");
    for (const auto& d : *it) s.decisions.push_back(parse_decision(d));
  }
  return s;
}

json parse_body(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw advisor_error(400, std::string("request body is not JSON: ") + e.what());
  }
}

}  // namespace

DraftState parse_draft_state(const std::string& json_text) { return parse_state_json(parse_body(json_text)); }

std::string recommendation_json(const Recommendation& rec) {
  json j;
  j["model_id"] = rec.model_id;
  j["variant"] = std::string(to_string(rec.variant));
  j["step"] = rec.step;
  j["complete"] = rec.complete;
  j["mask_applied"] = rec.mask_applied;
  j["cold_start"] = rec.cold_start;
  if (rec.complete) {
    j["next"] = nullptr;
    j["decider"] = std::string(rec.decider->name());
  } else {
    j["next"] = {{"team", rec.team}, {"action", std::string(to_string(rec.kind))}};
    j["decider"] = nullptr;
  }
  json dist = json::array();
  for (const auto& [m, p] : rec.distribution) dist.push_back({{"map", std::string(m.name())}, {"probability", p}});
  j["distribution"] = std::move(dist);
  return j.dump();
}

std::string error_json(const advisor_error& e) {
  json j{{"code", e.status()}, {"message", e.what()}};
  if (e.step()) j["step"] = *e.step();
  return j.dump();
}

std::pair<int, std::string> handle_request(const Advisor& advisor, const std::string& method,
                                           const std::string& path, const std::string& body) {
  try {
    if (method == "GET" && path == "/health") return {200, json{{"status", "ok"}}.dump()};
    if (method == "GET" && path == "/models") {
      json list = json::array();
      for (const auto& d : advisor.models()) {
        list.push_back({{"id", d.id},
                        {"variant", std::string(to_string(d.variant))},
                        {"reward_kind", std::string(to_string(d.reward_kind))},
                        {"dimension", d.dimension},
                        {"config_hash", d.config_hash}});
      }
      return {200, json{{"models", list}}.dump()};
    }
    if (method == "POST" && path == "/draft/recommend") {
      return {200, recommendation_json(advisor.recommend(parse_draft_state(body)))};
    }
    if (method == "POST" && path == "/draft/what-if") {
      const json j = parse_body(body);
      if (!j.is_object() || !j.contains("state") || !j.contains("hypothetical")) {
        throw advisor_error(400, "what-if needs 'state' and 'hypothetical'");
      }
      return {200, recommendation_json(
                       advisor.what_if(parse_state_json(j["state"]), parse_decision(j["hypothetical"])))};
    }
    throw advisor_error(404, "no route for " + method + " " + path);
  } catch (const advisor_error& e) {
    return {e.status(), error_json(e)};
  } catch (const error& e) {
    const advisor_error wrapped(422, e.what());
    return {422, error_json(wrapped)};
  }
}

struct AdvisorServer::Impl {
  explicit Impl(const Advisor& a) : advisor(a) {}
  const Advisor& advisor;
  httplib::Server server;
};

AdvisorServer::AdvisorServer(const Advisor& advisor) : impl_(std::make_unique<Impl>(advisor)) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    auto [status, body] = handle_request(impl_->advisor, req.method, req.path, req.body);
    res.status = status;
    res.set_content(body, "application/json");
  };
  impl_->server.Get("/health", handler);
  impl_->server.Get("/models", handler);
  impl_->server.Post("/draft/recommend", handler);
  impl_->server.Post("/draft/what-if", handler);
  impl_->server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return;
    const advisor_error e(res.status, "no route for " + req.method + " " + req.path);
    res.set_content(error_json(e), "application/json");
  });
}

AdvisorServer::~AdvisorServer() = default;

int AdvisorServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound <= 0) throw error("could not bind advisor service on " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw error("could not bind advisor service on " + host + ":" + std::to_string(port));
  }
  return port;
}

void AdvisorServer::listen() { impl_->server.listen_after_bind(); }

void AdvisorServer::stop() { impl_->server.stop(); }

}  // namespace veto
