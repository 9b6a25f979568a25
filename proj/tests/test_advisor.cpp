#include "doctest.h"

#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "veto/advisor.hpp"
#include "veto/rng.hpp"

using namespace veto;
using nlohmann::json;

namespace {

Advisor make_advisor() {
  TrainingConfig cfg;
  cfg.variant = BanditVariant::Split;
  TrainedPolicy p(cfg);
  Rng rng(2);
  for (double& t : p.pick.theta) t = rng.normal();
  for (double& t : p.ban->theta) t = rng.normal();
  TeamRecord r;
  r.match_wins = 12;
  r.match_count = 20;
  r.map_wins = {3, 1, 4, 1, 5, 0, 2};
  r.map_count = {5, 4, 6, 3, 7, 2, 4};
  return Advisor({{"split", p}}, {{"alpha", r}, {"bravo", TeamRecord{}}});
}

const Advisor& advisor() {
  static const Advisor a = make_advisor();
  return a;
}

json decision(const std::string& team, const std::string& action, const std::string& map) {
  return {{"team", team}, {"action", action}, {"map", map}};
}

json state(std::vector<json> decisions, const std::string& a = "alpha", const std::string& b = "bravo") {
  return {{"team_a", a}, {"team_b", b}, {"model_id", "split"}, {"decisions", decisions}};
}

const std::vector<json> kFullVeto = {
    decision("alpha", "ban", "nuke"),     decision("bravo", "ban", "dust2"),
    decision("alpha", "pick", "mirage"),  decision("bravo", "pick", "inferno"),
    decision("alpha", "ban", "overpass"), decision("bravo", "ban", "train")};

std::pair<int, json> post(const std::string& path, const json& body) {
  const auto [status, text] = handle_request(advisor(), "POST", path, body.dump());
  return {status, json::parse(text)};
}

double total(const json& distribution) {
  double sum = 0.0;
  for (const auto& e : distribution) sum += e["probability"].get<double>();
  return sum;
}

}  // namespace

TEST_CASE("health and model listing") {
  auto [status, body] = handle_request(advisor(), "GET", "/health", "");
  CHECK(status == 200);
  CHECK(json::parse(body)["status"] == "ok");
  std::tie(status, body) = handle_request(advisor(), "GET", "/models", "");
  CHECK(status == 200);
  const auto models = json::parse(body)["models"];
  REQUIRE(models.size() == 1);
  CHECK(models[0]["id"] == "split");
  CHECK(models[0]["variant"] == "split");
  CHECK(models[0]["dimension"] == 2 * 7 * kContextDim);  // separate pick and ban heads
  CHECK(handle_request(advisor(), "GET", "/nowhere", "").first == 404);
}

TEST_CASE("recommend at the first step covers all maps") {
  const auto [status, body] = post("/draft/recommend", state({}));
  REQUIRE(status == 200);
  CHECK(body["step"] == 0);
  CHECK(body["complete"] == false);
  CHECK(body["next"]["team"] == "alpha");
  CHECK(body["next"]["action"] == "ban");
  CHECK(body["distribution"].size() == 7);
  CHECK(total(body["distribution"]) == doctest::Approx(1.0));
  CHECK(body["cold_start"] == false);
  for (std::size_t i = 1; i < body["distribution"].size(); ++i) {
    CHECK(body["distribution"][i]["probability"] <= body["distribution"][i - 1]["probability"]);
  }
}

TEST_CASE("pick probabilities follow the model's pick head") {
  DraftState s;
  s.team_a = "alpha";
  s.team_b = "bravo";
  s.model_id = "split";
  s.decisions = {{"alpha", ActionKind::Ban, MapId(3)}, {"bravo", ActionKind::Ban, MapId(0)}};
  const Recommendation rec = advisor().recommend(s);
  CHECK(rec.kind == ActionKind::Pick);
  CHECK(rec.team == "alpha");
  REQUIRE(rec.distribution.size() == 5);
  for (const auto& [map, p] : rec.distribution) {
    CHECK(map != MapId(3));
    CHECK(map != MapId(0));
    CHECK(p > 0.0);
  }
}

TEST_CASE("a complete veto reports the decider") {
  const auto [status, body] = post("/draft/recommend", state(kFullVeto));
  REQUIRE(status == 200);
  CHECK(body["complete"] == true);
  CHECK(body["decider"] == "vertigo");
  CHECK(body["next"].is_null());
  CHECK(body["distribution"].empty());
}

TEST_CASE("unknown teams fall back to cold-start statistics") {
  const auto [status, body] = post("/draft/recommend", state({}, "alpha", "zulu"));
  REQUIRE(status == 200);
  CHECK(body["cold_start"] == true);
  CHECK(total(body["distribution"]) == doctest::Approx(1.0));
}

TEST_CASE("request failures map to status codes") {
  json unknown = state({});
  unknown["model_id"] = "missing";
  CHECK(post("/draft/recommend", unknown).first == 404);

  const auto [status, body] = post("/draft/recommend", state({decision("bravo", "ban", "nuke")}));
  CHECK(status == 422);
  CHECK(body["step"] == 0);

  const auto repeat = post("/draft/recommend",
                           state({decision("alpha", "ban", "nuke"), decision("bravo", "ban", "nuke")}));
  CHECK(repeat.first == 422);
  CHECK(repeat.second["step"] == 1);

  CHECK(post("/draft/recommend", state({decision("alpha", "ban", "ancient")})).first == 422);
  CHECK(handle_request(advisor(), "POST", "/draft/recommend", "{not json").first == 400);
  CHECK(post("/draft/recommend", json{{"team_a", "alpha"}}).first == 400);
  CHECK(post("/draft/recommend", state({json{{"team", "alpha"}}})).first == 400);

  json stranger = state({});
  stranger["requesting_team"] = "zulu";
  CHECK(post("/draft/recommend", stranger).first == 422);
}

TEST_CASE("what-if is stateless and removes the hypothetical map") {
  const json base = state({decision("alpha", "ban", "nuke")});
  const auto before = post("/draft/recommend", base).second;
  const auto [status, body] =
      post("/draft/what-if", json{{"state", base}, {"hypothetical", decision("bravo", "ban", "train")}});
  REQUIRE(status == 200);
  CHECK(body["step"] == 2);
  CHECK(body["next"]["action"] == "pick");
  CHECK(body["distribution"].size() == 5);
  for (const auto& e : body["distribution"]) CHECK(e["map"] != "train");
  CHECK(post("/draft/recommend", base).second == before);

  // Chaining through the whole veto reaches the decider.
  json s = state({});
  for (const auto& d : kFullVeto) {
    const auto r = post("/draft/what-if", json{{"state", s}, {"hypothetical", d}});
    REQUIRE(r.first == 200);
    s["decisions"].push_back(d);
  }
  CHECK(post("/draft/recommend", s).second["decider"] == "vertigo");
  CHECK(post("/draft/what-if", json{{"state", state({})}, {"hypothetical", decision("bravo", "ban", "train")}})
            .first == 422);
}

TEST_CASE("http server answers on an ephemeral port") {
  AdvisorServer server(advisor());
  const int port = server.bind("127.0.0.1", 0);
  REQUIRE(port > 0);
  std::thread loop([&] { server.listen(); });
  httplib::Client client("127.0.0.1", port);
  const auto health = client.Get("/health");
  REQUIRE(health);
  CHECK(health->status == 200);
  const auto rec = client.Post("/draft/recommend", state({}).dump(), "application/json");
  REQUIRE(rec);
  CHECK(rec->status == 200);
  CHECK(json::parse(rec->body)["distribution"].size() == 7);
  const auto bad = client.Post("/draft/recommend", "[", "application/json");
  REQUIRE(bad);
  CHECK(bad->status == 400);
  server.stop();
  loop.join();
}
