#ifndef VETO_ADVISOR_HPP
#define VETO_ADVISOR_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "veto/errors.hpp"
#include "veto/features.hpp"
#include "veto/training.hpp"

namespace veto {

inline constexpr int kDefaultAdvisorPort = 8720;

// Request failure with an HTTP-style status (404 unknown model, 422 illegal
// draft state, 400 malformed request) and, for veto problems, the step.
class advisor_error : public error {
public:
  advisor_error(int status, const std::string& what, std::optional<int> step = std::nullopt)
      : error(what), status_(status), step_(step) {}
  int status() const noexcept { return status_; }
  std::optional<int> step() const noexcept { return step_; }

private:
  int status_;
  std::optional<int> step_;
};

struct DraftDecision {
  std::string team;
  ActionKind kind = ActionKind::Ban;
  MapId map;
};

struct DraftState {
  std::string team_a;
  std::string team_b;
  std::vector<DraftDecision> decisions;
  std::optional<std::string> requesting_team;
  std::string model_id;
};

struct Recommendation {
  std::string model_id;
  BanditVariant variant = BanditVariant::Combo;
  int step = 0;
  bool complete = false;
  std::optional<MapId> decider;  // set once all six decisions are made
  std::string team;              // team on turn
  ActionKind kind = ActionKind::Ban;
  std::vector<std::pair<MapId, double>> distribution;  // available maps, descending
  bool cold_start = false;
  bool mask_applied = true;
};

struct ModelDescriptor {
  std::string id;
  BanditVariant variant;
  RewardKind reward_kind;
  std::size_t dimension;
  std::string config_hash;
};

// Read-only recommendation engine over an immutable model and statistics
// snapshot; safe to call concurrently.
class Advisor {
public:
  Advisor(std::map<std::string, TrainedPolicy> models, std::map<std::string, TeamRecord> stats);

  Recommendation recommend(const DraftState& state) const;
  Recommendation what_if(const DraftState& state, const DraftDecision& hypothetical) const;
  std::vector<ModelDescriptor> models() const;

private:
  const TrainedPolicy& model(const std::string& id) const;

  std::map<std::string, TrainedPolicy> models_;
  std::map<std::string, TeamRecord> stats_;
};

// JSON layer shared by the HTTP service and the CLI. Throws advisor_error(400)
// on malformed input.
DraftState parse_draft_state(const std::string& json_text);
std::string recommendation_json(const Recommendation& rec);
std::string error_json(const advisor_error& e);

// Dispatches one request; returns (status, JSON body). Endpoints:
// GET /health, GET /models, POST /draft/recommend, POST /draft/what-if.
std::pair<int, std::string> handle_request(const Advisor& advisor, const std::string& method,
                                           const std::string& path, const std::string& body);

// HTTP front end for handle_request.
class AdvisorServer {
public:
  explicit AdvisorServer(const Advisor& advisor);
  ~AdvisorServer();
  AdvisorServer(const AdvisorServer&) = delete;
  AdvisorServer& operator=(const AdvisorServer&) = delete;

  // Binds (port 0 picks a free port) and returns the port. Throws error if
  // binding fails.
  int bind(const std::string& host, int port);
  // Blocks serving requests until stop() is called from another thread.
  void listen();
  void stop();

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace veto

#endif  // VETO_ADVISOR_HPP
