#pragma once

// Message protocol between the estimator core and interactive clients.
//
// Every frame is one JSON object carrying "v": 1 and a "type".
//
// Client to server:
//   observation      {t, head_pos, head_dir, hand_pos, joints?}
//   goal_edit        {op: "add", goal: {id, label?, pos}} | {op: "remove", id}
//   param_update     {params: {alpha?, beta?, gamma?, delta?, m?}}
//   mode_toggle      {agent: {mode: "off"|"conflict_avoid"|"teleop", theta_conflict?, theta_teleop?, speed?}}
//   gesture_pose     {fixture: name} | {skeleton: [[x, y, z] x 21]}
//   scenario_control {op: "load", name} | {op: "start"} | {op: "stop"}
//   snapshot         {}
//
// Server to client:
//   estimate, robot_update, gesture_label, error {code, detail}, snapshot
//
// Error codes: 400 malformed input, 404 unknown goal, 409 constraint
// violation or duplicate goal, 422 non-monotonic timestamp. A message that
// fails leaves the connection state untouched.

#include <cstddef>
#include <deque>
#include <json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "intent/gesture.hpp"
#include "intent/robot.hpp"
#include "intent/scenario.hpp"
#include "intent/session.hpp"

namespace intent::protocol {

using json = nlohmann::json;

inline constexpr int kVersion = 1;

enum class ErrorCode : int { Malformed = 400, UnknownGoal = 404, Conflict = 409, NonMonotonic = 422 };

json estimate_message(const IntentEstimate& e);
json robot_message(const RobotState& robot, const std::vector<AgentEvent>& events);
json gesture_message(Gesture g);
json error_message(ErrorCode code, std::string_view detail);

struct ConnectionOptions {
    SessionConfig session;
    std::optional<GoalSet> goals;  ///< defaults to the builtin layout
    Vec3 robot_start{0.8, 0.0, 0.8};
    std::uint64_t seed = 0;
    std::size_t gesture_history = 8;
};

/// Protocol state of one client connection. Not internally synchronized.
class Connection {
public:
    explicit Connection(ConnectionOptions options = {});

    /// Handles one frame and returns the replies in order.
    std::vector<json> handle(std::string_view frame);
    std::vector<json> handle(const json& msg);

    json snapshot() const;

    /// Scenario playback: true while a started scenario has samples left.
    bool playing() const { return playing_; }
    /// Seconds between playback samples of the loaded scenario.
    double playback_interval() const;
    /// Feeds the next playback sample through the observation path.
    std::vector<json> play_next();

    const Session& session() const { return session_; }
    const RobotState& robot() const { return robot_; }
    const std::optional<AgentConfig>& agent() const { return agent_; }

private:
    std::vector<json> dispatch(const json& msg);
    std::vector<json> on_observation(const Observation& obs);
    std::vector<json> on_goal_edit(const json& msg);
    std::vector<json> on_param_update(const json& msg);
    std::vector<json> on_mode_toggle(const json& msg);
    std::vector<json> on_gesture_pose(const json& msg);
    std::vector<json> on_scenario_control(const json& msg);
    Gesture push_skeleton(const HandSkeleton& skeleton);
    void reset_session(GoalSet goals);

    ConnectionOptions options_;
    Session session_;
    std::optional<AgentConfig> agent_;
    RobotState robot_;
    AgentRng rng_;
    std::deque<HandSkeleton> skeletons_;
    Gesture gesture_ = Gesture::None;
    std::optional<double> last_t_;
    std::optional<Scenario> scenario_;
    std::vector<Observation> playback_;
    std::size_t playback_pos_ = 0;
    bool playing_ = false;
};

}  // namespace intent::protocol
