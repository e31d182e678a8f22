#pragma once

// Point-mass robot policies driven by the intent estimate.
//
// ConflictAvoid: the robot works through goals of its own and abandons its
// current goal as soon as the human is estimated to be heading there.
// Teleop: the robot follows the goal the human is estimated to be heading to.

#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "intent/geometry.hpp"
#include "intent/gesture.hpp"
#include "intent/session.hpp"

namespace intent {

enum class AgentMode { ConflictAvoid, Teleop };

std::string_view to_string(AgentMode mode);
std::optional<AgentMode> agent_mode_from_string(std::string_view name);

struct AgentConfig {
    AgentMode mode = AgentMode::ConflictAvoid;
    double theta_conflict = 0.5;
    double theta_teleop = 0.7;
    double speed = 0.2;  ///< m/s
    std::uint64_t seed = 0;

    void validate() const;
};

struct RobotState {
    Vec3 position;
    std::optional<std::string> target;
    double speed = 0.2;
    bool stopped = false;
};

struct AgentEvent {
    enum class Kind { Conflict, Retarget, GestureStop, Arrived };
    Kind kind;
    std::string goal;  ///< goal involved (conflicted goal, new target, ...)
};

std::string_view to_string(AgentEvent::Kind kind);

struct AgentStepResult {
    RobotState robot;
    std::vector<AgentEvent> events;
};

using AgentRng = std::mt19937_64;

/// Advances the robot by one step of length `dt` seconds.
/// Throws PreconditionError for dt <= 0 and InconsistencyError when the
/// robot's target is not in `goals`.
AgentStepResult agent_step(const RobotState& robot, const AgentConfig& config, const IntentEstimate& estimate,
                           const GoalSet& goals, Gesture gesture, double dt, AgentRng& rng);

}  // namespace intent
