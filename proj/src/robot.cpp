#include "intent/robot.hpp"

#include <cmath>

#include "intent/error.hpp"

namespace intent {

namespace {

bool valid_threshold(double x) { return x > 0.0 && x <= 1.0; }

// Uniform draw among the goals other than `exclude`; nullopt when none remain.
std::optional<std::string> draw_other(const GoalSet& goals, const std::optional<std::string>& exclude,
                                      AgentRng& rng) {
    std::vector<const Goal*> candidates;
    for (const auto& g : goals) {
        if (!exclude || g.id != *exclude) {
            candidates.push_back(&g);
        }
    }
    if (candidates.empty()) {
        return std::nullopt;
    }
    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
    return candidates[pick(rng)]->id;
}

}  // namespace

std::string_view to_string(AgentMode mode) {
    return mode == AgentMode::ConflictAvoid ? "conflict_avoid" : "teleop";
}

std::optional<AgentMode> agent_mode_from_string(std::string_view name) {
    if (name == "conflict_avoid") {
        return AgentMode::ConflictAvoid;
    }
    if (name == "teleop") {
        return AgentMode::Teleop;
    }
    return std::nullopt;
}

std::string_view to_string(AgentEvent::Kind kind) {
    switch (kind) {
        case AgentEvent::Kind::Conflict:
            return "conflict";
        case AgentEvent::Kind::Retarget:
            return "retarget";
        case AgentEvent::Kind::GestureStop:
            return "gesture_stop";
        case AgentEvent::Kind::Arrived:
            return "arrived";
    }
    return "conflict";
}

void AgentConfig::validate() const {
    if (!valid_threshold(theta_conflict) || !valid_threshold(theta_teleop)) {
        throw ParameterError("agent thresholds must lie in (0, 1]");
    }
    if (!(speed >= 0.0) || !std::isfinite(speed)) {
        throw ParameterError("agent speed must be non-negative");
    }
}

AgentStepResult agent_step(const RobotState& robot, const AgentConfig& config, const IntentEstimate& estimate,
                           const GoalSet& goals, Gesture gesture, double dt, AgentRng& rng) {
    if (!(dt > 0.0)) {
        throw PreconditionError("agent step needs dt > 0");
    }
    config.validate();
    if (robot.target && !goals.contains(*robot.target)) {
        throw InconsistencyError("robot target '" + *robot.target + "' is not a known goal");
    }

    AgentStepResult out{robot, {}};
    RobotState& next = out.robot;
    next.speed = config.speed;
    next.stopped = false;
    bool hold = false;

    if (config.mode == AgentMode::ConflictAvoid) {
        if (!next.target) {
            next.target = draw_other(goals, std::nullopt, rng);
            if (next.target) {
                out.events.push_back({AgentEvent::Kind::Retarget, *next.target});
            }
        } else if (estimate.probability_of(*next.target) > config.theta_conflict) {
            out.events.push_back({AgentEvent::Kind::Conflict, *next.target});
            next.target = draw_other(goals, next.target, rng);
            next.stopped = true;
            if (next.target) {
                out.events.push_back({AgentEvent::Kind::Retarget, *next.target});
            }
        }
    } else {
        if (estimate.argmax.is_goal()) {
            const std::string& id = goals[estimate.argmax.goal].id;
            if (estimate.probability_of(id) > config.theta_teleop && next.target != id) {
                next.target = id;
                out.events.push_back({AgentEvent::Kind::Retarget, id});
            }
        } else {
            hold = true;
        }
    }

    if (gesture == Gesture::Stop) {
        next.stopped = true;
        out.events.push_back({AgentEvent::Kind::GestureStop, next.target.value_or("")});
    }
    if (next.stopped || hold || !next.target) {
        return out;
    }

    const Vec3 goal_pos = goals[*goals.index_of(*next.target)].position;
    const Vec3 to_goal = goal_pos - next.position;
    const double dist = to_goal.norm();
    const double reach = config.speed * dt;
    if (dist <= reach) {
        next.position = goal_pos;
        out.events.push_back({AgentEvent::Kind::Arrived, *next.target});
        if (config.mode == AgentMode::ConflictAvoid) {
            next.target = draw_other(goals, next.target, rng);
            if (next.target) {
                out.events.push_back({AgentEvent::Kind::Retarget, *next.target});
            }
        }
    } else {
        next.position = next.position + to_goal * (reach / dist);
    }
    return out;
}

}  // namespace intent
