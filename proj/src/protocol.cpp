#include "intent/protocol.hpp"

#include "intent/error.hpp"
#include "json_util.hpp"

namespace intent::protocol {

namespace {

ErrorCode code_for(const Error& e) {
    switch (e.kind()) {
        case ErrorKind::InvalidInput:
        case ErrorKind::UndefinedPose:
            return ErrorCode::Malformed;
        case ErrorKind::UnknownGoal:
            return ErrorCode::UnknownGoal;
        case ErrorKind::Stream:
            return ErrorCode::NonMonotonic;
        case ErrorKind::Parameter:
        case ErrorKind::Precondition:
        case ErrorKind::Inconsistency:
        case ErrorKind::DuplicateGoal:
            return ErrorCode::Conflict;
    }
    return ErrorCode::Malformed;
}

json message(const char* type) { return json{{"v", kVersion}, {"type", type}}; }

json goals_json(const GoalSet& goals) {
    json out = json::array();
    for (const auto& g : goals) {
        out.push_back(detail::goal_to_json(g));
    }
    return out;
}

json robot_json(const RobotState& robot) {
    return json{{"pos", detail::vec_to_json(robot.position)},
                {"target", robot.target ? json(*robot.target) : json(nullptr)},
                {"speed", robot.speed},
                {"stopped", robot.stopped}};
}

double optional_number(const json& obj, const char* key, double fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    return detail::require_number(obj, key);
}

}  // namespace

json estimate_message(const IntentEstimate& e) {
    json per_goal = json::array();
    for (const auto& [id, p] : e.per_goal) {
        per_goal.push_back(json{{"id", id}, {"p", p}});
    }
    json out = message("estimate");
    out["t"] = e.t;
    out["per_goal"] = per_goal;
    out["p_unknown"] = e.p_unknown;
    out["p_irrational"] = e.p_irrational;
    out["argmax"] = e.argmax_label;
    out["phi"] = e.phi;
    out["delta_gap"] = e.delta_gap;
    out["validation"] = e.v;
    out["gaze"] = e.s;
    out["skipped"] = e.skipped;
    out["reset"] = e.reset;
    return out;
}

json robot_message(const RobotState& robot, const std::vector<AgentEvent>& events) {
    json ev = json::array();
    for (const auto& e : events) {
        ev.push_back(json{{"kind", std::string(to_string(e.kind))}, {"goal", e.goal}});
    }
    json out = message("robot_update");
    out["robot"] = robot_json(robot);
    out["events"] = ev;
    return out;
}

json gesture_message(Gesture g) {
    json out = message("gesture_label");
    out["gesture"] = std::string(to_string(g));
    return out;
}

json error_message(ErrorCode code, std::string_view detail) {
    json out = message("error");
    out["code"] = static_cast<int>(code);
    out["detail"] = std::string(detail);
    return out;
}

Connection::Connection(ConnectionOptions options)
    : options_(std::move(options)),
      session_(options_.session, options_.goals ? *options_.goals : builtin_goal_layout()),
      rng_(options_.seed) {
    robot_.position = options_.robot_start;
}

std::vector<json> Connection::handle(std::string_view frame) {
    json msg;
    try {
        msg = json::parse(frame);
    } catch (const json::exception& e) {
        return {error_message(ErrorCode::Malformed, std::string("invalid JSON: ") + e.what())};
    }
    return handle(msg);
}

std::vector<json> Connection::handle(const json& msg) {
    try {
        if (!msg.is_object()) {
            throw InvalidInputError("message must be a JSON object");
        }
        if (!msg.contains("v") || !msg["v"].is_number_integer() || msg["v"].get<int>() != kVersion) {
            throw InvalidInputError("message must carry \"v\": 1");
        }
        return dispatch(msg);
    } catch (const Error& e) {
        return {error_message(code_for(e), e.what())};
    } catch (const json::exception& e) {
        return {error_message(ErrorCode::Malformed, e.what())};
    }
}

std::vector<json> Connection::dispatch(const json& msg) {
    const std::string type = detail::require_string(msg, "type");
    if (type == "observation") {
        return on_observation(detail::observation_from_json(msg));
    }
    if (type == "goal_edit") {
        return on_goal_edit(msg);
    }
    if (type == "param_update") {
        return on_param_update(msg);
    }
    if (type == "mode_toggle") {
        return on_mode_toggle(msg);
    }
    if (type == "gesture_pose") {
        return on_gesture_pose(msg);
    }
    if (type == "scenario_control") {
        return on_scenario_control(msg);
    }
    if (type == "snapshot") {
        return {snapshot()};
    }
    throw InvalidInputError("unknown message type '" + type + "'");
}

json Connection::snapshot() const {
    const auto& cfg = session_.config();
    const bool circle = std::holds_alternative<PlanarCircle>(cfg.pattern.shape);
    json config{{"alpha", cfg.params.alpha},
                {"beta", cfg.params.beta},
                {"gamma", cfg.params.gamma},
                {"delta", cfg.params.delta},
                {"m", cfg.params.m},
                {"pattern", circle ? "circle" : "sphere"},
                {"samples", cfg.pattern.count},
                {"epsilon_motion", cfg.epsilon_motion}};
    json agent{{"mode", "off"}};
    if (agent_) {
        agent = json{{"mode", std::string(to_string(agent_->mode))},
                     {"theta_conflict", agent_->theta_conflict},
                     {"theta_teleop", agent_->theta_teleop},
                     {"speed", agent_->speed}};
    }
    json out = message("snapshot");
    out["goals"] = goals_json(session_.goals());
    out["config"] = config;
    out["agent"] = agent;
    out["robot"] = robot_json(robot_);
    out["scenario"] = json{{"name", scenario_ ? json(scenario_->name) : json(nullptr)}, {"playing", playing_}};
    return out;
}

Gesture Connection::push_skeleton(const HandSkeleton& skeleton) {
    std::deque<HandSkeleton> next = skeletons_;
    next.push_back(skeleton);
    while (next.size() > options_.gesture_history) {
        next.pop_front();
    }
    const std::vector<HandSkeleton> history(next.begin(), next.end());
    const Gesture g = classify_gesture(history);
    skeletons_ = std::move(next);
    gesture_ = g;
    return g;
}

std::vector<json> Connection::on_observation(const Observation& obs) {
    // Classify first so an undefined pose rejects the frame before the session moves.
    std::optional<Gesture> gesture;
    std::deque<HandSkeleton> saved = skeletons_;
    const Gesture saved_gesture = gesture_;
    if (obs.joints) {
        gesture = push_skeleton(*obs.joints);
    }
    IntentEstimate est;
    try {
        est = session_.observe(obs);
    } catch (...) {
        skeletons_ = std::move(saved);
        gesture_ = saved_gesture;
        throw;
    }

    std::vector<json> out{estimate_message(est)};
    if (gesture) {
        out.push_back(gesture_message(*gesture));
    }
    if (agent_) {
        std::vector<AgentEvent> events;
        if (last_t_) {
            auto step = agent_step(robot_, *agent_, est, session_.goals(), gesture_, obs.t - *last_t_, rng_);
            robot_ = std::move(step.robot);
            events = std::move(step.events);
        }
        out.push_back(robot_message(robot_, events));
    }
    last_t_ = obs.t;
    return out;
}

std::vector<json> Connection::on_goal_edit(const json& msg) {
    const std::string op = detail::require_string(msg, "op");
    if (op == "add") {
        session_.add_goal(detail::goal_from_json(detail::require(msg, "goal")));
    } else if (op == "remove") {
        const std::string id = detail::require_string(msg, "id");
        session_.remove_goal(id);
        if (robot_.target == id) {
            robot_.target.reset();
        }
    } else {
        throw InvalidInputError("goal_edit op must be \"add\" or \"remove\"");
    }
    return {snapshot()};
}

std::vector<json> Connection::on_param_update(const json& msg) {
    const json& p = detail::require(msg, "params");
    if (!p.is_object()) {
        throw InvalidInputError("params must be an object");
    }
    HmmParams next = session_.config().params;
    next.alpha = optional_number(p, "alpha", next.alpha);
    next.beta = optional_number(p, "beta", next.beta);
    next.gamma = optional_number(p, "gamma", next.gamma);
    next.delta = optional_number(p, "delta", next.delta);
    if (p.contains("m")) {
        if (!p["m"].is_number_integer()) {
            throw InvalidInputError("m must be an integer");
        }
        next.m = p["m"].get<int>();
    }
    session_.update_params(next);
    return {snapshot()};
}

std::vector<json> Connection::on_mode_toggle(const json& msg) {
    const json& a = detail::require(msg, "agent");
    const std::string mode = detail::require_string(a, "mode");
    if (mode == "off") {
        agent_.reset();
        robot_.target.reset();
        robot_.stopped = false;
        return {snapshot()};
    }
    const auto parsed = agent_mode_from_string(mode);
    if (!parsed) {
        throw InvalidInputError("unknown agent mode '" + mode + "'");
    }
    AgentConfig next = agent_.value_or(AgentConfig{});
    next.mode = *parsed;
    next.theta_conflict = optional_number(a, "theta_conflict", next.theta_conflict);
    next.theta_teleop = optional_number(a, "theta_teleop", next.theta_teleop);
    next.speed = optional_number(a, "speed", next.speed);
    next.seed = options_.seed;
    next.validate();
    if (!agent_ || agent_->mode != next.mode) {
        robot_.target.reset();
    }
    agent_ = next;
    robot_.speed = next.speed;
    return {snapshot()};
}

std::vector<json> Connection::on_gesture_pose(const json& msg) {
    HandSkeleton skeleton;
    if (msg.contains("fixture")) {
        const std::string name = detail::require_string(msg, "fixture");
        const auto fixture = gesture_fixture(name);
        if (!fixture) {
            throw InvalidInputError("unknown gesture fixture '" + name + "'");
        }
        skeleton = *fixture;
    } else {
        skeleton = detail::skeleton_from_json(detail::require(msg, "skeleton"));
    }
    return {gesture_message(push_skeleton(skeleton))};
}

void Connection::reset_session(GoalSet goals) {
    Session fresh(session_.config(), std::move(goals));
    session_ = std::move(fresh);
    skeletons_.clear();
    gesture_ = Gesture::None;
    last_t_.reset();
    robot_.target.reset();
    robot_.stopped = false;
}

std::vector<json> Connection::on_scenario_control(const json& msg) {
    const std::string op = detail::require_string(msg, "op");
    if (op == "load") {
        std::string name = detail::require_string(msg, "name");
        if (name.rfind("builtin:", 0) == 0) {
            name = name.substr(8);
        }
        auto all = builtin_scenarios();
        const auto it = all.find(name);
        if (it == all.end()) {
            throw InvalidInputError("unknown builtin scenario '" + name + "'");
        }
        std::vector<Observation> samples = synthesize(it->second);
        reset_session(it->second.goals);
        scenario_ = std::move(it->second);
        playback_ = std::move(samples);
        playback_pos_ = 0;
        playing_ = false;
    } else if (op == "start") {
        if (!scenario_) {
            throw PreconditionError("no scenario loaded");
        }
        reset_session(scenario_->goals);
        playback_pos_ = 0;
        playing_ = !playback_.empty();
    } else if (op == "stop") {
        playing_ = false;
    } else {
        throw InvalidInputError("scenario_control op must be \"load\", \"start\" or \"stop\"");
    }
    return {snapshot()};
}

double Connection::playback_interval() const { return scenario_ ? 1.0 / scenario_->rate : 0.0; }

std::vector<json> Connection::play_next() {
    if (!playing_ || playback_pos_ >= playback_.size()) {
        playing_ = false;
        return {};
    }
    const Observation obs = playback_[playback_pos_++];
    if (playback_pos_ >= playback_.size()) {
        playing_ = false;
    }
    try {
        return on_observation(obs);
    } catch (const Error& e) {
        return {error_message(code_for(e), e.what())};
    }
}

}  // namespace intent::protocol
