#include "intent/session.hpp"

#include <cmath>
#include <numeric>

#include "intent/error.hpp"

namespace intent {

namespace {
constexpr double kVanishedMass = 1e-12;
}

void SessionConfig::validate() const {
    params.validate();
    pattern.validate();
    if (!(epsilon_motion > 0.0) || !std::isfinite(epsilon_motion)) {
        throw ParameterError("epsilon_motion must be positive");
    }
}

double IntentEstimate::probability_of(const std::string& goal_id) const {
    for (const auto& [id, p] : per_goal) {
        if (id == goal_id) {
            return p;
        }
    }
    throw UnknownGoalError("unknown goal id '" + goal_id + "'");
}

double IntentEstimate::total() const {
    double sum = p_unknown + p_irrational;
    for (const auto& entry : per_goal) {
        sum += entry.second;
    }
    return sum;
}

Session::Session(SessionConfig config, GoalSet goals)
    : config_(std::move(config)), goals_(std::move(goals)), trellis_(config_.backpointer_window) {
    config_.validate();
    if (goals_.empty()) {
        throw PreconditionError("a session needs at least one goal");
    }
    transition_ = build_transition(config_.params, goals_.size());
    belief_ = initial_belief(goals_.size());
}

IntentEstimate Session::make_estimate(double t, bool skipped) const {
    IntentEstimate e;
    e.t = t;
    const std::size_t g = goals_.size();
    e.per_goal.reserve(g);
    for (std::size_t j = 0; j < g; ++j) {
        e.per_goal.emplace_back(goals_[j].id, belief_[j]);
    }
    e.p_unknown = belief_[g];
    e.p_irrational = belief_[g + 1];
    e.argmax = HiddenState::from_index(argmax(belief_), g);
    switch (e.argmax.kind) {
        case HiddenState::Kind::Goal:
            e.argmax_label = goals_[e.argmax.goal].id;
            break;
        case HiddenState::Kind::Unknown:
            e.argmax_label = "unknown";
            break;
        case HiddenState::Kind::Irrational:
            e.argmax_label = "irrational";
            break;
    }
    e.phi = phi_;
    e.delta_gap = delta_;
    e.skipped = skipped;
    return e;
}

IntentEstimate Session::current_estimate() const { return make_estimate(last_t_.value_or(0.0), true); }

IntentEstimate Session::observe(const Observation& obs) {
    if (!std::isfinite(obs.t)) {
        throw StreamError("observation timestamp must be finite");
    }
    if (last_t_ && !(obs.t > *last_t_)) {
        throw StreamError("observation timestamps must be strictly increasing");
    }
    if (!obs.hand.finite()) {
        throw InvalidInputError("hand position must be finite");
    }
    // Validates the head pose before any state changes.
    GazeVector s = gaze_validation(obs.head, goals_);

    last_t_ = obs.t;
    if (!previous_hand_) {
        previous_hand_ = obs.hand;
        trace_.push_back(make_estimate(obs.t, true));
        return trace_.back();
    }
    const Vec3 step = obs.hand - *previous_hand_;
    const double radius = step.norm();
    if (radius < config_.epsilon_motion) {
        trace_.push_back(make_estimate(obs.t, true));
        return trace_.back();
    }

    // Pattern oriented by the motion and the gaze, so the evidence does not
    // depend on the world frame.
    const SampleFrame frame{step / radius, obs.head.forward};
    const auto points =
        sample_candidate_points(*previous_hand_, radius, config_.pattern, frame, config_.epsilon_motion);
    const auto md = modulated_distance_matrix(points, obs.hand, goals_);
    ValidationVector v = motion_validation(md, s);

    v_ring_.push_back(v);
    const auto window = static_cast<std::size_t>(config_.params.m);
    while (v_ring_.size() > window) {
        v_ring_.erase(v_ring_.begin());
    }
    phi_ = phi(v_ring_, config_.params.m);
    delta_ = delta_gap(v);
    const EmissionRow row = emission_row(v, phi_);

    StepResult step_result = viterbi_step(belief_, transition_, row);
    belief_ = std::move(step_result.belief);
    if (step_result.reset) {
        trellis_.clear();
    } else {
        trellis_.push(std::move(step_result.backpointers));
    }
    previous_hand_ = obs.hand;

    IntentEstimate e = make_estimate(obs.t, false);
    e.v = std::move(v);
    e.s = std::move(s);
    e.reset = step_result.reset;
    trace_.push_back(e);
    return e;
}

void Session::add_goal(Goal goal) {
    if (goals_.contains(goal.id)) {
        throw DuplicateGoalError("duplicate goal id '" + goal.id + "'");
    }
    TransitionMatrix next = build_transition(config_.params, goals_.size() + 1);
    const std::size_t g = goals_.size();
    goals_.add(std::move(goal));
    transition_ = std::move(next);
    belief_.insert(belief_.begin() + static_cast<std::ptrdiff_t>(g), 0.0);
    for (auto& v : v_ring_) {
        v.push_back(0.0);
    }
    trellis_.clear();
}

void Session::remove_goal(const std::string& id) {
    const auto idx = goals_.index_of(id);
    if (!idx) {
        throw UnknownGoalError("unknown goal id '" + id + "'");
    }
    if (goals_.size() == 1) {
        throw PreconditionError("cannot remove the last goal of a session");
    }
    TransitionMatrix next = build_transition(config_.params, goals_.size() - 1);
    goals_.remove(id);
    transition_ = std::move(next);

    belief_.erase(belief_.begin() + static_cast<std::ptrdiff_t>(*idx));
    const double total = std::accumulate(belief_.begin(), belief_.end(), 0.0);
    if (total < kVanishedMass) {
        belief_ = initial_belief(goals_.size());
    } else {
        for (double& x : belief_) {
            x /= total;
        }
    }
    for (auto& v : v_ring_) {
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(*idx));
    }
    trellis_.clear();
}

void Session::update_params(const HmmParams& params) {
    TransitionMatrix next = build_transition(params, goals_.size());
    config_.params = params;
    transition_ = std::move(next);
    const auto window = static_cast<std::size_t>(params.m);
    if (v_ring_.size() > window) {
        v_ring_.erase(v_ring_.begin(), v_ring_.end() - static_cast<std::ptrdiff_t>(window));
    }
    trellis_.clear();
}

std::vector<HiddenState> Session::viterbi_path() const { return intent::viterbi_path(trellis_, belief_); }

}  // namespace intent
