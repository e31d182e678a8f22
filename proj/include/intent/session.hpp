#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "intent/geometry.hpp"
#include "intent/gesture.hpp"
#include "intent/hmm.hpp"
#include "intent/validation.hpp"

namespace intent {

struct SessionConfig {
    HmmParams params;
    SamplePattern pattern;
    double epsilon_motion = kDefaultEpsilonMotion;
    std::size_t backpointer_window = Trellis::kDefaultCapacity;

    void validate() const;
};

struct Observation {
    double t = 0.0;  ///< seconds, strictly increasing within a session
    HeadPose head;
    Vec3 hand;
    std::optional<HandSkeleton> joints;
};

struct IntentEstimate {
    double t = 0.0;
    std::vector<std::pair<std::string, double>> per_goal;  ///< in goal order
    double p_unknown = 1.0;
    double p_irrational = 0.0;
    HiddenState argmax = HiddenState::unknown();
    std::string argmax_label = "unknown";  ///< goal id, "unknown" or "irrational"
    double phi = 0.0;
    double delta_gap = 0.0;
    ValidationVector v;  ///< empty when skipped
    GazeVector s;        ///< empty when skipped
    bool skipped = false;
    bool reset = false;

    double probability_of(const std::string& goal_id) const;
    double total() const;
};

/// One streaming estimation session. Single writer; not internally synchronized.
class Session {
public:
    /// Throws ParameterError / PreconditionError on invalid configuration or an empty goal set.
    Session(SessionConfig config, GoalSet goals);

    IntentEstimate observe(const Observation& obs);

    void add_goal(Goal goal);
    void remove_goal(const std::string& id);
    /// Swaps HMM parameters mid-session. Keeps the belief, trims the evidence
    /// window and restarts path history.
    void update_params(const HmmParams& params);

    /// Estimate describing the current belief without consuming an observation.
    IntentEstimate current_estimate() const;
    const std::vector<IntentEstimate>& export_trace() const { return trace_; }
    std::vector<HiddenState> viterbi_path() const;

    const GoalSet& goals() const { return goals_; }
    const SessionConfig& config() const { return config_; }
    const TransitionMatrix& transition() const { return transition_; }
    const Belief& belief() const { return belief_; }
    const std::vector<ValidationVector>& validation_history() const { return v_ring_; }
    std::size_t decoded_steps() const { return trellis_.size(); }

private:
    IntentEstimate make_estimate(double t, bool skipped) const;

    SessionConfig config_;
    GoalSet goals_;
    TransitionMatrix transition_;
    Belief belief_;
    std::vector<ValidationVector> v_ring_;
    Trellis trellis_;
    std::vector<IntentEstimate> trace_;
    std::optional<Vec3> previous_hand_;
    std::optional<double> last_t_;
    double phi_ = 0.0;
    double delta_ = 0.0;
};

}  // namespace intent
