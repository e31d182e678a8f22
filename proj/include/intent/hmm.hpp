#pragma once

// Goal-intention hidden Markov model.
//
// Hidden states are ordered [G_1 .. G_g, Unknown, Irrational]. Goals only
// connect to each other through Unknown, and Irrational is entered and left
// only through Unknown. Decoding is max-product (Viterbi) with per-step
// normalization; the normalized scores are reported as state probabilities.

#include <cstddef>
#include <cstdint>
#include <deque>
#include <span>
#include <string>
#include <vector>

namespace intent {

struct HmmParams {
    double alpha = 0.3;   ///< goal -> Unknown
    double beta = 0.05;   ///< Unknown -> each goal
    double gamma = 0.05;  ///< Unknown -> Irrational
    double delta = 0.1;   ///< Irrational -> Unknown
    int m = 30;           ///< evidence window for the rationality indicator

    /// Range checks independent of the goal count.
    void validate() const;
    /// Also checks goal_count * beta + gamma <= 1.
    void validate_for(std::size_t goal_count) const;
};

struct HiddenState {
    enum class Kind { Goal, Unknown, Irrational };
    Kind kind = Kind::Unknown;
    std::size_t goal = 0;  ///< zero-based goal index when kind == Goal

    static HiddenState goal_at(std::size_t i) { return {Kind::Goal, i}; }
    static HiddenState unknown() { return {Kind::Unknown, 0}; }
    static HiddenState irrational() { return {Kind::Irrational, 0}; }
    /// Inverse of index() for a model with `goal_count` goals.
    static HiddenState from_index(std::size_t index, std::size_t goal_count);

    std::size_t index(std::size_t goal_count) const;
    bool is_goal() const { return kind == Kind::Goal; }
    bool operator==(const HiddenState&) const = default;
};

std::string to_string(const HiddenState& s);

/// Dense (g+2) x (g+2) row-stochastic matrix.
class TransitionMatrix {
public:
    TransitionMatrix() = default;
    TransitionMatrix(std::size_t goal_count, std::vector<double> row_major);

    std::size_t goal_count() const { return goal_count_; }
    std::size_t states() const { return goal_count_ + 2; }
    double operator()(std::size_t from, std::size_t to) const { return data_[from * states() + to]; }
    std::span<const double> data() const { return data_; }

private:
    std::size_t goal_count_ = 0;
    std::vector<double> data_;
};

TransitionMatrix build_transition(const HmmParams& params, std::size_t goal_count);

/// Max component of the mean of the last min(m, available) validation vectors.
double phi(std::span<const std::vector<double>> history, int m);

/// Largest minus second-largest component (second-largest is 0 for one goal).
double delta_gap(std::span<const double> v);

using EmissionRow = std::vector<double>;
using Belief = std::vector<double>;

/// Row before normalization (zeta = 1).
EmissionRow raw_emission_row(std::span<const double> v, double phi);
/// Normalized emission row over g+2 states.
EmissionRow emission_row(std::span<const double> v, double phi);

/// All mass on Unknown.
Belief initial_belief(std::size_t goal_count);

/// Lowest index among the maxima.
std::size_t argmax(std::span<const double> values);

struct StepResult {
    Belief belief;
    std::vector<std::uint32_t> backpointers;
    bool reset = false;  ///< every score vanished; belief restarted from initial_belief
};

/// One online max-product step from the previous belief.
StepResult viterbi_step(std::span<const double> prev, const TransitionMatrix& transition,
                        std::span<const double> row);

/// First step of a trellis that has no predecessor: normalize(initial * row).
Belief viterbi_init(std::span<const double> initial, std::span<const double> row);

/// Bounded history of backpointers for path reconstruction.
class Trellis {
public:
    static constexpr std::size_t kDefaultCapacity = 4096;

    explicit Trellis(std::size_t capacity = kDefaultCapacity) : capacity_(capacity == 0 ? 1 : capacity) {}

    void push(std::vector<std::uint32_t> backpointers);
    void clear() { steps_.clear(); }
    std::size_t size() const { return steps_.size(); }
    bool empty() const { return steps_.empty(); }
    std::size_t capacity() const { return capacity_; }
    const std::vector<std::uint32_t>& step(std::size_t k) const { return steps_[k]; }

private:
    std::size_t capacity_;
    std::deque<std::vector<std::uint32_t>> steps_;
};

/// Backtrace from the argmax of `final_belief` over the retained steps.
std::vector<HiddenState> viterbi_path(const Trellis& trellis, std::span<const double> final_belief);

struct BatchResult {
    std::vector<HiddenState> path;
    std::vector<Belief> beliefs;  ///< per-step normalized scores
};

/// Whole-sequence Viterbi in the log domain. The first row is combined with
/// `initial` directly (no transition), later rows follow the recursion.
BatchResult batch_viterbi(const TransitionMatrix& transition, std::span<const double> initial,
                          std::span<const EmissionRow> rows);

}  // namespace intent
