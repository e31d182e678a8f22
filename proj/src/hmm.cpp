#include "intent/hmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "intent/error.hpp"
#include "intent/kernels.hpp"

namespace intent {

namespace {

constexpr double kConstraintSlack = 1e-12;

bool in_unit_interval(double x) { return x >= 0.0 && x <= 1.0; }

void check_probability(const char* name, double x) {
    if (!in_unit_interval(x)) {
        std::ostringstream os;
        os << name << " must lie in [0, 1], got " << x;
        throw ParameterError(os.str());
    }
}

Belief normalize_or_empty(std::vector<double> scores) {
    const double total = std::accumulate(scores.begin(), scores.end(), 0.0);
    if (!(total > 0.0)) {
        return {};
    }
    for (double& x : scores) {
        x /= total;
    }
    return scores;
}

}  // namespace

void HmmParams::validate() const {
    check_probability("alpha", alpha);
    check_probability("beta", beta);
    check_probability("gamma", gamma);
    check_probability("delta", delta);
    if (m < 1) {
        throw ParameterError("m must be a positive integer, got " + std::to_string(m));
    }
}

void HmmParams::validate_for(std::size_t goal_count) const {
    validate();
    const double lhs = static_cast<double>(goal_count) * beta + gamma;
    if (lhs > 1.0 + kConstraintSlack) {
        std::ostringstream os;
        os << "transition constraint g*beta + gamma <= 1 violated: " << goal_count << "*" << beta << " + " << gamma
           << " = " << lhs;
        throw ParameterError(os.str());
    }
}

HiddenState HiddenState::from_index(std::size_t index, std::size_t goal_count) {
    if (index < goal_count) {
        return goal_at(index);
    }
    if (index == goal_count) {
        return unknown();
    }
    return irrational();
}

std::size_t HiddenState::index(std::size_t goal_count) const {
    switch (kind) {
        case Kind::Goal:
            return goal;
        case Kind::Unknown:
            return goal_count;
        case Kind::Irrational:
            return goal_count + 1;
    }
    return goal_count;
}

std::string to_string(const HiddenState& s) {
    switch (s.kind) {
        case HiddenState::Kind::Goal:
            return "goal" + std::to_string(s.goal + 1);
        case HiddenState::Kind::Unknown:
            return "unknown";
        case HiddenState::Kind::Irrational:
            return "irrational";
    }
    return "unknown";
}

TransitionMatrix::TransitionMatrix(std::size_t goal_count, std::vector<double> row_major)
    : goal_count_(goal_count), data_(std::move(row_major)) {
    if (data_.size() != states() * states()) {
        throw InvalidInputError("transition matrix data does not match its state count");
    }
}

TransitionMatrix build_transition(const HmmParams& params, std::size_t goal_count) {
    if (goal_count < 1) {
        throw ParameterError("transition matrix needs at least one goal");
    }
    params.validate_for(goal_count);
    const std::size_t s = goal_count + 2;
    const std::size_t unknown = goal_count;
    const std::size_t irrational = goal_count + 1;
    std::vector<double> t(s * s, 0.0);
    for (std::size_t i = 0; i < goal_count; ++i) {
        t[i * s + i] = 1.0 - params.alpha;
        t[i * s + unknown] = params.alpha;
    }
    for (std::size_t j = 0; j < goal_count; ++j) {
        t[unknown * s + j] = params.beta;
    }
    const double stay = 1.0 - static_cast<double>(goal_count) * params.beta - params.gamma;
    t[unknown * s + unknown] = std::max(stay, 0.0);
    t[unknown * s + irrational] = params.gamma;
    t[irrational * s + unknown] = params.delta;
    t[irrational * s + irrational] = 1.0 - params.delta;
    return TransitionMatrix(goal_count, std::move(t));
}

double phi(std::span<const std::vector<double>> history, int m) {
    if (history.empty()) {
        throw PreconditionError("phi needs at least one validation vector");
    }
    if (m < 1) {
        throw PreconditionError("phi window must be positive");
    }
    const std::size_t window = std::min<std::size_t>(static_cast<std::size_t>(m), history.size());
    const auto recent = history.subspan(history.size() - window);
    const std::size_t g = recent.front().size();
    std::vector<double> mean(g, 0.0);
    for (const auto& v : recent) {
        if (v.size() != g) {
            throw InvalidInputError("validation history has inconsistent lengths");
        }
        for (std::size_t j = 0; j < g; ++j) {
            mean[j] += v[j];
        }
    }
    double best = 0.0;
    for (double x : mean) {
        best = std::max(best, x / static_cast<double>(window));
    }
    return best;
}

double delta_gap(std::span<const double> v) {
    double first = 0.0, second = 0.0;
    bool have_first = false;
    for (double x : v) {
        if (!have_first || x > first) {
            if (have_first) {
                second = std::max(second, first);
            }
            first = x;
            have_first = true;
        } else if (x > second) {
            second = x;
        }
    }
    return first - second;
}

EmissionRow raw_emission_row(std::span<const double> v, double phi_value) {
    if (v.empty()) {
        throw InvalidInputError("validation vector is empty");
    }
    if (!in_unit_interval(phi_value)) {
        throw InvalidInputError("phi must lie in [0, 1]");
    }
    for (double x : v) {
        if (!in_unit_interval(x)) {
            throw InvalidInputError("validation components must lie in [0, 1]");
        }
    }
    const std::size_t g = v.size();
    EmissionRow row(g + 2, 0.0);
    if (phi_value > 0.5) {
        for (std::size_t j = 0; j < g; ++j) {
            row[j] = std::tanh(v[j]);
        }
        row[g] = std::tanh(1.0 - delta_gap(v));
    } else {
        row[g] = std::tanh(0.1);
        row[g + 1] = std::tanh(1.0 - phi_value);
    }
    return row;
}

EmissionRow emission_row(std::span<const double> v, double phi_value) {
    EmissionRow row = raw_emission_row(v, phi_value);
    const double total = std::accumulate(row.begin(), row.end(), 0.0);
    if (!(total > 0.0)) {
        std::fill(row.begin(), row.end(), 0.0);
        row[v.size()] = 1.0;
        return row;
    }
    for (double& x : row) {
        x /= total;
    }
    return row;
}

Belief initial_belief(std::size_t goal_count) {
    if (goal_count < 1) {
        throw PreconditionError("initial belief needs at least one goal");
    }
    Belief b(goal_count + 2, 0.0);
    b[goal_count] = 1.0;
    return b;
}

std::size_t argmax(std::span<const double> values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best]) {
            best = i;
        }
    }
    return best;
}

StepResult viterbi_step(std::span<const double> prev, const TransitionMatrix& transition,
                        std::span<const double> row) {
    const std::size_t s = transition.states();
    if (prev.size() != s || row.size() != s) {
        throw InvalidInputError("belief, transition and emission dimensions disagree");
    }
    StepResult out;
    out.belief.assign(s, 0.0);
    out.backpointers.assign(s, 0);
    kernels::max_product(prev, transition.data(), out.belief, out.backpointers);
    for (std::size_t j = 0; j < s; ++j) {
        out.belief[j] *= row[j];
    }
    Belief normalized = normalize_or_empty(out.belief);
    if (normalized.empty()) {
        out.belief = initial_belief(transition.goal_count());
        out.reset = true;
    } else {
        out.belief = std::move(normalized);
    }
    return out;
}

Belief viterbi_init(std::span<const double> initial, std::span<const double> row) {
    if (initial.size() != row.size()) {
        throw InvalidInputError("initial belief and emission dimensions disagree");
    }
    std::vector<double> scores(initial.size());
    for (std::size_t j = 0; j < initial.size(); ++j) {
        scores[j] = initial[j] * row[j];
    }
    Belief b = normalize_or_empty(std::move(scores));
    if (b.empty()) {
        throw PreconditionError("initial belief and first emission row have disjoint support");
    }
    return b;
}

void Trellis::push(std::vector<std::uint32_t> backpointers) {
    if (steps_.size() == capacity_) {
        steps_.pop_front();
    }
    steps_.push_back(std::move(backpointers));
}

std::vector<HiddenState> viterbi_path(const Trellis& trellis, std::span<const double> final_belief) {
    if (trellis.empty()) {
        throw PreconditionError("viterbi path needs at least one recorded step");
    }
    const std::size_t s = final_belief.size();
    if (s < 3) {
        throw InvalidInputError("belief must cover at least one goal plus the two special states");
    }
    const std::size_t g = s - 2;
    std::vector<HiddenState> path(trellis.size());
    std::size_t state = argmax(final_belief);
    for (std::size_t k = trellis.size(); k-- > 0;) {
        path[k] = HiddenState::from_index(state, g);
        if (k > 0) {
            state = trellis.step(k)[state];
        }
    }
    return path;
}

BatchResult batch_viterbi(const TransitionMatrix& transition, std::span<const double> initial,
                          std::span<const EmissionRow> rows) {
    if (rows.empty()) {
        throw PreconditionError("batch viterbi needs at least one emission row");
    }
    const std::size_t s = transition.states();
    const std::size_t k = rows.size();
    if (initial.size() != s) {
        throw InvalidInputError("initial belief dimension disagrees with the transition matrix");
    }
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();
    auto safe_log = [](double x) { return x > 0.0 ? std::log(x) : kNegInf; };

    std::vector<std::vector<double>> score(k, std::vector<double>(s, kNegInf));
    std::vector<std::vector<std::size_t>> back(k, std::vector<std::size_t>(s, 0));
    for (std::size_t j = 0; j < s; ++j) {
        if (rows[0].size() != s) {
            throw InvalidInputError("emission row dimension disagrees with the transition matrix");
        }
        score[0][j] = safe_log(initial[j]) + safe_log(rows[0][j]);
    }
    for (std::size_t t = 1; t < k; ++t) {
        if (rows[t].size() != s) {
            throw InvalidInputError("emission row dimension disagrees with the transition matrix");
        }
        for (std::size_t j = 0; j < s; ++j) {
            double best = kNegInf;
            std::size_t arg = 0;
            bool found = false;
            for (std::size_t i = 0; i < s; ++i) {
                if (transition(i, j) <= 0.0) {
                    continue;
                }
                const double cand = score[t - 1][i] + std::log(transition(i, j));
                if (!found || cand > best) {
                    best = cand;
                    arg = i;
                    found = true;
                }
            }
            score[t][j] = best + safe_log(rows[t][j]);
            back[t][j] = arg;
        }
    }

    BatchResult out;
    out.beliefs.reserve(k);
    for (const auto& step : score) {
        const double top = *std::max_element(step.begin(), step.end());
        if (top == kNegInf) {
            throw PreconditionError("emission sequence has zero probability under the model");
        }
        Belief b(s);
        double total = 0.0;
        for (std::size_t j = 0; j < s; ++j) {
            b[j] = std::exp(step[j] - top);
            total += b[j];
        }
        for (double& x : b) {
            x /= total;
        }
        out.beliefs.push_back(std::move(b));
    }

    out.path.resize(k);
    std::size_t state = argmax(out.beliefs.back());
    for (std::size_t t = k; t-- > 0;) {
        out.path[t] = HiddenState::from_index(state, transition.goal_count());
        if (t > 0) {
            state = back[t][state];
        }
    }
    return out;
}

}  // namespace intent
