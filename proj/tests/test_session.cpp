#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "intent/error.hpp"
#include "intent/scenario.hpp"
#include "intent/session.hpp"

using namespace intent;

namespace {

GoalSet two_goals() { return GoalSet({{"A", "A", {1.5, 0, 1}}, {"B", "B", {0, 1.5, 1}}}); }

Observation obs(double t, Vec3 hand, Vec3 forward = {1, 0, 0}, Vec3 head = {0, 0, 1.2}) {
    Observation o;
    o.t = t;
    o.hand = hand;
    o.head = {head, forward};
    return o;
}

std::vector<Goal> many_goals(int n) {
    std::vector<Goal> gs;
    for (int i = 0; i < n; ++i) {
        gs.push_back({"g" + std::to_string(i), "", {std::cos(i * 0.3), std::sin(i * 0.3), 1}});
    }
    return gs;
}

std::vector<IntentEstimate> run(const SessionConfig& c, const GoalSet& goals, const std::vector<Observation>& stream) {
    Session s(c, goals);
    for (const auto& o : stream) s.observe(o);
    return s.export_trace();
}

Vec3 rotz(const Vec3& v, double a) { return {std::cos(a) * v.x - std::sin(a) * v.y, std::sin(a) * v.x + std::cos(a) * v.y, v.z}; }
Vec3 rotx(const Vec3& v, double a) { return {v.x, std::cos(a) * v.y - std::sin(a) * v.z, std::sin(a) * v.y + std::cos(a) * v.z}; }

}  // namespace

TEST(Session, StartsInUnknown) {
    Session s(SessionConfig{}, builtin_goal_layout());
    const auto e = s.current_estimate();
    EXPECT_EQ(e.p_unknown, 1.0);
    EXPECT_EQ(e.argmax, HiddenState::unknown());
    EXPECT_TRUE(s.export_trace().empty());
}

TEST(Session, RejectsEmptyGoalsAndViolatedConstraint) {
    EXPECT_THROW(Session(SessionConfig{}, GoalSet{}), PreconditionError);
    EXPECT_THROW(Session(SessionConfig{}, GoalSet(many_goals(20))), ParameterError);
    EXPECT_NO_THROW(Session(SessionConfig{}, GoalSet(many_goals(19))));
    SessionConfig bad;
    bad.epsilon_motion = 0.0;
    EXPECT_THROW(Session(bad, two_goals()), ParameterError);
}

TEST(Session, StationarySampleIsSkipped) {
    Session s(SessionConfig{}, two_goals());
    const auto first = s.observe(obs(0.0, {0.2, 0, 1}));
    EXPECT_TRUE(first.skipped);
    s.observe(obs(0.1, {0.3, 0, 1}));
    const Belief before = s.belief();
    const auto e = s.observe(obs(0.2, {0.3, 0, 1}));
    EXPECT_TRUE(e.skipped);
    EXPECT_EQ(s.belief(), before);
    EXPECT_TRUE(e.v.empty());
}

TEST(Session, PreviousHandHeldThroughJitter) {
    // Sub-threshold steps accumulate against the held position, not the last sample.
    Session s(SessionConfig{}, two_goals());
    s.observe(obs(0.0, {0.2, 0, 1}));
    EXPECT_TRUE(s.observe(obs(0.1, {0.2006, 0, 1})).skipped);
    EXPECT_FALSE(s.observe(obs(0.2, {0.2012, 0, 1})).skipped);
}

TEST(Session, FirstMovingStepWithGazeAway) {
    Session s(SessionConfig{}, two_goals());
    s.observe(obs(0.0, {0.2, 0, 1}, {-1, 0, 0}));
    const auto e = s.observe(obs(0.1, {0.2, -0.05, 1}, {-1, 0, 0}));
    ASSERT_FALSE(e.skipped);
    EXPECT_EQ(e.s, (GazeVector{0, 0}));
    EXPECT_EQ(e.phi, 0.0);
    // From all mass on Unknown: Unknown keeps 0.85, Irrational receives 0.05.
    const double u = 0.85 * std::tanh(0.1);
    const double x = 0.05 * std::tanh(1.0);
    EXPECT_NEAR(e.p_unknown, u / (u + x), 1e-12);
    EXPECT_NEAR(e.p_irrational, x / (u + x), 1e-12);
    EXPECT_NEAR(e.p_unknown, 0.690, 1e-3);
    EXPECT_NEAR(e.p_irrational, 0.310, 1e-3);
    EXPECT_EQ(e.per_goal[0].second, 0.0);
    EXPECT_EQ(e.argmax, HiddenState::unknown());
}

TEST(Session, StraightApproachCommitsToTarget) {
    const Scenario sc = builtin_scenarios().at("straight_approach");
    const auto trace = run(SessionConfig{}, sc.goals, synthesize(sc));
    EXPECT_GT(trace.back().probability_of("A"), 0.9);
    EXPECT_EQ(trace.back().argmax_label, "A");
}

TEST(Session, NonSkippedEstimatesAreNormalized) {
    const Scenario sc = builtin_scenarios().at("sweep_base");
    for (const auto& e : run(SessionConfig{}, sc.goals, synthesize(sc))) {
        EXPECT_NEAR(e.total(), 1.0, 1e-9);
        for (double x : e.v) {
            EXPECT_GE(x, 0.0);
            EXPECT_LE(x, 1.0);
        }
    }
}

TEST(Session, TimestampsMustIncrease) {
    Session s(SessionConfig{}, two_goals());
    s.observe(obs(1.0, {0.2, 0, 1}));
    EXPECT_THROW(s.observe(obs(1.0, {0.3, 0, 1})), StreamError);
    EXPECT_THROW(s.observe(obs(0.5, {0.3, 0, 1})), StreamError);
    EXPECT_EQ(s.export_trace().size(), 1u);
}

TEST(Session, RejectedObservationLeavesStateUntouched) {
    Session s(SessionConfig{}, two_goals());
    s.observe(obs(0.0, {0.2, 0, 1}));
    s.observe(obs(0.1, {0.3, 0, 1}));
    const Belief before = s.belief();
    EXPECT_THROW(s.observe(obs(0.2, {0.4, 0, 1}, {2, 0, 0})), InvalidInputError);
    EXPECT_THROW(s.observe(obs(0.2, {NAN, 0, 1})), InvalidInputError);
    EXPECT_EQ(s.belief(), before);
    EXPECT_EQ(s.export_trace().size(), 2u);
    EXPECT_NO_THROW(s.observe(obs(0.2, {0.4, 0, 1})));
}

TEST(Session, AddGoalInsertsZeroMass) {
    Session s(SessionConfig{}, GoalSet({{"A", "", {1.5, 0, 1}}}));
    s.observe(obs(0.0, {0.2, 0, 1}));
    s.observe(obs(0.1, {0.3, 0, 1}));
    s.observe(obs(0.2, {0.4, 0, 1}));
    const Belief before = s.belief();
    ASSERT_EQ(before.size(), 3u);
    s.add_goal({"B", "", {0, 1.5, 1}});
    EXPECT_EQ(s.belief(), (Belief{before[0], 0.0, before[1], before[2]}));
    EXPECT_EQ(s.decoded_steps(), 0u);
    for (const auto& v : s.validation_history()) {
        EXPECT_EQ(v.size(), 2u);
        EXPECT_EQ(v[1], 0.0);
    }
    EXPECT_EQ(s.transition().goal_count(), 2u);
}

TEST(Session, AddGoalErrors) {
    Session s(SessionConfig{}, GoalSet(many_goals(19)));
    EXPECT_THROW(s.add_goal({"g0", "", {0, 0, 0}}), DuplicateGoalError);
    EXPECT_THROW(s.add_goal({"extra", "", {0, 0, 0}}), ParameterError);
    EXPECT_EQ(s.goals().size(), 19u);
    EXPECT_EQ(s.belief().size(), 21u);
}

TEST(Session, CoincidentGoalsStayTied) {
    const Scenario base = builtin_scenarios().at("fig7_left");
    std::vector<Goal> gs = base.goals.goals();
    gs.push_back({"twin", "", gs[0].position});
    const auto trace = run(SessionConfig{}, GoalSet(gs), synthesize(base));
    for (const auto& e : trace) {
        EXPECT_EQ(e.probability_of(gs[0].id), e.probability_of("twin"));
    }
}

TEST(Session, RemovingZeroMassGoalChangesNothing) {
    Session s(SessionConfig{}, two_goals());
    s.observe(obs(0.0, {0.2, 0, 1}));
    s.observe(obs(0.1, {0.3, 0, 1}));
    s.add_goal({"C", "", {-1, 0, 1}});
    const Belief before = s.belief();
    s.remove_goal("C");
    EXPECT_EQ(s.belief(), (Belief{before[0], before[1], before[3], before[4]}));
}

TEST(Session, RemovingTheLeadingGoal) {
    const Scenario sc = builtin_scenarios().at("straight_approach");
    Session s(SessionConfig{}, sc.goals);
    for (const auto& o : synthesize(sc)) s.observe(o);
    ASSERT_GT(s.belief()[0], 0.9);
    s.remove_goal("A");
    double total = 0;
    for (double x : s.belief()) total += x;
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_EQ(s.current_estimate().argmax, HiddenState::unknown());
    EXPECT_EQ(s.decoded_steps(), 0u);
}

TEST(Session, RemovingAllMassResets) {
    Session s(SessionConfig{}, two_goals());
    // Straight at A, gaze on A and perpendicular to B: v = (1, 0), so only A can emit.
    double t = 0;
    for (int k = 0; k <= 3; ++k, t += 1.0 / 30) {
        s.observe(obs(t, {0.2 + 0.01 * k, 0, 1}, {1, 0, 0}, {0, 0, 1}));
    }
    ASSERT_EQ(s.belief()[0], 1.0);
    s.remove_goal("A");
    EXPECT_EQ(s.belief(), initial_belief(1));
}

TEST(Session, RemoveErrors) {
    Session s(SessionConfig{}, two_goals());
    EXPECT_THROW(s.remove_goal("nope"), UnknownGoalError);
    s.remove_goal("A");
    EXPECT_THROW(s.remove_goal("B"), PreconditionError);
    EXPECT_EQ(s.goals().size(), 1u);
}

TEST(Session, UpdateParamsRebuildsAndTrims) {
    Session s(SessionConfig{}, two_goals());
    for (int k = 0; k < 40; ++k) s.observe(obs(k * 0.1, {0.2 + 0.01 * k, 0, 1}));
    EXPECT_EQ(s.validation_history().size(), 30u);
    HmmParams p;
    p.alpha = 0.8;
    p.m = 10;
    s.update_params(p);
    EXPECT_EQ(s.validation_history().size(), 10u);
    EXPECT_EQ(s.transition()(0, 2), 0.8);
    EXPECT_EQ(s.decoded_steps(), 0u);
    HmmParams bad;
    bad.beta = 0.6;
    EXPECT_THROW(s.update_params(bad), ParameterError);
    EXPECT_EQ(s.config().params.alpha, 0.8);
}

TEST(Session, TraceIsReproducible) {
    const Scenario sc = builtin_scenarios().at("fig7_middle");
    const auto stream = synthesize(sc);
    const auto a = run(SessionConfig{}, sc.goals, stream);
    const auto b = run(SessionConfig{}, sc.goals, stream);
    ASSERT_EQ(a.size(), stream.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        EXPECT_EQ(a[k].per_goal, b[k].per_goal);
        EXPECT_EQ(a[k].p_unknown, b[k].p_unknown);
        EXPECT_EQ(a[k].p_irrational, b[k].p_irrational);
    }
}

TEST(Session, RigidMotionInvariance) {
    const Scenario sc = builtin_scenarios().at("fig7_right");
    const auto stream = synthesize(sc);
    const auto base = run(SessionConfig{}, sc.goals, stream);

    const Vec3 shift{3.0, -2.0, 0.5};
    auto tf = [&](const Vec3& v) { return rotx(rotz(v, 1.1), 0.4); };
    std::vector<Goal> gs = sc.goals.goals();
    for (auto& g : gs) g.position = tf(g.position) + shift;
    std::vector<Observation> moved = stream;
    for (auto& o : moved) {
        o.hand = tf(o.hand) + shift;
        o.head.position = tf(o.head.position) + shift;
        o.head.forward = normalized(tf(o.head.forward));
    }
    const auto other = run(SessionConfig{}, GoalSet(gs), moved);
    ASSERT_EQ(other.size(), base.size());
    for (std::size_t k = 0; k < base.size(); ++k) {
        EXPECT_EQ(base[k].skipped, other[k].skipped) << k;
        for (std::size_t j = 0; j < base[k].per_goal.size(); ++j) {
            EXPECT_NEAR(base[k].per_goal[j].second, other[k].per_goal[j].second, 1e-9) << k;
        }
        EXPECT_NEAR(base[k].p_unknown, other[k].p_unknown, 1e-9) << k;
        EXPECT_NEAR(base[k].p_irrational, other[k].p_irrational, 1e-9) << k;
    }
}

TEST(Session, JitterSamplesDoNotChangeTheEstimates) {
    const Scenario sc = builtin_scenarios().at("sweep_base");
    const auto stream = synthesize(sc);
    const SessionConfig cfg;
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1, 1);

    std::vector<Observation> noisy;
    Vec3 held = stream.front().hand;
    for (std::size_t k = 0; k < stream.size(); ++k) {
        noisy.push_back(stream[k]);
        if ((stream[k].hand - held).norm() >= cfg.epsilon_motion) held = stream[k].hand;
        const double next_t = k + 1 < stream.size() ? stream[k + 1].t : stream[k].t + 1.0;
        const int extra = static_cast<int>(rng() % 4);
        for (int j = 1; j <= extra; ++j) {
            Observation o = stream[k];
            o.t = stream[k].t + (next_t - stream[k].t) * j / (extra + 1);
            const Vec3 d = Vec3{u(rng), u(rng), u(rng)};
            o.hand = held + d * (0.9 * cfg.epsilon_motion / std::max(1e-9, d.norm()) * std::abs(u(rng)));
            noisy.push_back(o);
        }
    }
    auto moving = [](const std::vector<IntentEstimate>& trace) {
        std::vector<IntentEstimate> out;
        for (const auto& e : trace) {
            if (!e.skipped) out.push_back(e);
        }
        return out;
    };
    const auto a = moving(run(cfg, sc.goals, stream));
    const auto b = moving(run(cfg, sc.goals, noisy));
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        EXPECT_EQ(a[k].per_goal, b[k].per_goal);
        EXPECT_EQ(a[k].p_unknown, b[k].p_unknown);
        EXPECT_EQ(a[k].p_irrational, b[k].p_irrational);
    }
}

TEST(Session, IrrationalWithinThreeWindowsWhenGazeIsAway) {
    const GoalSet goals = builtin_goal_layout();
    Session s(SessionConfig{}, goals);
    std::size_t moving = 0;
    std::optional<std::size_t> hit;
    for (int k = 0; k < 300; ++k) {
        // Circle behind the head while looking backwards, away from every goal.
        const double a = 0.05 * k;
        const auto e = s.observe(obs(k / 30.0, {-0.4 + 0.1 * std::cos(a), 0.1 * std::sin(a), 1.0}, {-1, 0, 0}));
        if (e.skipped) continue;
        ++moving;
        EXPECT_EQ(e.s, GazeVector(3, 0.0));
        if (!hit && e.argmax == HiddenState::irrational()) hit = moving;
    }
    ASSERT_TRUE(hit.has_value());
    EXPECT_LE(*hit, 3u * 30u);
}

TEST(Session, ViterbiPathAvoidsForbiddenEdges) {
    const Scenario sc = builtin_scenarios().at("fig7_middle");
    Session s(SessionConfig{}, sc.goals);
    for (const auto& o : synthesize(sc)) s.observe(o);
    const auto path = s.viterbi_path();
    const std::size_t g = sc.goals.size();
    for (std::size_t k = 1; k < path.size(); ++k) {
        EXPECT_GT(s.transition()(path[k - 1].index(g), path[k].index(g)), 0.0) << k;
    }
}
