#include <gtest/gtest.h>

#include <random>

#include "intent/error.hpp"
#include "intent/robot.hpp"

using namespace intent;

namespace {

GoalSet abc() { return GoalSet({{"A", "", {1, 0, 0}}, {"B", "", {0, 1, 0}}, {"C", "", {-1, 0, 0}}}); }

IntentEstimate estimate(double pa, double pb, double pc, double pu) {
    IntentEstimate e;
    e.per_goal = {{"A", pa}, {"B", pb}, {"C", pc}};
    e.p_unknown = pu;
    e.p_irrational = 1.0 - pa - pb - pc - pu;
    const double vals[5] = {pa, pb, pc, pu, e.p_irrational};
    std::size_t best = 0;
    for (std::size_t i = 1; i < 5; ++i) {
        if (vals[i] > vals[best]) best = i;
    }
    e.argmax = HiddenState::from_index(best, 3);
    e.argmax_label = best < 3 ? e.per_goal[best].first : (best == 3 ? "unknown" : "irrational");
    return e;
}

}  // namespace

TEST(Agent, ConflictAbandonsTarget) {
    AgentRng rng(1);
    RobotState r;
    r.target = "A";
    const auto res = agent_step(r, AgentConfig{}, estimate(0.8, 0.05, 0.05, 0.1), abc(), Gesture::None, 0.1, rng);
    EXPECT_TRUE(res.robot.stopped);
    ASSERT_TRUE(res.robot.target.has_value());
    EXPECT_NE(*res.robot.target, "A");
    EXPECT_EQ(res.robot.position, r.position);
    ASSERT_GE(res.events.size(), 2u);
    EXPECT_EQ(res.events[0].kind, AgentEvent::Kind::Conflict);
    EXPECT_EQ(res.events[0].goal, "A");
    EXPECT_EQ(res.events[1].kind, AgentEvent::Kind::Retarget);
}

TEST(Agent, ConflictRetargetIsUniformOverOtherGoals) {
    AgentRng rng(5);
    int hits_b = 0, hits_c = 0;
    for (int i = 0; i < 4000; ++i) {
        RobotState r;
        r.target = "A";
        const auto res = agent_step(r, AgentConfig{}, estimate(0.9, 0, 0, 0.1), abc(), Gesture::None, 0.1, rng);
        (*res.robot.target == "B" ? hits_b : hits_c) += 1;
    }
    EXPECT_NEAR(hits_b / 4000.0, 0.5, 0.04);
    EXPECT_EQ(hits_b + hits_c, 4000);
}

TEST(Agent, ConflictAvoidMovesOtherwise) {
    AgentRng rng(1);
    RobotState r;
    r.target = "A";
    const auto res = agent_step(r, AgentConfig{}, estimate(0.1, 0.8, 0.05, 0.05), abc(), Gesture::None, 0.5, rng);
    EXPECT_FALSE(res.robot.stopped);
    EXPECT_NEAR(res.robot.position.x, 0.1, 1e-12);
    EXPECT_EQ(*res.robot.target, "A");
}

TEST(Agent, TeleopHoldsOnUnknown) {
    AgentRng rng(1);
    AgentConfig c;
    c.mode = AgentMode::Teleop;
    RobotState r;
    r.position = {0.2, 0.2, 0};
    r.target = "B";
    const auto res = agent_step(r, c, estimate(0.1, 0.1, 0.1, 0.7), abc(), Gesture::None, 0.1, rng);
    EXPECT_EQ(res.robot.position, r.position);
}

TEST(Agent, TeleopFollowsConfidentGoal) {
    AgentRng rng(1);
    AgentConfig c;
    c.mode = AgentMode::Teleop;
    RobotState r;
    const auto res = agent_step(r, c, estimate(0.02, 0.95, 0.01, 0.01), abc(), Gesture::None, 0.1, rng);
    EXPECT_EQ(*res.robot.target, "B");
    EXPECT_NEAR(res.robot.position.x, 0.0, 1e-15);
    EXPECT_NEAR(res.robot.position.y, 0.02, 1e-15);
    EXPECT_NEAR((res.robot.position - r.position).norm(), 0.02, 1e-15);
}

TEST(Agent, TeleopIgnoresWeakGoal) {
    AgentRng rng(1);
    AgentConfig c;
    c.mode = AgentMode::Teleop;
    RobotState r;
    const auto res = agent_step(r, c, estimate(0.05, 0.6, 0.05, 0.3), abc(), Gesture::None, 0.1, rng);
    EXPECT_FALSE(res.robot.target.has_value());
    EXPECT_EQ(res.robot.position, r.position);
}

TEST(Agent, StopGestureHalts) {
    AgentRng rng(1);
    RobotState r;
    r.target = "A";
    const auto res = agent_step(r, AgentConfig{}, estimate(0.1, 0.1, 0.1, 0.7), abc(), Gesture::Stop, 0.1, rng);
    EXPECT_TRUE(res.robot.stopped);
    EXPECT_EQ(res.robot.position, r.position);
    EXPECT_EQ(res.events.back().kind, AgentEvent::Kind::GestureStop);
}

TEST(Agent, ArrivalSnapsAndRetargets) {
    AgentRng rng(1);
    RobotState r;
    r.position = {0.99, 0, 0};
    r.target = "A";
    const auto res = agent_step(r, AgentConfig{}, estimate(0.0, 0.0, 0.0, 1.0), abc(), Gesture::None, 0.1, rng);
    EXPECT_EQ(res.robot.position, (Vec3{1, 0, 0}));
    EXPECT_NE(*res.robot.target, "A");
}

TEST(Agent, Errors) {
    AgentRng rng(1);
    RobotState r;
    r.target = "Z";
    EXPECT_THROW(agent_step(r, AgentConfig{}, estimate(0, 0, 0, 1), abc(), Gesture::None, 0.1, rng), InconsistencyError);
    r.target.reset();
    EXPECT_THROW(agent_step(r, AgentConfig{}, estimate(0, 0, 0, 1), abc(), Gesture::None, 0.0, rng), PreconditionError);
    AgentConfig bad;
    bad.theta_conflict = 0.0;
    EXPECT_THROW(agent_step(r, bad, estimate(0, 0, 0, 1), abc(), Gesture::None, 0.1, rng), ParameterError);
}

TEST(Agent, SeededRunsRepeatAndRespectSpeed) {
    auto simulate = [](std::uint64_t seed) {
        AgentRng rng(seed);
        std::mt19937_64 est_rng(77);
        std::uniform_real_distribution<double> u(0, 1);
        RobotState r;
        std::vector<Vec3> positions;
        AgentConfig c;
        for (int k = 0; k < 500; ++k) {
            const double a = u(est_rng), b = u(est_rng) * (1 - a);
            const auto e = estimate(a, b, 0.0, 1 - a - b);
            const Vec3 before = r.position;
            r = agent_step(r, c, e, abc(), Gesture::None, 0.05, rng).robot;
            EXPECT_LE((r.position - before).norm(), c.speed * 0.05 + 1e-12);
            positions.push_back(r.position);
        }
        return positions;
    };
    EXPECT_EQ(simulate(3), simulate(3));
}

TEST(AgentMode, Names) {
    EXPECT_EQ(agent_mode_from_string("teleop"), AgentMode::Teleop);
    EXPECT_EQ(agent_mode_from_string(to_string(AgentMode::ConflictAvoid)), AgentMode::ConflictAvoid);
    EXPECT_FALSE(agent_mode_from_string("chase").has_value());
}
