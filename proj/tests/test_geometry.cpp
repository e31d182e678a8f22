#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "intent/error.hpp"
#include "intent/geometry.hpp"

using namespace intent;

TEST(Geometry, NormalizedRejectsZero) {
    EXPECT_THROW(normalized({0, 0, 0}), InvalidInputError);
    const Vec3 n = normalized({3, 0, 4});
    EXPECT_NEAR(n.x, 0.6, 1e-15);
    EXPECT_NEAR(n.z, 0.8, 1e-15);
}

TEST(Geometry, AnyOrthogonalIsUnitAndOrthogonal) {
    for (const Vec3 v : {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}, normalized({1, 2, 3}), normalized({-5, 0.1, 0.1})}) {
        const Vec3 o = any_orthogonal(v);
        EXPECT_NEAR(o.norm(), 1.0, 1e-12);
        EXPECT_NEAR(o.dot(v), 0.0, 1e-12);
    }
}

TEST(Geometry, RotateQuarterTurn) {
    const Vec3 r = rotate({1, 0, 0}, {0, 0, 1}, std::numbers::pi / 2);
    EXPECT_NEAR(r.x, 0.0, 1e-15);
    EXPECT_NEAR(r.y, 1.0, 1e-15);
}

TEST(Geometry, SlerpEndpointsAndMidpoint) {
    const Vec3 a{1, 0, 0}, b{0, 1, 0};
    EXPECT_NEAR((slerp(a, b, 0.0) - a).norm(), 0.0, 1e-15);
    EXPECT_NEAR((slerp(a, b, 1.0) - b).norm(), 0.0, 1e-15);
    const Vec3 mid = slerp(a, b, 0.5);
    EXPECT_NEAR(mid.x, std::sqrt(0.5), 1e-12);
    EXPECT_NEAR(mid.y, std::sqrt(0.5), 1e-12);
    const Vec3 anti = slerp(a, -a, 0.5);
    EXPECT_NEAR(anti.norm(), 1.0, 1e-12);
    EXPECT_NEAR(anti.dot(a), 0.0, 1e-12);
}

TEST(GoalSet, RejectsDuplicatesAndNonFinite) {
    EXPECT_THROW(GoalSet({{"a", "", {0, 0, 0}}, {"a", "", {1, 0, 0}}}), DuplicateGoalError);
    EXPECT_THROW(GoalSet({{"a", "", {NAN, 0, 0}}}), InvalidInputError);
}

TEST(GoalSet, AddRemoveKeepOrder) {
    GoalSet gs({{"a", "", {0, 0, 0}}, {"b", "", {1, 0, 0}}});
    gs.add({"c", "", {2, 0, 0}});
    EXPECT_EQ(*gs.index_of("c"), 2u);
    EXPECT_EQ(gs.remove("a"), 0u);
    EXPECT_EQ(gs[0].id, "b");
    EXPECT_THROW(gs.remove("zzz"), UnknownGoalError);
    EXPECT_THROW(gs.add({"b", "", {0, 0, 0}}), DuplicateGoalError);
}
