#include "intent/geometry.hpp"

#include <algorithm>

#include "intent/error.hpp"

namespace intent {

Vec3 normalized(const Vec3& v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw InvalidInputError("cannot normalize a zero or non-finite vector");
    }
    return v / n;
}

Vec3 any_orthogonal(const Vec3& n) {
    // Cross with the world axis least aligned with n.
    const double ax = std::abs(n.x), ay = std::abs(n.y), az = std::abs(n.z);
    Vec3 helper{0.0, 0.0, 1.0};
    if (ax <= ay && ax <= az) {
        helper = {1.0, 0.0, 0.0};
    } else if (ay <= az) {
        helper = {0.0, 1.0, 0.0};
    }
    return normalized(n.cross(helper));
}

Vec3 rotate(const Vec3& v, const Vec3& axis, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return v * c + axis.cross(v) * s + axis * (axis.dot(v) * (1.0 - c));
}

Vec3 slerp(const Vec3& a, const Vec3& b, double t) {
    const double cosang = std::clamp(a.dot(b), -1.0, 1.0);
    const double ang = std::acos(cosang);
    if (ang < 1e-12) {
        return a;
    }
    if (std::abs(ang - M_PI) < 1e-9) {
        // Antipodal: the great circle is ambiguous, turn about any orthogonal axis.
        return rotate(a, any_orthogonal(a), ang * t);
    }
    const double s = std::sin(ang);
    return normalized(a * (std::sin((1.0 - t) * ang) / s) + b * (std::sin(t * ang) / s));
}

GoalSet::GoalSet(std::vector<Goal> goals) {
    goals_.reserve(goals.size());
    for (auto& g : goals) {
        add(std::move(g));
    }
}

std::optional<std::size_t> GoalSet::index_of(const std::string& id) const {
    const auto it = std::find_if(goals_.begin(), goals_.end(), [&](const Goal& g) { return g.id == id; });
    if (it == goals_.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - goals_.begin());
}

void GoalSet::add(Goal goal) {
    if (contains(goal.id)) {
        throw DuplicateGoalError("duplicate goal id '" + goal.id + "'");
    }
    if (!goal.position.finite()) {
        throw InvalidInputError("goal '" + goal.id + "' has a non-finite position");
    }
    goals_.push_back(std::move(goal));
}

std::size_t GoalSet::remove(const std::string& id) {
    const auto idx = index_of(id);
    if (!idx) {
        throw UnknownGoalError("unknown goal id '" + id + "'");
    }
    goals_.erase(goals_.begin() + static_cast<std::ptrdiff_t>(*idx));
    return *idx;
}

}  // namespace intent
