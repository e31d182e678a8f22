#include "intent/validation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "intent/error.hpp"
#include "intent/kernels.hpp"

namespace intent {

namespace {

constexpr double kGoalAtHead = 1e-6;
constexpr double kDegenerateColumn = 1e-9;

struct Basis {
    Vec3 u, w, axis;
};

// Orthonormal basis with `axis` as given and `u` the component of `reference`
// orthogonal to it (or any orthogonal direction when they are parallel).
Basis make_basis(const Vec3& axis_in, const Vec3& reference) {
    const Vec3 axis = normalized(axis_in);
    const Vec3 ortho = reference - axis * axis.dot(reference);
    const Vec3 u = ortho.norm() > 1e-9 ? normalized(ortho) : any_orthogonal(axis);
    return {u, axis.cross(u), axis};
}

}  // namespace

void SamplePattern::validate() const {
    if (count < 4) {
        throw InvalidInputError("sample pattern count must be >= 4, got " + std::to_string(count));
    }
    if (const auto* circle = std::get_if<PlanarCircle>(&shape)) {
        if (!circle->normal.finite() || circle->normal.norm() < 1e-12) {
            throw InvalidInputError("planar circle normal must be a finite non-zero vector");
        }
    }
}

GazeVector gaze_validation(const HeadPose& head, const GoalSet& goals) {
    if (!head.forward.finite() || std::abs(head.forward.norm() - 1.0) > kUnitTolerance) {
        throw InvalidInputError("head forward vector must be unit length");
    }
    if (!head.position.finite()) {
        throw InvalidInputError("head position must be finite");
    }
    GazeVector s(goals.size(), 0.0);
    for (std::size_t i = 0; i < goals.size(); ++i) {
        const Vec3 rel = goals[i].position - head.position;
        const double len = rel.norm();
        if (len < kGoalAtHead) {
            continue;
        }
        const double c = head.forward.dot(rel) / len;
        s[i] = std::clamp(c, 0.0, 1.0);
    }
    return s;
}

std::vector<Vec3> sample_candidate_points(const Vec3& center, double radius, const SamplePattern& pattern,
                                          const SampleFrame& frame, double min_radius) {
    pattern.validate();
    if (!(radius >= min_radius) || !std::isfinite(radius)) {
        throw PreconditionError("sampling radius " + std::to_string(radius) + " is below the motion threshold");
    }
    const auto n = static_cast<std::size_t>(pattern.count);
    std::vector<Vec3> points;
    points.reserve(n);

    if (const auto* circle = std::get_if<PlanarCircle>(&pattern.shape)) {
        const Basis b = make_basis(circle->normal, frame.reference);
        for (std::size_t i = 0; i < n; ++i) {
            const double theta = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n);
            points.push_back(center + (b.u * std::cos(theta) + b.w * std::sin(theta)) * radius);
        }
        return points;
    }

    const Basis b = make_basis(frame.axis, frame.reference);
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < n; ++i) {
        const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n);
        const double ring = std::sqrt(1.0 - z * z);
        const double theta = golden * static_cast<double>(i);
        const Vec3 dir = b.u * (ring * std::cos(theta)) + b.w * (ring * std::sin(theta)) + b.axis * z;
        points.push_back(center + dir * radius);
    }
    return points;
}

ModulatedDistances modulated_distance_matrix(std::span<const Vec3> points, const Vec3& hand, const GoalSet& goals) {
    if (points.empty()) {
        throw PreconditionError("modulated distance matrix needs at least one candidate point");
    }
    if (goals.empty()) {
        throw PreconditionError("modulated distance matrix needs at least one goal");
    }
    std::vector<double> xs, ys, zs;
    xs.reserve(points.size());
    ys.reserve(points.size());
    zs.reserve(points.size());
    for (const auto& p : points) {
        xs.push_back(p.x);
        ys.push_back(p.y);
        zs.push_back(p.z);
    }
    const kernels::PointsSoA soa{xs, ys, zs};

    ModulatedDistances md(points.size(), goals.size());
    for (std::size_t j = 0; j < goals.size(); ++j) {
        kernels::distances(soa, goals[j].position, md.column(j));
        md.hand()[j] = distance(hand, goals[j].position);
    }
    return md;
}

ValidationVector motion_validation(const ModulatedDistances& md, std::span<const double> s) {
    if (md.cols() != s.size()) {
        throw InvalidInputError("gaze vector length " + std::to_string(s.size()) + " does not match goal count " +
                                std::to_string(md.cols()));
    }
    ValidationVector v(md.cols(), 0.0);
    for (std::size_t j = 0; j < md.cols(); ++j) {
        const auto [lo, hi] = kernels::min_max(md.column(j));
        const double d = md.hand()[j];
        double ratio;
        if (hi - lo < kDegenerateColumn) {
            ratio = d <= hi + kDegenerateColumn ? 1.0 : 0.0;
        } else {
            ratio = std::clamp((hi - d) / (hi - lo), 0.0, 1.0);
        }
        v[j] = ratio * s[j];
    }
    return v;
}

}  // namespace intent
