#include "intent/gesture.hpp"

#include <cmath>
#include <numeric>

#include "intent/error.hpp"

namespace intent {

namespace {

constexpr double kDegenerateSegment = 1e-9;
constexpr std::array<double, 3> kPhalanx{0.045, 0.03, 0.025};
constexpr std::array<double, 5> kKnuckleY{0.035, 0.02, 0.0, -0.02, -0.038};

double bend_angle(const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 in = b - a;
    const Vec3 out = c - b;
    if (in.norm() < kDegenerateSegment || out.norm() < kDegenerateSegment) {
        throw UndefinedPoseError("coincident consecutive hand joints");
    }
    return std::atan2(in.cross(out).norm(), in.dot(out));
}

// Finger chain in the x-z plane starting at `base` heading +x, bending toward
// -z by `first` at the second joint and `second` at the third joint.
void place_finger(HandSkeleton& s, std::size_t finger, const Vec3& base, double first, double second) {
    const std::size_t j0 = HandSkeleton::finger_base(finger);
    s.joints[j0] = base;
    double heading = 0.0;
    const std::array<double, 3> turn{0.0, first, second};
    for (std::size_t k = 0; k < 3; ++k) {
        heading += turn[k];
        const Vec3 dir{std::cos(heading), 0.0, -std::sin(heading)};
        s.joints[j0 + k + 1] = s.joints[j0 + k] + dir * kPhalanx[k];
    }
}

// Straight thumb from its base to `tip`.
void place_thumb_to(HandSkeleton& s, const Vec3& base, const Vec3& tip) {
    for (std::size_t k = 0; k < 4; ++k) {
        s.joints[1 + k] = base + (tip - base) * (static_cast<double>(k) / 3.0);
    }
}

Vec3 knuckle(const Vec3& wrist, std::size_t finger) { return wrist + Vec3{0.09, kKnuckleY[finger], 0.0}; }

HandSkeleton hand_with(const Vec3& wrist, double index_first, double index_second, double rest_first,
                       double rest_second) {
    HandSkeleton s;
    s.joints[0] = wrist;
    place_finger(s, 1, knuckle(wrist, 1), index_first, index_second);
    for (std::size_t f = 2; f < 5; ++f) {
        place_finger(s, f, knuckle(wrist, f), rest_first, rest_second);
    }
    return s;
}

}  // namespace

std::string_view to_string(Gesture g) {
    switch (g) {
        case Gesture::None:
            return "none";
        case Gesture::GraspIntent:
            return "grasp_intent";
        case Gesture::Grasped:
            return "grasped";
        case Gesture::Pointing:
            return "pointing";
        case Gesture::Stop:
            return "stop";
    }
    return "none";
}

std::optional<Gesture> gesture_from_string(std::string_view name) {
    for (Gesture g : {Gesture::None, Gesture::GraspIntent, Gesture::Grasped, Gesture::Pointing, Gesture::Stop}) {
        if (to_string(g) == name) {
            return g;
        }
    }
    return std::nullopt;
}

std::array<double, 5> finger_curl(const HandSkeleton& skeleton) {
    std::array<double, 5> curl{};
    for (std::size_t f = 0; f < 5; ++f) {
        const std::size_t j = HandSkeleton::finger_base(f);
        const auto& p = skeleton.joints;
        for (std::size_t k = j; k < j + 4; ++k) {
            if (!p[k].finite()) {
                throw UndefinedPoseError("non-finite hand joint");
            }
        }
        curl[f] = bend_angle(p[j], p[j + 1], p[j + 2]) + bend_angle(p[j + 1], p[j + 2], p[j + 3]);
    }
    return curl;
}

double pinch_aperture(const HandSkeleton& skeleton) {
    return distance(skeleton.joints[HandSkeleton::kThumbTip], skeleton.joints[HandSkeleton::kIndexTip]);
}

Gesture classify_gesture(std::span<const HandSkeleton> history, const GestureThresholds& th) {
    if (history.empty()) {
        throw PreconditionError("gesture classification needs at least one skeleton");
    }
    const HandSkeleton& latest = history.back();
    const auto curl = finger_curl(latest);

    if (pinch_aperture(latest) < th.grasp_aperture) {
        return Gesture::Grasped;
    }
    bool all_straight = true;
    for (double c : curl) {
        all_straight = all_straight && c < th.straight;
    }
    if (all_straight) {
        return Gesture::Stop;
    }
    const bool index_straight = curl[1] < th.straight;
    const bool others_folded = curl[0] > th.folded && curl[2] > th.folded && curl[3] > th.folded && curl[4] > th.folded;
    if (index_straight && others_folded) {
        return Gesture::Pointing;
    }
    const double mean = std::accumulate(curl.begin(), curl.end(), 0.0) / 5.0;
    if (mean >= th.straight && mean <= th.folded && history.size() >= 2) {
        bool closing = true;
        for (std::size_t k = 1; k < history.size(); ++k) {
            closing = closing && pinch_aperture(history[k]) < pinch_aperture(history[k - 1]);
        }
        if (closing) {
            return Gesture::GraspIntent;
        }
    }
    return Gesture::None;
}

std::optional<HandSkeleton> gesture_fixture(std::string_view name, const Vec3& wrist) {
    const Vec3 thumb_base = wrist + Vec3{0.03, 0.035, 0.0};
    if (name == "open_palm") {
        HandSkeleton s = hand_with(wrist, 0.0, 0.0, 0.0, 0.0);
        place_thumb_to(s, thumb_base, thumb_base + Vec3{0.06, 0.05, 0.0});
        return s;
    }
    if (name == "point" || name == "fist") {
        const double index_bend = name == "point" ? 0.0 : 1.35;
        HandSkeleton s = hand_with(wrist, index_bend, index_bend, 1.35, 1.35);
        // Thumb folded across the palm.
        place_finger(s, 0, thumb_base, 1.3, 1.2);
        return s;
    }
    if (name == "pinch") {
        return grasp_approach_pose(0.02, wrist);
    }
    if (name == "relaxed") {
        return grasp_approach_pose(0.08, wrist);
    }
    return std::nullopt;
}

HandSkeleton grasp_approach_pose(double aperture, const Vec3& wrist) {
    HandSkeleton s = hand_with(wrist, 0.5, 0.5, 0.5, 0.5);
    const Vec3 index_tip = s.joints[HandSkeleton::kIndexTip];
    place_thumb_to(s, wrist + Vec3{0.03, 0.035, 0.0}, index_tip - Vec3{0.0, 0.0, aperture});
    return s;
}

}  // namespace intent
