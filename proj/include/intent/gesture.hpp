#pragma once

// Rule-based hand action classification from a 21-joint skeleton.
//
// Joint layout: 0 wrist, then four joints per finger from knuckle to tip in
// the order thumb (1-4), index (5-8), middle (9-12), ring (13-16),
// pinky (17-20). The rule table is heuristic; the grasp-intent rule in
// particular is a geometric placeholder for what is really a behavioural cue.

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "intent/geometry.hpp"

namespace intent {

struct HandSkeleton {
    static constexpr std::size_t kJoints = 21;
    std::array<Vec3, kJoints> joints{};

    /// First joint (knuckle) of finger f, f in [0, 5).
    static constexpr std::size_t finger_base(std::size_t f) { return 1 + 4 * f; }
    static constexpr std::size_t kThumbTip = 4;
    static constexpr std::size_t kIndexTip = 8;
};

enum class Gesture { None, GraspIntent, Grasped, Pointing, Stop };

std::string_view to_string(Gesture g);
std::optional<Gesture> gesture_from_string(std::string_view name);

struct GestureThresholds {
    double straight = 0.5;        ///< rad, a finger below this counts as extended
    double folded = 1.5;          ///< rad, a finger above this counts as folded
    double grasp_aperture = 0.03; ///< m, thumb-index tip distance for a closed grasp
};

/// Bend angles summed over the two interior joints of each finger's
/// four-joint chain. Order: thumb, index, middle, ring, pinky.
std::array<double, 5> finger_curl(const HandSkeleton& skeleton);

/// Distance between the thumb tip and the index tip.
double pinch_aperture(const HandSkeleton& skeleton);

/// Label for the most recent skeleton in `history` (oldest first).
Gesture classify_gesture(std::span<const HandSkeleton> history, const GestureThresholds& thresholds = {});

/// Synthetic poses: "open_palm", "point", "pinch", "fist", "relaxed".
/// The wrist sits at `wrist`, fingers extend along +x, palm normal +z.
std::optional<HandSkeleton> gesture_fixture(std::string_view name, const Vec3& wrist = {});

/// Half-closed hand with the given thumb-index aperture (meters).
HandSkeleton grasp_approach_pose(double aperture, const Vec3& wrist = {});

}  // namespace intent
