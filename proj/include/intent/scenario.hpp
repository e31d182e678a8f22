#pragma once

// Declarative scenarios compiled into observation streams.
//
// A scenario fixes the goals, the head position and a list of timed script
// segments. Each segment moves the hand to a point and turns the gaze
// (towards a point, along a direction, or by a yaw sweep about the vertical
// axis). Samples are taken at 1/rate spacing; seeded Gaussian noise is added
// to hand positions and gaze directions.
//
// Files are JSON documents carrying "schema": 1. Observation streams are
// written as one JSON record per line: {t, head_pos, head_dir, hand_pos}.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "intent/geometry.hpp"
#include "intent/session.hpp"

namespace intent {

inline constexpr int kScenarioSchema = 1;

enum class Interpolation { Linear, MinJerk };

struct GazeHold {};
struct GazeAt {
    Vec3 point;
};
struct GazeDirection {
    Vec3 direction;
};
struct GazeYawSweep {
    double degrees = 0.0;  ///< positive turns counter-clockwise seen from above
};
using GazeTarget = std::variant<GazeHold, GazeAt, GazeDirection, GazeYawSweep>;

struct ScriptSegment {
    double duration = 1.0;  ///< seconds
    Vec3 hand_to;
    GazeTarget gaze = GazeHold{};
    Interpolation interpolation = Interpolation::MinJerk;
    std::optional<double> gaze_duration;  ///< gaze settles after this many seconds (default: duration)
    std::string label;                    ///< free-form tag, e.g. "away"
    std::optional<std::string> target;    ///< goal the hand is heading to, for metrics
};

struct NoiseSpec {
    double hand = 0.0;  ///< std-dev per axis, meters
    double gaze = 0.0;  ///< std-dev per axis of the direction perturbation, ~radians
};

struct Scenario {
    std::string name;
    GoalSet goals;
    double rate = 30.0;  ///< Hz
    std::uint64_t seed = 0;
    Vec3 head{0.0, 0.0, 1.2};
    Vec3 hand_start;
    GazeTarget gaze_start = GazeDirection{{1.0, 0.0, 0.0}};
    NoiseSpec noise;
    std::vector<ScriptSegment> segments;

    /// Throws InvalidInputError describing the first problem found.
    void validate() const;
    /// Number of samples each segment contributes (round(duration * rate), at least 1).
    std::vector<std::size_t> segment_sample_counts() const;
    /// Index of the first sample of each segment.
    std::vector<std::size_t> segment_offsets() const;
    std::size_t sample_count() const;
};

std::vector<Observation> synthesize(const Scenario& scenario);

/// fig7_left, fig7_middle, fig7_right, sweep_base and straight_approach.
std::map<std::string, Scenario> builtin_scenarios();
/// Cylinder, cube and sphere on a 1.5 m arc, 45 degrees apart, 0.8 m high.
GoalSet builtin_goal_layout();

Scenario parse_scenario(const std::string& text);
std::string serialize_scenario(const Scenario& scenario);
Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

/// Resolves "builtin:<name>" or a file path.
Scenario resolve_scenario(const std::string& ref);

void write_observations(std::ostream& out, std::span<const Observation> observations);
std::vector<Observation> read_observations(std::istream& in);

}  // namespace intent
