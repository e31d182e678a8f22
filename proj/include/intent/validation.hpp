#pragma once

// Gaze and motion evidence per goal.
//
// Gaze validation scores how well the head's forward direction points at each
// goal. Motion validation compares the actual hand step against a ring of
// candidate steps of the same length taken from the previous hand position:
// a goal the hand moved straight at scores 1, a goal it moved straight away
// from scores 0.

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "intent/geometry.hpp"

namespace intent {

/// Hand steps shorter than this are treated as stationary (meters).
inline constexpr double kDefaultEpsilonMotion = 0.001;

struct FibonacciSphere {};
struct PlanarCircle {
    Vec3 normal{0.0, 0.0, 1.0};
};

struct SamplePattern {
    std::variant<FibonacciSphere, PlanarCircle> shape = FibonacciSphere{};
    int count = 32;

    void validate() const;
};

/// Orientation of the sampling pattern. `axis` is the sphere pole;
/// `reference` fixes the azimuth origin. Both are orthonormalized on use.
struct SampleFrame {
    Vec3 axis{0.0, 0.0, 1.0};
    Vec3 reference{1.0, 0.0, 0.0};
};

/// Per-goal values in [0, 1].
using GazeVector = std::vector<double>;
using ValidationVector = std::vector<double>;

/// s_i = max(0, forward . (o_i - h) / |o_i - h|); 0 for a goal within 1e-6 m of the head.
GazeVector gaze_validation(const HeadPose& head, const GoalSet& goals);

/// `pattern.count` points at distance `radius` from `center`.
std::vector<Vec3> sample_candidate_points(const Vec3& center, double radius, const SamplePattern& pattern,
                                          const SampleFrame& frame = {},
                                          double min_radius = kDefaultEpsilonMotion);

/// Distances of the candidate points (D, n x g) and of the hand (d, g) to each goal.
class ModulatedDistances {
public:
    ModulatedDistances(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols), d_(cols) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double at(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }
    std::span<const double> column(std::size_t j) const { return {data_.data() + j * rows_, rows_}; }
    std::span<double> column(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
    std::span<const double> hand() const { return d_; }
    std::span<double> hand() { return d_; }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;  // column-major
    std::vector<double> d_;
};

ModulatedDistances modulated_distance_matrix(std::span<const Vec3> points, const Vec3& hand, const GoalSet& goals);

/// v_j = clamp((max_i D_ij - d_j) / (max_i D_ij - min_i D_ij), 0, 1) * s_j.
ValidationVector motion_validation(const ModulatedDistances& md, std::span<const double> s);

}  // namespace intent
