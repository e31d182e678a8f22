#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace intent {

/// World-frame point or direction, meters.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    constexpr bool operator==(const Vec3&) const = default;

    constexpr double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    constexpr Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
    bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

inline constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

/// Returns v / |v|. Throws InvalidInputError on a zero or non-finite vector.
Vec3 normalized(const Vec3& v);

/// Any unit vector orthogonal to the unit vector `n`.
Vec3 any_orthogonal(const Vec3& n);

/// Rotates `v` about the unit axis `axis` by `angle` radians (Rodrigues).
Vec3 rotate(const Vec3& v, const Vec3& axis, double angle);

/// Spherical interpolation between two unit directions.
Vec3 slerp(const Vec3& a, const Vec3& b, double t);

inline constexpr double kUnitTolerance = 1e-9;

/// HMD pose: `position` is h, `forward` is the unit gaze direction g.
struct HeadPose {
    Vec3 position;
    Vec3 forward{1.0, 0.0, 0.0};
};

struct Goal {
    std::string id;
    std::string label;
    Vec3 position;
};

/// Ordered goal list; order defines the hidden-state order G_1..G_g.
class GoalSet {
public:
    GoalSet() = default;
    /// Throws DuplicateGoalError on repeated ids, InvalidInputError on non-finite positions.
    explicit GoalSet(std::vector<Goal> goals);

    std::size_t size() const { return goals_.size(); }
    bool empty() const { return goals_.empty(); }
    const Goal& operator[](std::size_t i) const { return goals_[i]; }
    const std::vector<Goal>& goals() const { return goals_; }
    auto begin() const { return goals_.begin(); }
    auto end() const { return goals_.end(); }

    std::optional<std::size_t> index_of(const std::string& id) const;
    bool contains(const std::string& id) const { return index_of(id).has_value(); }

    void add(Goal goal);
    /// Removes and returns the index the goal occupied. Throws UnknownGoalError.
    std::size_t remove(const std::string& id);

private:
    std::vector<Goal> goals_;
};

}  // namespace intent
