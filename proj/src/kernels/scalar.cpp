#include <cmath>

#include "intent/kernels.hpp"

namespace intent::kernels::scalar {

void distances(PointsSoA points, const Vec3& target, std::span<double> out) {
    const std::size_t n = points.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = points.x[i] - target.x;
        const double dy = points.y[i] - target.y;
        const double dz = points.z[i] - target.z;
        out[i] = std::sqrt(dx * dx + dy * dy + dz * dz);
    }
}

MinMax min_max(std::span<const double> values) {
    MinMax r{values[0], values[0]};
    for (std::size_t i = 1; i < values.size(); ++i) {
        r.min = values[i] < r.min ? values[i] : r.min;
        r.max = values[i] > r.max ? values[i] : r.max;
    }
    return r;
}

void max_product(std::span<const double> prev, std::span<const double> matrix, std::span<double> best,
                 std::span<std::uint32_t> arg) {
    const std::size_t s = prev.size();
    for (std::size_t j = 0; j < s; ++j) {
        best[j] = -1.0;
        arg[j] = 0;
    }
    for (std::size_t i = 0; i < s; ++i) {
        const double p = prev[i];
        const double* row = matrix.data() + i * s;
        for (std::size_t j = 0; j < s; ++j) {
            const double prod = p * row[j];
            if (prod > best[j] && row[j] > 0.0) {
                best[j] = prod;
                arg[j] = static_cast<std::uint32_t>(i);
            }
        }
    }
    for (std::size_t j = 0; j < s; ++j) {
        if (best[j] < 0.0) {
            best[j] = 0.0;
        }
    }
}

}  // namespace intent::kernels::scalar
