#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>

#include "intent/kernels.hpp"

namespace intent::kernels::neon {

void distances(PointsSoA points, const Vec3& target, std::span<double> out) {
    const std::size_t n = points.size();
    const float64x2_t tx = vdupq_n_f64(target.x);
    const float64x2_t ty = vdupq_n_f64(target.y);
    const float64x2_t tz = vdupq_n_f64(target.z);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t dx = vsubq_f64(vld1q_f64(points.x.data() + i), tx);
        const float64x2_t dy = vsubq_f64(vld1q_f64(points.y.data() + i), ty);
        const float64x2_t dz = vsubq_f64(vld1q_f64(points.z.data() + i), tz);
        // Separate mul/add (no vfma) to match the scalar rounding sequence.
        float64x2_t acc = vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy));
        acc = vaddq_f64(acc, vmulq_f64(dz, dz));
        vst1q_f64(out.data() + i, vsqrtq_f64(acc));
    }
    for (; i < n; ++i) {
        const double dx = points.x[i] - target.x;
        const double dy = points.y[i] - target.y;
        const double dz = points.z[i] - target.z;
        out[i] = std::sqrt(dx * dx + dy * dy + dz * dz);
    }
}

MinMax min_max(std::span<const double> values) {
    const std::size_t n = values.size();
    MinMax r{values[0], values[0]};
    std::size_t i = 0;
    if (n >= 2) {
        float64x2_t lo = vld1q_f64(values.data());
        float64x2_t hi = lo;
        for (i = 2; i + 2 <= n; i += 2) {
            const float64x2_t v = vld1q_f64(values.data() + i);
            lo = vminq_f64(lo, v);
            hi = vmaxq_f64(hi, v);
        }
        r.min = vminvq_f64(lo);
        r.max = vmaxvq_f64(hi);
    }
    for (; i < n; ++i) {
        r.min = values[i] < r.min ? values[i] : r.min;
        r.max = values[i] > r.max ? values[i] : r.max;
    }
    return r;
}

void max_product(std::span<const double> prev, std::span<const double> matrix, std::span<double> best,
                 std::span<std::uint32_t> arg) {
    const std::size_t s = prev.size();
    const float64x2_t zero = vdupq_n_f64(0.0);
    std::size_t j = 0;
    for (; j + 2 <= s; j += 2) {
        float64x2_t b = vdupq_n_f64(-1.0);
        float64x2_t a = zero;
        for (std::size_t i = 0; i < s; ++i) {
            const float64x2_t t = vld1q_f64(matrix.data() + i * s + j);
            const float64x2_t prod = vmulq_f64(vdupq_n_f64(prev[i]), t);
            const uint64x2_t take = vandq_u64(vcgtq_f64(prod, b), vcgtq_f64(t, zero));
            b = vbslq_f64(take, prod, b);
            a = vbslq_f64(take, vdupq_n_f64(static_cast<double>(i)), a);
        }
        vst1q_f64(best.data() + j, vmaxq_f64(b, zero));
        arg[j] = static_cast<std::uint32_t>(vgetq_lane_f64(a, 0));
        arg[j + 1] = static_cast<std::uint32_t>(vgetq_lane_f64(a, 1));
    }
    for (; j < s; ++j) {
        double bj = -1.0;
        std::uint32_t aj = 0;
        for (std::size_t i = 0; i < s; ++i) {
            const double t = matrix[i * s + j];
            const double prod = prev[i] * t;
            if (prod > bj && t > 0.0) {
                bj = prod;
                aj = static_cast<std::uint32_t>(i);
            }
        }
        best[j] = bj < 0.0 ? 0.0 : bj;
        arg[j] = aj;
    }
}

}  // namespace intent::kernels::neon

#endif
