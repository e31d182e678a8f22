// Compiled with -mavx2 (and without -mfma, so no contraction changes rounding).

#include <immintrin.h>

#include <cmath>

#include "intent/kernels.hpp"

namespace intent::kernels::avx2 {

void distances(PointsSoA points, const Vec3& target, std::span<double> out) {
    const std::size_t n = points.size();
    const __m256d tx = _mm256_set1_pd(target.x);
    const __m256d ty = _mm256_set1_pd(target.y);
    const __m256d tz = _mm256_set1_pd(target.z);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(points.x.data() + i), tx);
        const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(points.y.data() + i), ty);
        const __m256d dz = _mm256_sub_pd(_mm256_loadu_pd(points.z.data() + i), tz);
        __m256d acc = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(dz, dz));
        _mm256_storeu_pd(out.data() + i, _mm256_sqrt_pd(acc));
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
    if (n >= 4) {
        __m256d lo = _mm256_loadu_pd(values.data());
        __m256d hi = lo;
        for (i = 4; i + 4 <= n; i += 4) {
            const __m256d v = _mm256_loadu_pd(values.data() + i);
            lo = _mm256_min_pd(lo, v);
            hi = _mm256_max_pd(hi, v);
        }
        alignas(32) double lo4[4], hi4[4];
        _mm256_store_pd(lo4, lo);
        _mm256_store_pd(hi4, hi);
        for (int k = 0; k < 4; ++k) {
            r.min = lo4[k] < r.min ? lo4[k] : r.min;
            r.max = hi4[k] > r.max ? hi4[k] : r.max;
        }
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
    const __m256d zero = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= s; j += 4) {
        __m256d b = _mm256_set1_pd(-1.0);
        __m256d a = zero;
        for (std::size_t i = 0; i < s; ++i) {
            const __m256d t = _mm256_loadu_pd(matrix.data() + i * s + j);
            const __m256d prod = _mm256_mul_pd(_mm256_set1_pd(prev[i]), t);
            const __m256d take = _mm256_and_pd(_mm256_cmp_pd(prod, b, _CMP_GT_OQ), _mm256_cmp_pd(t, zero, _CMP_GT_OQ));
            b = _mm256_blendv_pd(b, prod, take);
            a = _mm256_blendv_pd(a, _mm256_set1_pd(static_cast<double>(i)), take);
        }
        b = _mm256_max_pd(b, zero);
        _mm256_storeu_pd(best.data() + j, b);
        alignas(32) double a4[4];
        _mm256_store_pd(a4, a);
        for (int k = 0; k < 4; ++k) {
            arg[j + k] = static_cast<std::uint32_t>(a4[k]);
        }
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

}  // namespace intent::kernels::avx2
