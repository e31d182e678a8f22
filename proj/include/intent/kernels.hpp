#pragma once

// Data-parallel inner loops of the estimator.
//
// Each kernel has a scalar reference implementation and SIMD variants
// (AVX2 on x86-64, NEON on AArch64). The variant is picked once at startup
// from the host CPU and can be overridden with INTENT_ISA=scalar|avx2|neon
// or force_isa(). All variants perform the same IEEE operations in the same
// order, so results are bit-identical across variants.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "intent/geometry.hpp"

namespace intent::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa);
bool isa_available(Isa isa);
Isa active_isa();
/// Selects the variant used by the dispatching entry points. Throws if unavailable.
void force_isa(Isa isa);

/// Structure-of-arrays point cloud.
struct PointsSoA {
    std::span<const double> x, y, z;
    std::size_t size() const { return x.size(); }
};

struct MinMax {
    double min;
    double max;
};

/// out[i] = |p_i - target|
void distances(PointsSoA points, const Vec3& target, std::span<double> out);

/// Extremes of a non-empty span.
MinMax min_max(std::span<const double> values);

/// Max-product column reduction for an s x s row-major matrix:
/// best[j] = max over i with m[i*s+j] > 0 of prev[i] * m[i*s+j], arg[j] the
/// lowest such i. Columns without a positive entry give best 0, arg 0.
void max_product(std::span<const double> prev, std::span<const double> matrix, std::span<double> best,
                 std::span<std::uint32_t> arg);

// Direct access to each variant, used by the equivalence tests and benchmarks.
namespace scalar {
void distances(PointsSoA points, const Vec3& target, std::span<double> out);
MinMax min_max(std::span<const double> values);
void max_product(std::span<const double> prev, std::span<const double> matrix, std::span<double> best,
                 std::span<std::uint32_t> arg);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
void distances(PointsSoA points, const Vec3& target, std::span<double> out);
MinMax min_max(std::span<const double> values);
void max_product(std::span<const double> prev, std::span<const double> matrix, std::span<double> best,
                 std::span<std::uint32_t> arg);
}  // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
void distances(PointsSoA points, const Vec3& target, std::span<double> out);
MinMax min_max(std::span<const double> values);
void max_product(std::span<const double> prev, std::span<const double> matrix, std::span<double> best,
                 std::span<std::uint32_t> arg);
}  // namespace neon
#endif

}  // namespace intent::kernels
