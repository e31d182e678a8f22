#include <atomic>
#include <cstdlib>
#include <string>

#include "intent/error.hpp"
#include "intent/kernels.hpp"

namespace intent::kernels {

namespace {

Isa detect() {
    Isa isa = Isa::Scalar;
#if defined(__x86_64__) || defined(_M_X64)
    if (__builtin_cpu_supports("avx2")) {
        isa = Isa::Avx2;
    }
#elif defined(__aarch64__)
    isa = Isa::Neon;
#endif
    if (const char* env = std::getenv("INTENT_ISA")) {
        const std::string want(env);
        for (Isa candidate : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
            if (want == isa_name(candidate) && isa_available(candidate)) {
                isa = candidate;
            }
        }
    }
    return isa;
}

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{detect()};
    return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::Scalar:
            return "scalar";
        case Isa::Avx2:
            return "avx2";
        case Isa::Neon:
            return "neon";
    }
    return "unknown";
}

bool isa_available(Isa isa) {
    switch (isa) {
        case Isa::Scalar:
            return true;
        case Isa::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Isa::Neon:
#if defined(__aarch64__)
            return true;
#else
            return false;
#endif
    }
    return false;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
    if (!isa_available(isa)) {
        throw InvalidInputError("kernel variant '" + std::string(isa_name(isa)) + "' is not available on this CPU");
    }
    current().store(isa, std::memory_order_relaxed);
}

void distances(PointsSoA points, const Vec3& target, std::span<double> out) {
    switch (active_isa()) {
#if defined(__x86_64__) || defined(_M_X64)
        case Isa::Avx2:
            return avx2::distances(points, target, out);
#endif
#if defined(__aarch64__)
        case Isa::Neon:
            return neon::distances(points, target, out);
#endif
        default:
            return scalar::distances(points, target, out);
    }
}

MinMax min_max(std::span<const double> values) {
    switch (active_isa()) {
#if defined(__x86_64__) || defined(_M_X64)
        case Isa::Avx2:
            return avx2::min_max(values);
#endif
#if defined(__aarch64__)
        case Isa::Neon:
            return neon::min_max(values);
#endif
        default:
            return scalar::min_max(values);
    }
}

void max_product(std::span<const double> prev, std::span<const double> matrix, std::span<double> best,
                 std::span<std::uint32_t> arg) {
    switch (active_isa()) {
#if defined(__x86_64__) || defined(_M_X64)
        case Isa::Avx2:
            return avx2::max_product(prev, matrix, best, arg);
#endif
#if defined(__aarch64__)
        case Isa::Neon:
            return neon::max_product(prev, matrix, best, arg);
#endif
        default:
            return scalar::max_product(prev, matrix, best, arg);
    }
}

}  // namespace intent::kernels
