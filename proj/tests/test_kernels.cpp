#include <gtest/gtest.h>

#include <cstring>
#include <random>
#include <vector>

#include "intent/hmm.hpp"
#include "intent/kernels.hpp"

using namespace intent;
namespace k = intent::kernels;

namespace {

struct Variant {
    k::Isa isa;
    void (*distances)(k::PointsSoA, const Vec3&, std::span<double>);
    k::MinMax (*min_max)(std::span<const double>);
    void (*max_product)(std::span<const double>, std::span<const double>, std::span<double>,
                        std::span<std::uint32_t>);
};

std::vector<Variant> simd_variants() {
    std::vector<Variant> out;
#if defined(__x86_64__) || defined(_M_X64)
    if (k::isa_available(k::Isa::Avx2)) {
        out.push_back({k::Isa::Avx2, k::avx2::distances, k::avx2::min_max, k::avx2::max_product});
    }
#endif
#if defined(__aarch64__)
    if (k::isa_available(k::Isa::Neon)) {
        out.push_back({k::Isa::Neon, k::neon::distances, k::neon::min_max, k::neon::max_product});
    }
#endif
    return out;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST(Kernels, ScalarReferenceValues) {
    const std::vector<double> x{0, 3}, y{0, 4}, z{0, 0};
    std::vector<double> out(2);
    k::scalar::distances({x, y, z}, {0, 0, 0}, out);
    EXPECT_EQ(out, (std::vector<double>{0, 5}));
    const auto mm = k::scalar::min_max(std::vector<double>{3, -1, 7, 2});
    EXPECT_EQ(mm.min, -1);
    EXPECT_EQ(mm.max, 7);
}

TEST(Kernels, MaxProductSkipsZeroTransitions) {
    // Column 1 has no positive entry; column 0 ties between rows 0 and 1.
    const std::vector<double> prev{0.5, 0.5};
    const std::vector<double> m{0.4, 0.0, 0.4, 0.0};
    std::vector<double> best(2);
    std::vector<std::uint32_t> arg(2);
    k::scalar::max_product(prev, m, best, arg);
    EXPECT_EQ(best[0], 0.2);
    EXPECT_EQ(arg[0], 0u);
    EXPECT_EQ(best[1], 0.0);
    EXPECT_EQ(arg[1], 0u);
}

TEST(Kernels, SimdDistancesBitIdentical) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-5, 5);
    for (const auto& v : simd_variants()) {
        for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 31u, 32u, 33u, 100u}) {
            std::vector<double> x(n), y(n), z(n);
            for (std::size_t i = 0; i < n; ++i) {
                x[i] = u(rng);
                y[i] = u(rng);
                z[i] = u(rng);
            }
            const Vec3 t{u(rng), u(rng), u(rng)};
            std::vector<double> a(n), b(n);
            k::scalar::distances({x, y, z}, t, a);
            v.distances({x, y, z}, t, b);
            for (std::size_t i = 0; i < n; ++i) {
                EXPECT_TRUE(same_bits(a[i], b[i])) << k::isa_name(v.isa) << " n=" << n << " i=" << i;
            }
        }
    }
}

TEST(Kernels, SimdMinMaxBitIdentical) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-5, 5);
    for (const auto& v : simd_variants()) {
        for (std::size_t n = 1; n < 70; ++n) {
            std::vector<double> xs(n);
            for (auto& x : xs) x = u(rng);
            const auto a = k::scalar::min_max(xs);
            const auto b = v.min_max(xs);
            EXPECT_TRUE(same_bits(a.min, b.min) && same_bits(a.max, b.max)) << k::isa_name(v.isa) << " n=" << n;
        }
    }
}

TEST(Kernels, SimdMaxProductBitIdentical) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 1);
    for (const auto& v : simd_variants()) {
        for (std::size_t g = 1; g <= 20; ++g) {
            HmmParams p;
            p.beta = 0.9 / static_cast<double>(g + 1);
            const auto t = build_transition(p, g);
            const std::size_t s = t.states();
            for (int rep = 0; rep < 20; ++rep) {
                std::vector<double> prev(s);
                for (auto& x : prev) x = rep % 3 == 0 ? std::floor(u(rng) * 3) / 4 : u(rng);  // ties included
                std::vector<double> b1(s), b2(s);
                std::vector<std::uint32_t> a1(s), a2(s);
                k::scalar::max_product(prev, t.data(), b1, a1);
                v.max_product(prev, t.data(), b2, a2);
                for (std::size_t j = 0; j < s; ++j) {
                    EXPECT_TRUE(same_bits(b1[j], b2[j])) << k::isa_name(v.isa) << " g=" << g << " j=" << j;
                    EXPECT_EQ(a1[j], a2[j]) << k::isa_name(v.isa) << " g=" << g << " j=" << j;
                }
            }
        }
    }
}

TEST(Kernels, ForcedIsaDrivesDispatch) {
    const k::Isa original = k::active_isa();
    k::force_isa(k::Isa::Scalar);
    EXPECT_EQ(k::active_isa(), k::Isa::Scalar);
    for (const auto& v : simd_variants()) {
        k::force_isa(v.isa);
        EXPECT_EQ(k::active_isa(), v.isa);
    }
#if !defined(__aarch64__)
    EXPECT_THROW(k::force_isa(k::Isa::Neon), std::exception);
#endif
    k::force_isa(original);
}

TEST(Kernels, ViterbiStepIdenticalAcrossVariants) {
    const k::Isa original = k::active_isa();
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0, 1);
    const auto t = build_transition(HmmParams{}, 10);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> prev(12), row(12);
        for (auto& x : prev) x = u(rng);
        for (auto& x : row) x = u(rng);
        k::force_isa(k::Isa::Scalar);
        const auto a = viterbi_step(prev, t, row);
        for (const auto& v : simd_variants()) {
            k::force_isa(v.isa);
            const auto b = viterbi_step(prev, t, row);
            for (std::size_t j = 0; j < 12; ++j) {
                EXPECT_TRUE(same_bits(a.belief[j], b.belief[j]));
            }
            EXPECT_EQ(a.backpointers, b.backpointers);
        }
    }
    k::force_isa(original);
}
