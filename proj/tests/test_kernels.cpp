#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "hsir/rng.hpp"
#include "hsir/simd/kernels.hpp"

using namespace hsir;
using simd::Backend;

namespace {

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

std::vector<Backend> vector_backends() {
    std::vector<Backend> out;
    for (auto b : {Backend::Avx2, Backend::Neon})
        if (simd::available(b)) out.push_back(b);
    return out;
}

struct State {
    std::vector<double> x, v, r, ir;
    explicit State(std::size_t n, std::mt19937_64& gen) : x(n), v(n), r(n), ir(n) {
        std::uniform_real_distribution<double> u(-0.05, 0.3);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = 4.6 + u(gen);
            v[i] = u(gen); // includes negative uncapped states
            r[i] = 0.03 + u(gen) * 0.1;
            ir[i] = u(gen);
        }
    }
    simd::PathBlock block() { return {x, v, r, ir}; }
};

} // namespace

TEST_CASE("scalar backend is always available") {
    CHECK(simd::available(Backend::Scalar));
    CHECK(simd::available(simd::active_backend()));
}

TEST_CASE("scalar Philox uniforms reproduce the reference generator") {
    const std::uint64_t seed = 0x123456789abcdefULL, first = (std::uint64_t{1} << 32) - 3;
    const std::uint32_t step = 17;
    std::vector<double> a(7), b(7);
    simd::philox_uniforms(Backend::Scalar, seed, first, step, a, b);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const std::uint64_t path = first + i;
        const auto w = rng::philox4x32(
            {static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32), step, 0},
            {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
        CHECK(a[i] == rng::to_open_unit(std::uint64_t{w[1]} << 32 | w[0]));
        CHECK(b[i] == rng::to_open_unit(std::uint64_t{w[3]} << 32 | w[2]));
    }
}

TEST_CASE("vector Philox uniforms are bitwise equal to scalar") {
    for (Backend be : vector_backends()) {
        for (std::size_t n : {1u, 3u, 4u, 5u, 8u, 13u, 512u}) {
            std::vector<double> a0(n), b0(n), a1(n), b1(n);
            // block straddles the 2^32 path boundary
            const std::uint64_t first = (std::uint64_t{1} << 32) - 6;
            simd::philox_uniforms(Backend::Scalar, 42, first, 9, a0, b0);
            simd::philox_uniforms(be, 42, first, 9, a1, b1);
            CHECK(same_bits(a0, a1));
            CHECK(same_bits(b0, b1));
        }
    }
}

TEST_CASE("vector Euler step is bitwise equal to scalar") {
    std::mt19937_64 gen(99);
    std::normal_distribution<double> nd;
    const simd::EulerCoefficients k{1.0 / 250, 0.08, 2.1, 0.45, -0.7, std::sqrt(1 - 0.49), 0.02, 0.8};
    for (Backend be : vector_backends()) {
        for (std::size_t n : {1u, 2u, 4u, 7u, 64u, 515u}) {
            State s0(n, gen);
            State s1 = s0;
            std::vector<double> z1(n), z2(n);
            for (std::size_t i = 0; i < n; ++i) z1[i] = nd(gen), z2[i] = nd(gen);
            for (int step = 0; step < 20; ++step) {
                simd::euler_step(Backend::Scalar, k, s0.block(), z1, z2);
                simd::euler_step(be, k, s1.block(), z1, z2);
            }
            CHECK(same_bits(s0.x, s1.x));
            CHECK(same_bits(s0.v, s1.v));
            CHECK(same_bits(s0.r, s1.r));
            CHECK(same_bits(s0.ir, s1.ir));
        }
    }
}

TEST_CASE("scalar Euler step matches the written-out scheme") {
    const simd::EulerCoefficients k{0.01, 0.08, 2.0, 0.3, -0.5, std::sqrt(0.75), 0.03, 1.0};
    std::vector<double> x{4.6, 4.6}, v{0.04, -0.01}, r{0.07, 0.03}, ir{0.0, 0.0};
    const std::vector<double> z1{0.3, -1.2}, z2{-0.7, 0.4};
    simd::euler_step(Backend::Scalar, k, {x, v, r, ir}, z1, z2);
    const double sq = std::sqrt(0.01);
    // path 0: v+ = 0.04
    const double vp = 0.04, sv = std::sqrt(vp);
    const double v1 = 0.04 + (0.08 - 2.0 * vp) * 0.01 + 0.3 * sv * sq * -0.7;
    CHECK(v[0] == doctest::Approx(v1).epsilon(1e-15));
    CHECK(x[0] == doctest::Approx(4.6 + (0.07 - 0.02) * 0.01 +
                                  sv * sq * (-0.5 * -0.7 + std::sqrt(0.75) * 0.3)).epsilon(1e-15));
    CHECK(r[0] == doctest::Approx(0.03 + std::max(v1, 0.0)).epsilon(1e-15));
    CHECK(ir[0] == doctest::Approx(0.5 * (0.07 + r[0]) * 0.01).epsilon(1e-15));
    // path 1: negative state is truncated, diffusion vanishes
    CHECK(v[1] == doctest::Approx(-0.01 + 0.08 * 0.01).epsilon(1e-15));
    CHECK(x[1] == doctest::Approx(4.6 + 0.03 * 0.01).epsilon(1e-15));
}
