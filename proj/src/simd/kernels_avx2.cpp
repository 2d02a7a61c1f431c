// Compiled with -mavx2 only; reached through the runtime dispatcher after a CPU check.

#include <immintrin.h>

#include "hsir/rng.hpp"
#include "hsir/simd/kernels.hpp"

namespace hsir::simd::detail {

namespace {

// Four 32-bit words per register, one per 64-bit lane (upper halves zero).
inline __m256i lo32(__m256i x) { return _mm256_and_si256(x, _mm256_set1_epi64x(0xFFFFFFFFll)); }

// 52-bit integers in 64-bit lanes to doubles, exact: or-ing into the mantissa
// of 2^52 and subtracting 2^52.
inline __m256d open_unit(__m256i hi, __m256i lo) {
    const __m256i bits = _mm256_or_si256(_mm256_slli_epi64(hi, 32), lo);
    const __m256i top = _mm256_srli_epi64(bits, 12);
    const __m256i magic = _mm256_set1_epi64x(0x4330000000000000ll);
    const __m256d two52 = _mm256_set1_pd(0x1p52);
    const __m256d as_double = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(top, magic)), two52);
    return _mm256_mul_pd(_mm256_add_pd(as_double, _mm256_set1_pd(0.5)), _mm256_set1_pd(0x1p-52));
}

} // namespace

void philox_uniforms_avx2(std::uint64_t seed, std::uint64_t first_path, std::uint32_t step,
                          std::span<double> u_indep, std::span<double> u_var) {
    const std::size_t n = u_indep.size();
    const std::size_t vec_end = n - n % 4;
    const __m256i m0 = _mm256_set1_epi64x(rng::kPhiloxM0);
    const __m256i m1 = _mm256_set1_epi64x(rng::kPhiloxM1);

    for (std::size_t i = 0; i < vec_end; i += 4) {
        const std::uint64_t p = first_path + i;
        const __m256i path = _mm256_add_epi64(_mm256_set1_epi64x(static_cast<long long>(p)),
                                              _mm256_set_epi64x(3, 2, 1, 0));
        __m256i c0 = lo32(path);
        __m256i c1 = _mm256_srli_epi64(path, 32);
        __m256i c2 = _mm256_set1_epi64x(step);
        __m256i c3 = _mm256_setzero_si256();

        std::uint32_t k0 = static_cast<std::uint32_t>(seed);
        std::uint32_t k1 = static_cast<std::uint32_t>(seed >> 32);
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                k0 += rng::kPhiloxW0;
                k1 += rng::kPhiloxW1;
            }
            const __m256i p0 = _mm256_mul_epu32(m0, c0);
            const __m256i p1 = _mm256_mul_epu32(m1, c2);
            const __m256i key0 = _mm256_set1_epi64x(k0);
            const __m256i key1 = _mm256_set1_epi64x(k1);
            const __m256i n0 = _mm256_xor_si256(_mm256_xor_si256(_mm256_srli_epi64(p1, 32), c1), key0);
            const __m256i n1 = lo32(p1);
            const __m256i n2 = _mm256_xor_si256(_mm256_xor_si256(_mm256_srli_epi64(p0, 32), c3), key1);
            const __m256i n3 = lo32(p0);
            c0 = n0;
            c1 = n1;
            c2 = n2;
            c3 = n3;
        }
        _mm256_storeu_pd(u_indep.data() + i, open_unit(c1, c0));
        _mm256_storeu_pd(u_var.data() + i, open_unit(c3, c2));
    }
    if (vec_end < n) {
        philox_uniforms_scalar(seed, first_path + vec_end, step, u_indep.subspan(vec_end),
                               u_var.subspan(vec_end));
    }
}

void euler_step_avx2(const EulerCoefficients& k, const PathBlock& blk,
                     std::span<const double> z_indep, std::span<const double> z_var) {
    const std::size_t n = z_var.size();
    const std::size_t vec_end = n - n % 4;

    const __m256d zero = _mm256_setzero_pd();
    const __m256d half = _mm256_set1_pd(0.5);
    const __m256d dt = _mm256_set1_pd(k.dt);
    const __m256d kth = _mm256_set1_pd(k.kappa_theta);
    const __m256d kq = _mm256_set1_pd(k.kappa_q);
    const __m256d sig = _mm256_set1_pd(k.sigma);
    const __m256d rho = _mm256_set1_pd(k.rho);
    const __m256d rho_bar = _mm256_set1_pd(k.rho_bar);
    const __m256d mu = _mm256_set1_pd(k.mu);
    const __m256d beta = _mm256_set1_pd(k.beta);

    for (std::size_t i = 0; i < vec_end; i += 4) {
        const __m256d v = _mm256_loadu_pd(blk.variance.data() + i);
        const __m256d zv = _mm256_loadu_pd(z_var.data() + i);
        const __m256d zi = _mm256_loadu_pd(z_indep.data() + i);
        const __m256d r = _mm256_loadu_pd(blk.rate.data() + i);

        // max_pd(v, 0) returns +0 for v == -0, matching (v > 0 ? v : 0).
        const __m256d vp = _mm256_max_pd(v, zero);
        const __m256d sq = _mm256_sqrt_pd(_mm256_mul_pd(vp, dt));

        const __m256d shock = _mm256_add_pd(_mm256_mul_pd(rho, zv), _mm256_mul_pd(rho_bar, zi));
        const __m256d drift = _mm256_mul_pd(_mm256_sub_pd(r, _mm256_mul_pd(half, vp)), dt);
        const __m256d ls = _mm256_loadu_pd(blk.log_spot.data() + i);
        _mm256_storeu_pd(blk.log_spot.data() + i,
                         _mm256_add_pd(ls, _mm256_add_pd(drift, _mm256_mul_pd(sq, shock))));

        const __m256d mean_rev = _mm256_mul_pd(_mm256_sub_pd(kth, _mm256_mul_pd(kq, vp)), dt);
        const __m256d noise = _mm256_mul_pd(_mm256_mul_pd(sig, sq), zv);
        const __m256d v_next = _mm256_add_pd(v, _mm256_add_pd(mean_rev, noise));
        const __m256d vp_next = _mm256_max_pd(v_next, zero);
        const __m256d r_next = _mm256_add_pd(mu, _mm256_mul_pd(beta, vp_next));

        const __m256d ir = _mm256_loadu_pd(blk.int_rate.data() + i);
        const __m256d incr = _mm256_mul_pd(_mm256_mul_pd(half, _mm256_add_pd(r, r_next)), dt);
        _mm256_storeu_pd(blk.int_rate.data() + i, _mm256_add_pd(ir, incr));
        _mm256_storeu_pd(blk.rate.data() + i, r_next);
        _mm256_storeu_pd(blk.variance.data() + i, v_next);
    }
    if (vec_end < n) {
        const PathBlock tail{blk.log_spot.subspan(vec_end), blk.variance.subspan(vec_end),
                             blk.rate.subspan(vec_end), blk.int_rate.subspan(vec_end)};
        euler_step_scalar(k, tail, z_indep.subspan(vec_end), z_var.subspan(vec_end));
    }
}

} // namespace hsir::simd::detail
