// AArch64 Advanced SIMD variant of the Euler step; two paths per register.

#include <arm_neon.h>

#include "hsir/simd/kernels.hpp"

namespace hsir::simd::detail {

void euler_step_neon(const EulerCoefficients& k, const PathBlock& blk,
                     std::span<const double> z_indep, std::span<const double> z_var) {
    const std::size_t n = z_var.size();
    const std::size_t vec_end = n - n % 2;

    const float64x2_t zero = vdupq_n_f64(0.0);
    const float64x2_t half = vdupq_n_f64(0.5);
    const float64x2_t dt = vdupq_n_f64(k.dt);
    const float64x2_t kth = vdupq_n_f64(k.kappa_theta);
    const float64x2_t kq = vdupq_n_f64(k.kappa_q);
    const float64x2_t sig = vdupq_n_f64(k.sigma);
    const float64x2_t rho = vdupq_n_f64(k.rho);
    const float64x2_t rho_bar = vdupq_n_f64(k.rho_bar);
    const float64x2_t mu = vdupq_n_f64(k.mu);
    const float64x2_t beta = vdupq_n_f64(k.beta);

    for (std::size_t i = 0; i < vec_end; i += 2) {
        const float64x2_t v = vld1q_f64(blk.variance.data() + i);
        const float64x2_t zv = vld1q_f64(z_var.data() + i);
        const float64x2_t zi = vld1q_f64(z_indep.data() + i);
        const float64x2_t r = vld1q_f64(blk.rate.data() + i);

        // Select rather than vmaxq so that -0 maps to +0 like the scalar kernel.
        const float64x2_t vp = vbslq_f64(vcgtq_f64(v, zero), v, zero);
        const float64x2_t sq = vsqrtq_f64(vmulq_f64(vp, dt));

        const float64x2_t shock = vaddq_f64(vmulq_f64(rho, zv), vmulq_f64(rho_bar, zi));
        const float64x2_t drift = vmulq_f64(vsubq_f64(r, vmulq_f64(half, vp)), dt);
        const float64x2_t ls = vld1q_f64(blk.log_spot.data() + i);
        vst1q_f64(blk.log_spot.data() + i, vaddq_f64(ls, vaddq_f64(drift, vmulq_f64(sq, shock))));

        const float64x2_t mean_rev = vmulq_f64(vsubq_f64(kth, vmulq_f64(kq, vp)), dt);
        const float64x2_t noise = vmulq_f64(vmulq_f64(sig, sq), zv);
        const float64x2_t v_next = vaddq_f64(v, vaddq_f64(mean_rev, noise));
        const float64x2_t vp_next = vbslq_f64(vcgtq_f64(v_next, zero), v_next, zero);
        const float64x2_t r_next = vaddq_f64(mu, vmulq_f64(beta, vp_next));

        const float64x2_t ir = vld1q_f64(blk.int_rate.data() + i);
        const float64x2_t incr = vmulq_f64(vmulq_f64(half, vaddq_f64(r, r_next)), dt);
        vst1q_f64(blk.int_rate.data() + i, vaddq_f64(ir, incr));
        vst1q_f64(blk.rate.data() + i, r_next);
        vst1q_f64(blk.variance.data() + i, v_next);
    }
    if (vec_end < n) {
        const PathBlock tail{blk.log_spot.subspan(vec_end), blk.variance.subspan(vec_end),
                             blk.rate.subspan(vec_end), blk.int_rate.subspan(vec_end)};
        euler_step_scalar(k, tail, z_indep.subspan(vec_end), z_var.subspan(vec_end));
    }
}

} // namespace hsir::simd::detail
