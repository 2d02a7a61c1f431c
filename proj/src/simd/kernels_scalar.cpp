#include <cmath>

#include "hsir/rng.hpp"
#include "hsir/simd/kernels.hpp"

namespace hsir::simd::detail {

void philox_uniforms_scalar(std::uint64_t seed, std::uint64_t first_path, std::uint32_t step,
                            std::span<double> u_indep, std::span<double> u_var) {
    const rng::Philox4x32Key key = {static_cast<std::uint32_t>(seed),
                                    static_cast<std::uint32_t>(seed >> 32)};
    for (std::size_t i = 0; i < u_indep.size(); ++i) {
        const std::uint64_t path = first_path + i;
        const auto out = rng::philox4x32(
            {static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32), step, 0u},
            key);
        u_indep[i] = rng::to_open_unit((std::uint64_t{out[1]} << 32) | out[0]);
        u_var[i] = rng::to_open_unit((std::uint64_t{out[3]} << 32) | out[2]);
    }
}

// Reference kernel. The SIMD variants mirror this expression order exactly.
void euler_step_scalar(const EulerCoefficients& k, const PathBlock& blk,
                       std::span<const double> z_indep, std::span<const double> z_var) {
    for (std::size_t i = 0; i < z_var.size(); ++i) {
        const double v = blk.variance[i];
        const double vp = v > 0.0 ? v : 0.0;
        const double sq = std::sqrt(vp * k.dt);
        const double r = blk.rate[i];

        const double shock = k.rho * z_var[i] + k.rho_bar * z_indep[i];
        const double drift = (r - 0.5 * vp) * k.dt;
        blk.log_spot[i] = blk.log_spot[i] + (drift + sq * shock);

        const double v_next = v + ((k.kappa_theta - k.kappa_q * vp) * k.dt + k.sigma * sq * z_var[i]);
        const double vp_next = v_next > 0.0 ? v_next : 0.0;
        const double r_next = k.mu + k.beta * vp_next;

        blk.int_rate[i] = blk.int_rate[i] + 0.5 * (r + r_next) * k.dt;
        blk.rate[i] = r_next;
        blk.variance[i] = v_next;
    }
}

} // namespace hsir::simd::detail
