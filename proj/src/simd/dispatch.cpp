#include <cstdlib>
#include <string_view>

#include "hsir/simd/kernels.hpp"

namespace hsir::simd {

const char* to_string(Backend b) noexcept {
    switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
    }
    return "unknown";
}

bool available(Backend b) noexcept {
    switch (b) {
    case Backend::Scalar: return true;
    case Backend::Avx2:
#if defined(HSIR_HAVE_AVX2)
        return __builtin_cpu_supports("avx2");
#else
        return false;
#endif
    case Backend::Neon:
#if defined(HSIR_HAVE_NEON)
        return true;
#else
        return false;
#endif
    }
    return false;
}

namespace {

Backend best_backend() noexcept {
    if (available(Backend::Avx2)) return Backend::Avx2;
    if (available(Backend::Neon)) return Backend::Neon;
    return Backend::Scalar;
}

Backend select_backend() noexcept {
    if (const char* env = std::getenv("HSIR_SIMD")) {
        const std::string_view want{env};
        for (Backend b : {Backend::Scalar, Backend::Avx2, Backend::Neon}) {
            if (want == to_string(b) && available(b)) return b;
        }
    }
    return best_backend();
}

} // namespace

Backend active_backend() noexcept {
    static const Backend chosen = select_backend();
    return chosen;
}

void philox_uniforms(Backend b, std::uint64_t seed, std::uint64_t first_path, std::uint32_t step,
                     std::span<double> u_indep, std::span<double> u_var) {
#if defined(HSIR_HAVE_AVX2)
    if (b == Backend::Avx2) {
        detail::philox_uniforms_avx2(seed, first_path, step, u_indep, u_var);
        return;
    }
#endif
    // Philox has no NEON variant.
    (void)b;
    detail::philox_uniforms_scalar(seed, first_path, step, u_indep, u_var);
}

void euler_step(Backend b, const EulerCoefficients& k, const PathBlock& block,
                std::span<const double> z_indep, std::span<const double> z_var) {
    switch (b) {
#if defined(HSIR_HAVE_AVX2)
    case Backend::Avx2: detail::euler_step_avx2(k, block, z_indep, z_var); return;
#endif
#if defined(HSIR_HAVE_NEON)
    case Backend::Neon: detail::euler_step_neon(k, block, z_indep, z_var); return;
#endif
    default: detail::euler_step_scalar(k, block, z_indep, z_var); return;
    }
}

} // namespace hsir::simd
