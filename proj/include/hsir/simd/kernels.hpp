#pragma once

// Data-parallel inner loops of the path simulator. Every backend performs the
// same IEEE operations in the same order (no FMA contraction), so the results
// are bitwise identical across backends; tests/test_kernels.cpp enforces it.

#include <cstddef>
#include <cstdint>
#include <span>

namespace hsir::simd {

enum class Backend { Scalar, Avx2, Neon };

const char* to_string(Backend b) noexcept;

/// True when the running CPU can execute the backend and it was compiled in.
bool available(Backend b) noexcept;

/// Best available backend, unless HSIR_SIMD=scalar|avx2|neon overrides it.
Backend active_backend() noexcept;

/// Uniforms for paths [first_path, first_path + n) at one time step:
/// Philox4x32-10 with counter (path lo, path hi, step, 0) and key (seed lo, seed hi).
/// Words (1:0) feed u_indep and words (3:2) feed u_var, high word first.
void philox_uniforms(Backend b, std::uint64_t seed, std::uint64_t first_path, std::uint32_t step,
                     std::span<double> u_indep, std::span<double> u_var);

struct EulerCoefficients {
    double dt = 0.0;
    double kappa_theta = 0.0; ///< kappa * theta
    double kappa_q = 0.0;     ///< kappa + lambda
    double sigma = 0.0;
    double rho = 0.0;
    double rho_bar = 1.0;     ///< sqrt(1 - rho^2)
    double mu = 0.0;
    double beta = 0.0;
};

/// Structure-of-arrays state of a block of paths.
struct PathBlock {
    std::span<double> log_spot;
    std::span<double> variance;  ///< uncapped full-truncation state
    std::span<double> rate;      ///< short rate at the current time
    std::span<double> int_rate;  ///< trapezoidal integral of the short rate so far
};

/// One full-truncation Euler step of
///   dv = (kappa theta - (kappa+lambda) v+) dt + sigma sqrt(v+) dW_v
///   d ln S = (r - v+/2) dt + sqrt(v+) (rho dW_v + rho_bar dW_perp),  r = mu + beta v+.
void euler_step(Backend b, const EulerCoefficients& k, const PathBlock& block,
                std::span<const double> z_indep, std::span<const double> z_var);

namespace detail {

void philox_uniforms_scalar(std::uint64_t seed, std::uint64_t first_path, std::uint32_t step,
                            std::span<double> u_indep, std::span<double> u_var);
void euler_step_scalar(const EulerCoefficients& k, const PathBlock& block,
                       std::span<const double> z_indep, std::span<const double> z_var);

#if defined(HSIR_HAVE_AVX2)
void philox_uniforms_avx2(std::uint64_t seed, std::uint64_t first_path, std::uint32_t step,
                          std::span<double> u_indep, std::span<double> u_var);
void euler_step_avx2(const EulerCoefficients& k, const PathBlock& block,
                     std::span<const double> z_indep, std::span<const double> z_var);
#endif

#if defined(HSIR_HAVE_NEON)
void euler_step_neon(const EulerCoefficients& k, const PathBlock& block,
                     std::span<const double> z_indep, std::span<const double> z_var);
#endif

} // namespace detail

} // namespace hsir::simd
