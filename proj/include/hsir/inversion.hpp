#pragma once

#include <cstddef>
#include <functional>

#include "hsir/heston_cf.hpp"

namespace hsir::inversion {

struct QuadratureSpec {
    double abs_tol = 1e-9;               ///< target absolute error on each R_j
    double phi_max = 1e5;                ///< largest truncation frequency tried
    std::size_t max_subdivisions = 4000; ///< panel budget
};

void validate(const QuadratureSpec& spec);

/// Characteristic functions stripped of their e^{i phi x} factor, so that
/// f_j(x, phi) = psi(phi, j) * exp(i phi x).
struct CfProvider {
    std::function<cplx(double phi, MeasureIndex j)> psi;
    /// Expected integrated variance of the log price over the horizon. Below
    /// kDegenerateVariance the law is treated as a point mass.
    double integrated_variance = 0.0;
};

inline constexpr double kDegenerateVariance = 1e-8;
/// Lower end of the numerical integral; [0, kPhiMin] is covered by a
/// one-point rectangle using the finite limit of the integrand.
inline constexpr double kPhiMin = 1e-6;

struct ProbabilityPair {
    double r1 = 0.0;
    double r2 = 0.0;
    double achieved_error_estimate = 0.0;
    double phi_cutoff = 0.0;
    std::size_t panels = 0;
};

/// R_j = 1/2 + 1/pi * int_0^inf Re[e^{-i phi ln K} f_j / (i phi)] dphi for j = 1, 2.
///
/// Throws TailNotDecaying if |f_j(phi)|/phi has not dropped below
/// abs_tol/10 by spec.phi_max, and SubdivisionExhausted if the panel budget
/// runs out before the error target is met.
ProbabilityPair gil_pelaez(const CfProvider& cf, double x, double log_strike,
                           const QuadratureSpec& spec = {});

} // namespace hsir::inversion
