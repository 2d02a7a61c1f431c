#pragma once

#include <complex>

#include "hsir/model.hpp"

namespace hsir {

using cplx = std::complex<double>;

/// Which of the two probabilities R_1, R_2 a characteristic function belongs to.
enum class MeasureIndex { One = 1, Two = 2 };

/// Log-price drift loading: +1/2 for R_1, -1/2 for R_2.
constexpr double zeta(MeasureIndex j) noexcept { return j == MeasureIndex::One ? 0.5 : -0.5; }

/// Exponent pair of an exponential-affine characteristic function,
/// f = exp(C + D v + i phi x).
struct CfCoefficients {
    cplx c_val{0.0, 0.0};
    cplx d_val{0.0, 0.0};
};

} // namespace hsir

namespace hsir::heston_cf {

/// Closed-form (C, D) of the constant-rate model at real frequency phi.
///
/// Uses the root of d with non-negative real part together with the
/// reciprocal g, so the logarithm in C never crosses its branch cut as tau
/// grows. C includes the r0*i*phi*tau drift of the log spot.
CfCoefficients closed_form_cd(const ModelParams& params, double r0, double tau, double phi,
                              MeasureIndex j);

/// f_j(x, v, tau; phi) with x = ln S.
cplx characteristic_fn(const ModelParams& params, double r0, double x, double v, double tau,
                       double phi, MeasureIndex j);

} // namespace hsir::heston_cf
