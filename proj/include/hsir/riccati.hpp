#pragma once

#include <cstddef>

#include "hsir/bond.hpp"
#include "hsir/heston_cf.hpp"

namespace hsir::riccati {

struct ToleranceSpec {
    double rel = 1e-8;
    double abs = 1e-10;
    std::size_t max_steps = 1'000'000;
};

/// Time-dependent coefficients of the characteristic-function ODE once the
/// bond is part of the market (bond volatility sigma*G(tau), rho_bv = 1,
/// rho_bs = rho_sv, unit stock volatility loading).
class SirCoefficients {
public:
    explicit SirCoefficients(const ModelParams& params);

    double g(double tau) const;
    /// sigma_x^2 = 1 - 2 rho_sv sigma G + sigma^2 G^2
    double sigma_x_sq(double tau) const;
    /// rho_xv * sigma_x * sigma = sigma (rho_sv - sigma G)
    double rho_xv_sigma_x(double tau) const;
    double zeta(MeasureIndex j, double tau) const;
    double b(MeasureIndex j, double tau) const;
    double a() const noexcept { return params_.kappa * params_.theta; }

    const ModelParams& params() const noexcept { return params_; }

private:
    ModelParams params_;
    bool constant_rate_;
    bond::BondCoefficients bond_{};
};

struct OdeSolution {
    cplx c_val{0.0, 0.0};
    cplx d_val{0.0, 0.0};
    std::size_t steps = 0;
    std::size_t rejected = 0;
    double max_local_error = 0.0; ///< largest accepted scaled error estimate
};

/// Integrates dD/dtau = -1/2 sigma_x^2 phi^2 + i phi sigma (rho_sv - sigma G) D
///                      + 1/2 sigma^2 D^2 + zeta_j i phi - b_j D,
///            dC/dtau = kappa*theta D,
/// from C = D = 0 at tau = 0, with G evaluated at the running tau.
///
/// Dormand-Prince 5(4) with per-step error control. Throws StepSizeUnderflow
/// when the controller cannot meet the tolerance.
OdeSolution integrate_cd(const SirCoefficients& coeffs, double tau, double phi, MeasureIndex j,
                         const ToleranceSpec& tol = {});

OdeSolution integrate_cd(const ModelParams& params, double tau, double phi, MeasureIndex j,
                         const ToleranceSpec& tol = {});

/// f_j = exp(C + D v + i phi x) with x = ln(S / B(tau, v)).
cplx sir_characteristic_fn(const SirCoefficients& coeffs, double x, double v, double tau,
                           double phi, MeasureIndex j, const ToleranceSpec& tol = {});

cplx sir_characteristic_fn(const ModelParams& params, double x, double v, double tau, double phi,
                           MeasureIndex j, const ToleranceSpec& tol = {});

} // namespace hsir::riccati
