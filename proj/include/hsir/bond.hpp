#pragma once

#include <span>

#include "hsir/model.hpp"

namespace hsir::bond {

/// Below this slope the bond constants overflow (b ~ 1/beta) and the
/// constant-rate branch exp(-mu*tau) is used exactly.
inline constexpr double kBetaSwitch = 1e-10;

/// Constants of G(tau) = (e^{d tau} - 1) / (b + c e^{d tau}).
struct BondCoefficients {
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;
};

struct BondValue {
    double price = 1.0;
    double f_factor = 1.0;
    double g_factor = 0.0;
};

struct BondDynamics {
    double drift = 0.0;     ///< r + lambda*v, per year
    double diffusion = 0.0; ///< G(tau)*sigma*sqrt(v); signed
};

/// Throws DegenerateBeta when beta <= kBetaSwitch.
BondCoefficients coefficients(const ModelParams& params);

double g_of_tau(const BondCoefficients& coeffs, double tau);
double f_of_tau(const ModelParams& params, const BondCoefficients& coeffs, double tau);

/// Discount bond B(tau, v) = F(tau) exp(G(tau) v) paying 1 at maturity.
BondValue bond_price(const ModelParams& params, double v, double tau);

/// G(tau) for any beta, zero on the constant-rate branch.
double g_factor(const ModelParams& params, double tau);

BondDynamics bond_dynamics_coefficients(const ModelParams& params, double v, double tau);

/// Max residual of the two ODEs F and G must satisfy,
///   G' = sigma^2/2 G^2 - (kappa+lambda) G - beta,
///   F'/F = kappa*theta G - mu,
/// with derivatives from finite differences on the supplied grid
/// (centered inside, second-order one-sided at the ends).
double ode_residual(const ModelParams& params, std::span<const double> tau_grid);

} // namespace hsir::bond
