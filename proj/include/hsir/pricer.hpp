#pragma once

#include "hsir/bond.hpp"
#include "hsir/inversion.hpp"
#include "hsir/riccati.hpp"

namespace hsir::pricer {

enum class ModelTag { Heston, SirHeston };

const char* to_string(ModelTag tag) noexcept;

struct PriceResult {
    double price = 0.0;
    double r1 = 0.0;
    double r2 = 0.0;
    bond::BondValue bond{};
    ModelTag model_tag = ModelTag::Heston;
    OptionKind kind = OptionKind::Call;
    double err_estimate = 0.0; ///< absolute error bound on price from the quadrature
};

/// Constant-rate model: call = S R_1 - K e^{-mu tau} R_2. Requires beta == 0.
PriceResult price_heston(const ModelParams& params, const MarketState& state,
                         const OptionSpec& option, const inversion::QuadratureSpec& quad = {});

/// Stochastic-rate model: call = S R_1 - K B(tau, v) R_2 with R_j from the
/// numerically integrated characteristic functions at x = ln(S / B).
/// beta == 0 delegates to price_heston.
PriceResult price_sir(const ModelParams& params, const MarketState& state,
                      const OptionSpec& option, const inversion::QuadratureSpec& quad = {},
                      const riccati::ToleranceSpec& ode = {});

/// Dispatches on beta: price_heston for beta == 0, price_sir otherwise.
PriceResult price(const ModelParams& params, const MarketState& state, const OptionSpec& option,
                  const inversion::QuadratureSpec& quad = {},
                  const riccati::ToleranceSpec& ode = {});

/// put = call - S + K B
PriceResult put_from_parity(const PriceResult& call, const MarketState& state,
                            const OptionSpec& option);

} // namespace hsir::pricer
