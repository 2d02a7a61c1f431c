#include "hsir/pricer.hpp"

#include <cmath>

namespace hsir::pricer {

const char* to_string(ModelTag tag) noexcept {
    return tag == ModelTag::Heston ? "heston" : "sir_heston";
}

namespace {

void check_inputs(const ModelParams& params, const MarketState& state, const OptionSpec& option) {
    validate(params);
    validate(state);
    validate(option);
}

PriceResult assemble(const inversion::ProbabilityPair& pr, const bond::BondValue& bv,
                     const MarketState& state, const OptionSpec& option, ModelTag tag) {
    PriceResult call;
    call.r1 = pr.r1;
    call.r2 = pr.r2;
    call.bond = bv;
    call.model_tag = tag;
    call.kind = OptionKind::Call;
    call.price = state.spot * pr.r1 - option.strike * bv.price * pr.r2;
    call.err_estimate = (state.spot + option.strike * bv.price) * pr.achieved_error_estimate;
    if (option.kind == OptionKind::Put) return put_from_parity(call, state, option);
    return call;
}

} // namespace

PriceResult price_heston(const ModelParams& params, const MarketState& state,
                         const OptionSpec& option, const inversion::QuadratureSpec& quad) {
    check_inputs(params, state, option);
    if (params.beta != 0.0) throw InvalidParameter("beta", "price_heston requires beta == 0");

    const double r0 = params.mu;
    inversion::CfProvider cf;
    cf.integrated_variance = expected_integrated_variance(params, state.variance, state.tau);
    cf.psi = [&](double phi, MeasureIndex j) {
        return heston_cf::characteristic_fn(params, r0, 0.0, state.variance, state.tau, phi, j);
    };
    const auto pr = inversion::gil_pelaez(cf, std::log(state.spot), std::log(option.strike), quad);
    const auto bv = bond::bond_price(params, state.variance, state.tau);
    return assemble(pr, bv, state, option, ModelTag::Heston);
}

PriceResult price_sir(const ModelParams& params, const MarketState& state,
                      const OptionSpec& option, const inversion::QuadratureSpec& quad,
                      const riccati::ToleranceSpec& ode) {
    if (params.beta == 0.0) return price_heston(params, state, option, quad);
    check_inputs(params, state, option);

    const riccati::SirCoefficients coeffs(params);
    const auto bv = bond::bond_price(params, state.variance, state.tau);
    const double x = std::log(state.spot / bv.price);

    inversion::CfProvider cf;
    cf.integrated_variance = expected_integrated_variance(params, state.variance, state.tau);
    cf.psi = [&](double phi, MeasureIndex j) {
        return riccati::sir_characteristic_fn(coeffs, 0.0, state.variance, state.tau, phi, j, ode);
    };
    const auto pr = inversion::gil_pelaez(cf, x, std::log(option.strike), quad);
    return assemble(pr, bv, state, option, ModelTag::SirHeston);
}

PriceResult price(const ModelParams& params, const MarketState& state, const OptionSpec& option,
                  const inversion::QuadratureSpec& quad, const riccati::ToleranceSpec& ode) {
    return params.beta == 0.0 ? price_heston(params, state, option, quad)
                              : price_sir(params, state, option, quad, ode);
}

PriceResult put_from_parity(const PriceResult& call, const MarketState& state,
                            const OptionSpec& option) {
    PriceResult put = call;
    put.kind = OptionKind::Put;
    put.price = call.price - state.spot + option.strike * call.bond.price;
    return put;
}

} // namespace hsir::pricer
