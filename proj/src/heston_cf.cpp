#include "hsir/heston_cf.hpp"

#include <cmath>

namespace hsir::heston_cf {

CfCoefficients closed_form_cd(const ModelParams& p, double r0, double tau, double phi,
                              MeasureIndex j) {
    if (phi == 0.0 || tau == 0.0) return {};

    const cplx i{0.0, 1.0};
    const double s2 = p.sigma * p.sigma;
    const double a = p.kappa * p.theta;
    const double bj = j == MeasureIndex::One ? p.kappa_q() - p.rho_sv * p.sigma : p.kappa_q();
    const double u = zeta(j);

    const cplx beta = bj - p.rho_sv * p.sigma * phi * i;
    const cplx d = std::sqrt(beta * beta - s2 * (2.0 * u * phi * i - phi * phi));
    // g here is the reciprocal of the textbook g, paired with e^{-d tau};
    // with Re d >= 0 the term g e^{-d tau} decays and ln(.) stays continuous.
    const cplx g = (beta - d) / (beta + d);
    const cplx e = std::exp(-d * tau);
    const cplx one_minus_ge = 1.0 - g * e;

    CfCoefficients out;
    out.d_val = (beta - d) / s2 * ((1.0 - e) / one_minus_ge);
    out.c_val = r0 * phi * i * tau
                + a / s2 * ((beta - d) * tau - 2.0 * std::log(one_minus_ge / (1.0 - g)));
    return out;
}

cplx characteristic_fn(const ModelParams& p, double r0, double x, double v, double tau, double phi,
                       MeasureIndex j) {
    if (phi == 0.0) return {1.0, 0.0};
    const auto cd = closed_form_cd(p, r0, tau, phi, j);
    return std::exp(cd.c_val + cd.d_val * v + cplx{0.0, phi * x});
}

} // namespace hsir::heston_cf
