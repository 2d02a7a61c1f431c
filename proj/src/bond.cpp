#include "hsir/bond.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace hsir::bond {

BondCoefficients coefficients(const ModelParams& p) {
    if (!(p.beta > kBetaSwitch))
        throw DegenerateBeta("beta <= 1e-10: use the constant-rate bond exp(-mu*tau)");
    const double alpha = p.kappa_q();
    const double root = std::sqrt(alpha * alpha + 2.0 * p.beta * p.sigma * p.sigma);
    BondCoefficients k;
    k.d = -root;
    k.b = (alpha + root) / (2.0 * p.beta);
    // c = (-alpha + root) / (2 beta), rewritten via b*c = sigma^2 / (2 beta)
    // so that small beta does not cancel.
    k.c = p.sigma * p.sigma / (alpha + root);
    return k;
}

double g_of_tau(const BondCoefficients& k, double tau) {
    const double e = std::exp(k.d * tau);
    return std::expm1(k.d * tau) / (k.b + k.c * e);
}

double f_of_tau(const ModelParams& p, const BondCoefficients& k, double tau) {
    const double eta = p.kappa * p.theta;
    // ln(b + c e^{d tau}) - ln(b + c) = log1p(c (e^{d tau} - 1) / (b + c)),
    // the ratio is bounded by 1 in magnitude so nothing overflows.
    const double log_ratio = std::log1p(k.c * std::expm1(k.d * tau) / (k.b + k.c));
    // eta * int_0^tau G = -eta tau / b + eta (b + c) / (b c d) * log_ratio
    const double weight = eta * (1.0 / k.b + 1.0 / k.c) / k.d;
    return std::exp(-(p.mu + eta / k.b) * tau + weight * log_ratio);
}

BondValue bond_price(const ModelParams& p, double v, double tau) {
    BondValue out;
    if (p.beta <= kBetaSwitch) {
        out.f_factor = std::exp(-p.mu * tau);
        out.g_factor = 0.0;
        out.price = out.f_factor;
        return out;
    }
    const auto k = coefficients(p);
    out.f_factor = f_of_tau(p, k, tau);
    out.g_factor = g_of_tau(k, tau);
    out.price = out.f_factor * std::exp(out.g_factor * v);
    return out;
}

double g_factor(const ModelParams& p, double tau) {
    if (p.beta <= kBetaSwitch) return 0.0;
    return g_of_tau(coefficients(p), tau);
}

BondDynamics bond_dynamics_coefficients(const ModelParams& p, double v, double tau) {
    const double r = p.mu + p.beta * v;
    return {r + p.lambda * v, g_factor(p, tau) * p.sigma * std::sqrt(v)};
}

double ode_residual(const ModelParams& p, std::span<const double> grid) {
    const std::size_t n = grid.size();
    if (n < 3) return 0.0;

    std::vector<double> g(n), f(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto bv = bond_price(p, 0.0, grid[i]);
        g[i] = bv.g_factor;
        f[i] = bv.f_factor;
    }

    // Derivative of y at i, second order on a possibly non-uniform grid.
    auto deriv = [&](const std::vector<double>& y, std::size_t i) {
        std::size_t i0, i1, i2;
        if (i == 0) {
            i0 = 0, i1 = 1, i2 = 2;
        } else if (i == n - 1) {
            i0 = n - 3, i1 = n - 2, i2 = n - 1;
        } else {
            i0 = i - 1, i1 = i, i2 = i + 1;
        }
        // Lagrange derivative through three points evaluated at grid[i].
        const double x = grid[i], x0 = grid[i0], x1 = grid[i1], x2 = grid[i2];
        const double l0 = ((x - x1) + (x - x2)) / ((x0 - x1) * (x0 - x2));
        const double l1 = ((x - x0) + (x - x2)) / ((x1 - x0) * (x1 - x2));
        const double l2 = ((x - x0) + (x - x1)) / ((x2 - x0) * (x2 - x1));
        return l0 * y[i0] + l1 * y[i1] + l2 * y[i2];
    };

    const double alpha = p.kappa_q();
    const double eta = p.kappa * p.theta;
    const double s2 = p.sigma * p.sigma;
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dg = deriv(g, i);
        const double df = deriv(f, i);
        const double r1 = 0.5 * s2 * g[i] * g[i] - alpha * g[i] - p.beta - dg;
        const double r2 = eta * g[i] - p.mu - df / f[i];
        worst = std::max({worst, std::abs(r1), std::abs(r2)});
    }
    return worst;
}

} // namespace hsir::bond
