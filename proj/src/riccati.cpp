#include "hsir/riccati.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace hsir::riccati {

SirCoefficients::SirCoefficients(const ModelParams& params)
    : params_(params), constant_rate_(params.beta <= bond::kBetaSwitch) {
    if (!constant_rate_) bond_ = bond::coefficients(params);
}

double SirCoefficients::g(double tau) const {
    return constant_rate_ ? 0.0 : bond::g_of_tau(bond_, tau);
}

double SirCoefficients::sigma_x_sq(double tau) const {
    const double sg = params_.sigma * g(tau);
    return 1.0 - 2.0 * params_.rho_sv * sg + sg * sg;
}

double SirCoefficients::rho_xv_sigma_x(double tau) const {
    return params_.sigma * (params_.rho_sv - params_.sigma * g(tau));
}

double SirCoefficients::zeta(MeasureIndex j, double tau) const {
    return hsir::zeta(j) * sigma_x_sq(tau);
}

double SirCoefficients::b(MeasureIndex j, double tau) const {
    if (j == MeasureIndex::One) return params_.kappa_q() - params_.rho_sv * params_.sigma;
    return params_.kappa_q() - params_.sigma * params_.sigma * g(tau);
}

namespace {

struct State {
    cplx d;
    cplx c;
};

State operator+(const State& x, const State& y) { return {x.d + y.d, x.c + y.c}; }
State operator*(double h, const State& x) { return {h * x.d, h * x.c}; }

class Rhs {
public:
    Rhs(const SirCoefficients& k, double phi, MeasureIndex j) : k_(k), phi_(phi), j_(j) {}

    State operator()(double tau, const State& y) const {
        const ModelParams& p = k_.params();
        const double sg = p.sigma * k_.g(tau);
        const double sx2 = 1.0 - 2.0 * p.rho_sv * sg + sg * sg;
        const double corr = p.sigma * (p.rho_sv - sg);
        const double bj = j_ == MeasureIndex::One ? p.kappa_q() - p.rho_sv * p.sigma
                                                  : p.kappa_q() - p.sigma * sg;
        const double zj = zeta(j_) * sx2;
        const cplx iphi{0.0, phi_};
        const cplx dd = -0.5 * sx2 * phi_ * phi_ + iphi * corr * y.d
                        + 0.5 * p.sigma * p.sigma * y.d * y.d + zj * iphi - bj * y.d;
        return {dd, k_.a() * y.d};
    }

private:
    const SirCoefficients& k_;
    double phi_;
    MeasureIndex j_;
};

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

double scaled_error(const State& err, const State& y0, const State& y1, const ToleranceSpec& tol) {
    auto one = [&](cplx e, cplx a, cplx b) {
        const double scale = tol.abs + tol.rel * std::max(std::abs(a), std::abs(b));
        return std::abs(e) / scale;
    };
    return std::max(one(err.d, y0.d, y1.d), one(err.c, y0.c, y1.c));
}

} // namespace

OdeSolution integrate_cd(const SirCoefficients& k, double tau, double phi, MeasureIndex j,
                         const ToleranceSpec& tol) {
    OdeSolution sol;
    if (tau <= 0.0 || phi == 0.0) return sol;

    const Rhs f(k, phi, j);
    State y{};
    double t = 0.0;
    State k1 = f(t, y);

    // Initial step from the size of the forcing at tau = 0.
    const double scale0 = tol.abs + tol.rel * std::abs(k1.d);
    double h = std::min(tau, 0.01 * std::pow(scale0 / (std::abs(k1.d) + 1e-300), 0.2));
    h = std::clamp(h, 1e-6 * tau, tau);

    const double h_min = 1e-14 * std::max(1.0, tau);
    while (t < tau) {
        if (sol.steps + sol.rejected >= tol.max_steps) {
            std::ostringstream os;
            os << "Riccati integration exceeded " << tol.max_steps << " steps at tau=" << t
               << " (phi=" << phi << ")";
            throw StepSizeUnderflow(os.str());
        }
        if (t + h > tau) h = tau - t;

        const State k2 = f(t + c2 * h, y + (h * a21) * k1);
        const State k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
        const State k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const State k5 = f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const State k6 =
            f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const State y1 = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
        const State k7 = f(t + h, y1);
        const State err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        const double en = scaled_error(err, y, y1, tol);
        if (!std::isfinite(en)) {
            ++sol.rejected;
            h *= 0.2;
        } else if (en <= 1.0) {
            t = (tau - (t + h) < 1e-15 * tau) ? tau : t + h;
            y = y1;
            k1 = k7;
            ++sol.steps;
            sol.max_local_error = std::max(sol.max_local_error, en);
            h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(en, 1e-10), -0.2)));
        } else {
            ++sol.rejected;
            h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
        }
        if (t < tau && h < h_min) {
            std::ostringstream os;
            os << "Riccati step size underflow at tau=" << t << " (phi=" << phi
               << ", D=" << y.d << ")";
            throw StepSizeUnderflow(os.str());
        }
    }
    sol.c_val = y.c;
    sol.d_val = y.d;
    return sol;
}

OdeSolution integrate_cd(const ModelParams& params, double tau, double phi, MeasureIndex j,
                         const ToleranceSpec& tol) {
    return integrate_cd(SirCoefficients(params), tau, phi, j, tol);
}

cplx sir_characteristic_fn(const SirCoefficients& k, double x, double v, double tau, double phi,
                           MeasureIndex j, const ToleranceSpec& tol) {
    if (phi == 0.0) return {1.0, 0.0};
    const auto s = integrate_cd(k, tau, phi, j, tol);
    return std::exp(s.c_val + s.d_val * v + cplx{0.0, phi * x});
}

cplx sir_characteristic_fn(const ModelParams& params, double x, double v, double tau, double phi,
                           MeasureIndex j, const ToleranceSpec& tol) {
    return sir_characteristic_fn(SirCoefficients(params), x, v, tau, phi, j, tol);
}

} // namespace hsir::riccati
