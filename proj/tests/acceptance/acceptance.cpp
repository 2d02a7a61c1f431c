// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hsir/bond.hpp"
#include "hsir/cli.hpp"
#include "hsir/heston_cf.hpp"
#include "hsir/mc.hpp"
#include "hsir/pricer.hpp"
#include "hsir/riccati.hpp"

using namespace hsir;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

struct Draw {
    std::mt19937_64 gen;
    std::uniform_real_distribution<double> u{0.0, 1.0};
    explicit Draw(std::uint64_t seed) : gen(seed) {}
    double operator()(double lo, double hi) { return lo + (hi - lo) * u(gen); }

    ModelParams params(double beta_lo, double beta_hi) {
        ModelParams p;
        p.kappa = (*this)(1.0, 3.0);
        p.theta = (*this)(0.02, 0.08);
        p.sigma = (*this)(0.2, 0.5);
        p.lambda = (*this)(-0.2, 0.2);
        p.rho_sv = (*this)(-0.9, 0.9);
        p.mu = (*this)(0.0, 0.05);
        p.beta = (*this)(beta_lo, beta_hi);
        return p;
    }
};

const ModelParams kDefaultBox{2.0, 0.04, 0.3, 0.0, -0.5, 0.03, 0.0};
constexpr double kStrikes[] = {80.0, 100.0, 120.0};
constexpr double kMaturities[] = {0.5, 1.0};
constexpr double kBetas[] = {0.5, 1.0, 2.0};

Outcome bond_maturity_identity() {
    Draw d(1);
    double worst = 0.0;
    for (int n = 0; n < 50; ++n) {
        const ModelParams p = d.params(0.0, 2.0);
        const double v = d(0.0, 1.0);
        worst = std::max(worst, std::abs(bond::bond_price(p, v, 0.0).price - 1.0));
    }
    return {worst <= 1e-14, fmt("max |B(0,v) - 1| = %.3g", worst)};
}

Outcome small_beta_recovery() {
    Draw d(2);
    double worst = 0.0;
    for (int n = 0; n < 10; ++n) {
        ModelParams p = d.params(0.0, 0.0);
        p.beta = 1e-8;
        for (double v : {0.0, 0.04, 0.2, 1.0})
            for (double tau : {0.1, 1.0, 5.0, 30.0})
                worst = std::max(worst, std::abs(bond::bond_price(p, v, tau).price - std::exp(-p.mu * tau)));
    }
    return {worst < 1e-6, fmt("sup |B - exp(-mu tau)| = %.3g", worst)};
}

Outcome bond_ode_residual() {
    Draw d(3);
    std::vector<double> grid;
    for (int i = 0; i <= 50000; ++i) grid.push_back(i * 1e-4);
    double worst = 0.0;
    for (int n = 0; n < 10; ++n) worst = std::max(worst, bond::ode_residual(d.params(0.05, 2.0), grid));
    return {worst < 1e-6, fmt("max residual = %.3g", worst)};
}

Outcome bond_vs_mc() {
    Draw d(4);
    int within = 0;
    double worst = 0.0;
    for (int n = 0; n < 20; ++n) {
        const ModelParams p = d.params(0.5, 2.0);
        const double v0 = d(0.01, 0.1);
        mc::McConfig cfg;
        cfg.n_paths = 100000;
        cfg.n_steps_per_year = 250;
        cfg.seed = 1000 + n;
        const auto e = mc::simulate_bond(p, v0, 1.0, cfg);
        const double z = (bond::bond_price(p, v0, 1.0).price - e.mean) / e.std_error;
        within += std::abs(z) <= 3.0;
        worst = std::max(worst, std::abs(z));
    }
    return {within >= 19, fmt("%g/20 draws within 3 SE, max |z| = %.2f", within, worst)};
}

Outcome riccati_vs_closed_form() {
    // Global error is roughly ten times the local tolerance, so 1e-7 absolute on
    // C of size 10-300 needs a tighter setting than the pricing default.
    const riccati::ToleranceSpec tight{1e-10, 1e-12};
    auto worst_at = [](const riccati::ToleranceSpec& tol) {
        Draw d(5);
        double worst = 0.0;
        for (int n = 0; n < 10; ++n) {
            const ModelParams p = d.params(0.0, 0.0);
            for (double tau : {0.25, 1.0, 5.0})
                for (double phi : {0.05, 1.0, 10.0, 100.0})
                    for (auto j : {MeasureIndex::One, MeasureIndex::Two}) {
                        const auto ode = riccati::integrate_cd(p, tau, phi, j, tol);
                        const auto cf = heston_cf::closed_form_cd(p, 0.0, tau, phi, j);
                        worst = std::max({worst, std::abs(ode.c_val - cf.c_val), std::abs(ode.d_val - cf.d_val)});
                    }
        }
        return worst;
    };
    const double worst = worst_at(tight);
    return {worst < 1e-7, fmt("max |dC|, |dD| = %.3g at rel tol 1e-10 (%.3g at default 1e-8)", worst,
                              worst_at({}))};
}

Outcome model_nesting() {
    Draw d(6);
    double worst = 0.0;
    for (int n = 0; n < 5; ++n) {
        const ModelParams p = d.params(0.0, 0.0);
        ModelParams q = p;
        q.beta = 1e-10;
        const double v0 = d(0.01, 0.1);
        for (double tau : kMaturities)
            for (double k : kStrikes) {
                const MarketState s{100.0, v0, tau};
                const double hes = pricer::price_heston(p, s, {k, OptionKind::Call}).price;
                const double sir = pricer::price_sir(q, s, {k, OptionKind::Call}).price;
                worst = std::max(worst, std::abs(hes - sir));
            }
    }
    return {worst < 1e-6, fmt("max |sir - heston| = %.3g", worst)};
}

Outcome central_validation() {
    double worst = 0.0;
    int points = 0, within = 0;
    for (double beta : kBetas) {
        ModelParams p = kDefaultBox;
        p.beta = beta;
        for (double tau : kMaturities) {
            const MarketState s{100.0, 0.04, tau};
            mc::McConfig cfg;
            cfg.n_paths = 200000;
            const auto est = mc::simulate_prices(p, s, kStrikes, OptionKind::Call, cfg);
            for (std::size_t i = 0; i < std::size(kStrikes); ++i) {
                const double pr = pricer::price_sir(p, s, {kStrikes[i], OptionKind::Call}).price;
                const double z = (pr - est[i].mean) / est[i].std_error;
                worst = std::max(worst, std::abs(z));
                within += std::abs(z) <= 3.0;
                ++points;
            }
        }
    }
    return {within == points, fmt("%g/%g points within 3 SE, max |z| = %.2f", within, points, worst)};
}

Outcome parity_and_bounds() {
    double parity = 0.0, bound = 0.0;
    for (double beta : kBetas) {
        ModelParams p = kDefaultBox;
        p.beta = beta;
        for (double tau : kMaturities)
            for (double k : kStrikes) {
                const MarketState s{100.0, 0.04, tau};
                const auto call = pricer::price_sir(p, s, {k, OptionKind::Call});
                const auto put = pricer::price_sir(p, s, {k, OptionKind::Put});
                const double b = call.bond.price;
                parity = std::max(parity, std::abs(call.price - put.price - (100.0 - k * b)));
                bound = std::max({bound, std::max(0.0, 100.0 - k * b) - call.price, call.price - 100.0});
            }
    }
    return {parity < 1e-6 && bound <= 1e-6,
            fmt("max parity gap = %.3g, max bound violation = %.3g", parity, bound)};
}

Outcome cf_sanity() {
    Draw d(9);
    double modulus = 0.0, symmetry = 0.0;
    bool unit = true;
    for (int model = 0; model < 2; ++model) {
        for (int n = 0; n < 200; ++n) {
            const ModelParams p = d.params(model == 0 ? 0.0 : 0.5, model == 0 ? 0.0 : 2.0);
            const double tau = d(0.05, 10.0), phi = d(0.01, 50.0), v = d(0.0, 0.2);
            const auto j = n % 2 ? MeasureIndex::One : MeasureIndex::Two;
            auto f = [&](double ph) {
                return model == 0 ? heston_cf::characteristic_fn(p, p.mu, 0.3, v, tau, ph, j)
                                  : riccati::sir_characteristic_fn(p, 0.3, v, tau, ph, j);
            };
            unit = unit && f(0.0) == cplx{1.0, 0.0};
            const cplx fp = f(phi), fm = f(-phi);
            modulus = std::max(modulus, std::abs(fp) - 1.0);
            symmetry = std::max(symmetry, std::abs(fm - std::conj(fp)));
        }
    }
    return {unit && modulus <= 1e-10 && symmetry < 1e-9,
            fmt("max |f| - 1 = %.3g, max Hermitian gap = %.3g", modulus, symmetry)};
}

Outcome branch_continuity() {
    double worst = 0.0;
    for (double phi : {1.0, 10.0, 50.0})
        for (auto j : {MeasureIndex::One, MeasureIndex::Two}) {
            double prev = 0.0;
            for (int i = 0; i <= 30000; ++i) {
                const double im = heston_cf::closed_form_cd(kDefaultBox, kDefaultBox.mu, i * 1e-3, phi, j).c_val.imag();
                if (i > 0) worst = std::max(worst, std::abs(im - prev));
                prev = im;
            }
        }
    return {worst <= 1.0, fmt("max successive |d Im C| = %.3g", worst)};
}

Outcome determinism() {
    const std::vector<std::string> args{"verify", "--strike", "80,100,120", "--tau", "0.5,1",
                                        "--beta", "1", "--paths", "20000", "--seed", "7"};
    std::ostringstream a, b, err;
    const int ca = cli::run(args, a, err);
    const int cb = cli::run(args, b, err);
    const bool same = ca == cb && a.str() == b.str() && !a.str().empty();
    return {same, same ? fmt("%g bytes identical", static_cast<double>(a.str().size()))
                       : std::string("outputs differ")};
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"bond maturity identity", bond_maturity_identity},
        {"small-beta bond recovery", small_beta_recovery},
        {"bond ODE residual", bond_ode_residual},
        {"bond vs Monte Carlo", bond_vs_mc},
        {"Riccati vs closed form at beta = 0", riccati_vs_closed_form},
        {"model nesting", model_nesting},
        {"stochastic-rate pricer vs Monte Carlo", central_validation},
        {"parity and arbitrage bounds", parity_and_bounds},
        {"characteristic function sanity", cf_sanity},
        {"branch continuity", branch_continuity},
        {"verify determinism", determinism},
    };
    int failed = 0, n = 0;
    for (const auto& [name, check] : criteria) {
        ++n;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %2d %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", n, name, o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d/%d criteria passed\n", n - failed, n);
    return failed == 0 ? 0 : 1;
}
