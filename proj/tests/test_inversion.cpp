#include <doctest.h>

#include <cmath>

#include "hsir/heston_cf.hpp"
#include "hsir/inversion.hpp"

using namespace hsir;
using inversion::CfProvider;
using inversion::gil_pelaez;
using inversion::QuadratureSpec;

namespace {

double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Lognormal log price with total variance w and drift m: measure two has
// mean m - w/2, measure one (share numeraire) mean m + w/2.
CfProvider lognormal(double w, double m) {
    return {[=](double phi, MeasureIndex j) {
                const double shift = j == MeasureIndex::One ? 0.5 * w : -0.5 * w;
                return std::exp(cplx{-0.5 * w * phi * phi, phi * (m + shift)});
            },
            w};
}

CfProvider heston(const ModelParams& p, double v, double tau) {
    return {[=](double phi, MeasureIndex j) {
                return heston_cf::characteristic_fn(p, p.mu, 0.0, v, tau, phi, j);
            },
            expected_integrated_variance(p, v, tau)};
}

const ModelParams kBox{2.0, 0.04, 0.3, 0.0, -0.5, 0.03, 0.0};

} // namespace

TEST_CASE("lognormal probabilities match N(d1) and N(d2)") {
    for (double w : {0.0004, 0.01, 0.04, 0.25})
        for (double k : {-0.8, -0.2, 0.0, 0.05, 0.3, 1.0}) {
            const double m = 0.02;
            const auto pr = gil_pelaez(lognormal(w, m), k, 0.0);
            const double d2 = (k + m - 0.5 * w) / std::sqrt(w);
            const double d1 = d2 + std::sqrt(w);
            CHECK(std::abs(pr.r1 - norm_cdf(d1)) < 1e-8);
            CHECK(std::abs(pr.r2 - norm_cdf(d2)) < 1e-8);
            CHECK(pr.achieved_error_estimate < 1e-8);
            CHECK(pr.phi_cutoff > 0.0);
        }
}

TEST_CASE("deep in and out of the money probabilities reach 1 and 0") {
    const double v = 0.04, tau = 1.0;
    const auto itm = gil_pelaez(heston(kBox, v, tau), 20.0, 0.0);
    CHECK(std::abs(itm.r1 - 1.0) < 1e-6);
    CHECK(std::abs(itm.r2 - 1.0) < 1e-6);
    const auto otm = gil_pelaez(heston(kBox, v, tau), -20.0, 0.0);
    CHECK(std::abs(otm.r1) < 1e-6);
    CHECK(std::abs(otm.r2) < 1e-6);
}

TEST_CASE("probabilities fall with strike and stay in [0, 1]") {
    for (double tau : {0.1, 1.0, 5.0}) {
        const CfProvider cf = heston(kBox, 0.04, tau);
        double p1 = 2.0, p2 = 2.0;
        for (double kk = 30.0; kk <= 300.0; kk += 5.0) {
            const auto pr = gil_pelaez(cf, std::log(100.0), std::log(kk));
            CHECK(pr.r1 <= p1 + 1e-9);
            CHECK(pr.r2 <= p2 + 1e-9);
            CHECK(pr.r1 >= -1e-9);
            CHECK(pr.r2 <= 1.0 + 1e-9);
            // share measure puts more weight on high outcomes
            CHECK(pr.r1 >= pr.r2 - 1e-9);
            p1 = pr.r1;
            p2 = pr.r2;
        }
    }
}

TEST_CASE("only x minus log strike matters") {
    const CfProvider cf = heston(kBox, 0.06, 2.0);
    const auto a = gil_pelaez(cf, std::log(100.0), std::log(110.0));
    const auto b = gil_pelaez(cf, std::log(100.0) + 3.0, std::log(110.0) + 3.0);
    CHECK(a.r1 == doctest::Approx(b.r1).epsilon(1e-10));
    CHECK(a.r2 == doctest::Approx(b.r2).epsilon(1e-10));
}

TEST_CASE("tightening the tolerance changes the result by less than the looser tolerance") {
    const CfProvider cf = heston(kBox, 0.04, 1.0);
    for (double tol : {1e-6, 1e-8}) {
        const auto coarse = gil_pelaez(cf, std::log(100.0), std::log(95.0), {tol});
        const auto fine = gil_pelaez(cf, std::log(100.0), std::log(95.0), {tol / 2});
        CHECK(std::abs(coarse.r1 - fine.r1) <= tol);
        CHECK(std::abs(coarse.r2 - fine.r2) <= tol);
    }
}

TEST_CASE("degenerate law is an indicator at the forward") {
    ModelParams p = kBox;
    p.theta = 0.0;
    const CfProvider cf = heston(p, 0.0, 1.0);
    // forward = 100 e^{0.03}
    CHECK(gil_pelaez(cf, std::log(100.0), std::log(102.0)).r2 == 1.0);
    CHECK(gil_pelaez(cf, std::log(100.0), std::log(104.0)).r2 == 0.0);
    CHECK(gil_pelaez(cf, std::log(100.0), std::log(104.0)).r1 == 0.0);
}

TEST_CASE("failure modes are reported") {
    // a point mass that claims nonzero variance never decays
    const CfProvider flat{[](double phi, MeasureIndex) { return std::exp(cplx{0.0, 0.01 * phi}); },
                          0.04};
    CHECK_THROWS_AS(gil_pelaez(flat, 0.0, 0.0, {1e-9, 1e3}), TailNotDecaying);

    QuadratureSpec tiny;
    tiny.max_subdivisions = 4;
    CHECK_THROWS_AS(gil_pelaez(lognormal(1e-4, 0.0), 3.0, 0.0, tiny), SubdivisionExhausted);

    CHECK_THROWS_AS(gil_pelaez(lognormal(0.04, 0.0), 0.0, 0.0, {1e-2}), InvalidParameter);
    CHECK_THROWS_AS(gil_pelaez(lognormal(0.04, 0.0), 0.0, 0.0, {1e-13}), InvalidParameter);
}
