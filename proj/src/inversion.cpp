#include "hsir/inversion.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>
#include <vector>

namespace hsir::inversion {

void validate(const QuadratureSpec& s) {
    if (!(s.abs_tol >= 1e-12 && s.abs_tol <= 1e-3))
        throw InvalidParameter("abs_tol", "must lie in [1e-12, 1e-3]");
    if (!(s.phi_max > 0.0)) throw InvalidParameter("phi_max", "must be > 0");
    if (s.max_subdivisions < 1) throw InvalidParameter("max_subdivisions", "must be >= 1");
}

namespace {

// 7-point Gauss / 15-point Kronrod on [-1, 1]; nodes listed from the edge inward.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights at kXgk[1], kXgk[3], kXgk[5], kXgk[7].
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

using Pair = std::array<double, 2>;

struct Panel {
    double lo, hi;
    Pair value;
    Pair error;
    double key() const { return std::max(error[0], error[1]); }
    bool operator<(const Panel& o) const { return key() < o.key(); }
};

template <class F>
Panel gauss_kronrod(const F& integrand, double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    Pair kron{}, gauss{};
    for (std::size_t n = 0; n < kXgk.size(); ++n) {
        const double dx = half * kXgk[n];
        const Pair fa = integrand(mid - dx);
        const Pair fb = n + 1 == kXgk.size() ? Pair{0.0, 0.0} : integrand(mid + dx);
        for (int c = 0; c < 2; ++c) {
            const double s = fa[c] + fb[c];
            kron[c] += kWgk[n] * s;
            if (n % 2 == 1) gauss[c] += kWg[n / 2] * s;
        }
    }
    Panel p{lo, hi, {}, {}};
    for (int c = 0; c < 2; ++c) {
        p.value[c] = half * kron[c];
        p.error[c] = std::abs(half * (kron[c] - gauss[c]));
    }
    return p;
}

} // namespace

ProbabilityPair gil_pelaez(const CfProvider& cf, double x, double log_strike,
                           const QuadratureSpec& spec) {
    validate(spec);
    const double k = x - log_strike;
    ProbabilityPair out;

    if (cf.integrated_variance < kDegenerateVariance) {
        // Point mass at the forward: the phase slope of psi at 0 gives the drift.
        constexpr double h = 1e-6;
        const double m1 = std::arg(cf.psi(h, MeasureIndex::One)) / h;
        const double m2 = std::arg(cf.psi(h, MeasureIndex::Two)) / h;
        out.r1 = k + m1 >= 0.0 ? 1.0 : 0.0;
        out.r2 = k + m2 >= 0.0 ? 1.0 : 0.0;
        return out;
    }

    auto tail_bound = [&](double phi) {
        return std::max(std::abs(cf.psi(phi, MeasureIndex::One)),
                        std::abs(cf.psi(phi, MeasureIndex::Two))) / phi;
    };
    double cutoff = 1.0;
    double tail = tail_bound(cutoff);
    while (tail >= spec.abs_tol / 10.0) {
        if (cutoff >= spec.phi_max) {
            std::ostringstream os;
            os << "characteristic function tail |f|/phi = " << tail << " at phi=" << cutoff
               << " exceeds " << spec.abs_tol / 10.0;
            throw TailNotDecaying(os.str());
        }
        cutoff = std::min(2.0 * cutoff, spec.phi_max);
        tail = tail_bound(cutoff);
    }
    out.phi_cutoff = cutoff;

    // Re[e^{i phi k} psi / (i phi)] = Im[e^{i phi k} psi] / phi
    auto integrand = [&](double phi) -> Pair {
        const cplx phase{std::cos(phi * k), std::sin(phi * k)};
        return {std::imag(phase * cf.psi(phi, MeasureIndex::One)) / phi,
                std::imag(phase * cf.psi(phi, MeasureIndex::Two)) / phi};
    };

    // Resolve the e^{i phi k} oscillation from the start.
    const double span = cutoff - kPhiMin;
    const auto budget = std::max<std::size_t>(spec.max_subdivisions, 1);
    auto initial = static_cast<std::size_t>(std::ceil(span * (std::abs(k) + 1.0) / (2.0 * std::numbers::pi)));
    initial = std::clamp<std::size_t>(initial, std::min<std::size_t>(4, budget),
                                      std::max<std::size_t>(budget / 2, 1));

    std::priority_queue<Panel> heap;
    Pair total{}, total_err{};
    for (std::size_t n = 0; n < initial; ++n) {
        const double lo = kPhiMin + span * static_cast<double>(n) / static_cast<double>(initial);
        const double hi = n + 1 == initial
                              ? cutoff
                              : kPhiMin + span * static_cast<double>(n + 1) / static_cast<double>(initial);
        Panel p = gauss_kronrod(integrand, lo, hi);
        for (int c = 0; c < 2; ++c) {
            total[c] += p.value[c];
            total_err[c] += p.error[c];
        }
        heap.push(p);
    }

    // Error target on the raw integral; half the budget is left to the tail.
    const double target = 0.5 * std::numbers::pi * spec.abs_tol;
    while (std::max(total_err[0], total_err[1]) > target) {
        if (heap.size() >= spec.max_subdivisions) {
            std::ostringstream os;
            os << "quadrature budget of " << spec.max_subdivisions
               << " panels exhausted; error estimate " << std::max(total_err[0], total_err[1]) / std::numbers::pi;
            throw SubdivisionExhausted(os.str());
        }
        const Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        const Panel left = gauss_kronrod(integrand, worst.lo, mid);
        const Panel right = gauss_kronrod(integrand, mid, worst.hi);
        for (int c = 0; c < 2; ++c) {
            total[c] += left.value[c] + right.value[c] - worst.value[c];
            total_err[c] += left.error[c] + right.error[c] - worst.error[c];
        }
        heap.push(left);
        heap.push(right);
    }
    out.panels = heap.size();

    // Fresh sums avoid the drift of the running updates.
    Pair sum{}, err{};
    while (!heap.empty()) {
        for (int c = 0; c < 2; ++c) {
            sum[c] += heap.top().value[c];
            err[c] += heap.top().error[c];
        }
        heap.pop();
    }
    const Pair head = integrand(kPhiMin);
    out.r1 = 0.5 + (sum[0] + kPhiMin * head[0]) / std::numbers::pi;
    out.r2 = 0.5 + (sum[1] + kPhiMin * head[1]) / std::numbers::pi;
    out.achieved_error_estimate = (std::max(err[0], err[1]) + tail) / std::numbers::pi;
    return out;
}

} // namespace hsir::inversion
