#include "hsir/model.hpp"

#include <cmath>
#include <sstream>

namespace hsir {

namespace {

void require_finite(const char* field, double x) {
    if (!std::isfinite(x)) throw InvalidParameter(field, "must be finite");
}

} // namespace

ValidationReport validate(const ModelParams& p) {
    require_finite("kappa", p.kappa);
    require_finite("theta", p.theta);
    require_finite("sigma", p.sigma);
    require_finite("lambda", p.lambda);
    require_finite("rho_sv", p.rho_sv);
    require_finite("mu", p.mu);
    require_finite("beta", p.beta);

    if (!(p.kappa > 0.0)) throw InvalidParameter("kappa", "must be > 0");
    if (!(p.theta >= 0.0)) throw InvalidParameter("theta", "must be >= 0");
    if (!(p.sigma > 0.0)) throw InvalidParameter("sigma", "must be > 0");
    if (!(std::abs(p.rho_sv) <= 1.0)) throw InvalidParameter("rho_sv", "must lie in [-1, 1]");
    if (!(p.kappa + p.lambda > 0.0)) throw InvalidParameter("kappa+lambda", "must be > 0");
    if (!(p.beta >= 0.0)) throw InvalidParameter("beta", "must be >= 0");

    ValidationReport report;
    report.feller_satisfied = 2.0 * p.kappa * p.theta >= p.sigma * p.sigma;
    if (!report.feller_satisfied) {
        std::ostringstream os;
        os << "Feller condition violated: 2*kappa*theta = " << 2.0 * p.kappa * p.theta
           << " < sigma^2 = " << p.sigma * p.sigma << "; Monte Carlo accuracy may degrade";
        report.warnings.push_back(os.str());
    }
    return report;
}

void validate(const MarketState& s) {
    if (!(std::isfinite(s.spot) && s.spot > 0.0)) throw InvalidParameter("spot", "must be > 0");
    if (!(std::isfinite(s.variance) && s.variance >= 0.0))
        throw InvalidParameter("variance", "must be >= 0");
    if (!(std::isfinite(s.tau) && s.tau >= 0.0)) throw InvalidParameter("tau", "must be >= 0");
}

void validate(const OptionSpec& o) {
    if (!(std::isfinite(o.strike) && o.strike > 0.0)) throw InvalidParameter("strike", "must be > 0");
}

double expected_integrated_variance(const ModelParams& p, double v0, double tau) {
    const double k = p.kappa_q();
    const double th = p.theta_q();
    // (1 - e^{-k tau}) / k, written to stay accurate for small k*tau
    const double decay = -std::expm1(-k * tau) / k;
    return th * tau + (v0 - th) * decay;
}

const char* to_string(OptionKind kind) noexcept {
    return kind == OptionKind::Call ? "call" : "put";
}

} // namespace hsir
