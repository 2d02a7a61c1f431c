#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hsir {

// Errors -------------------------------------------------------------------

class InvalidParameter : public std::invalid_argument {
public:
    InvalidParameter(std::string field, const std::string& constraint)
        : std::invalid_argument(field + ": " + constraint), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Base for failures of the numerical machinery (as opposed to bad input).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DegenerateBeta : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class StepSizeUnderflow : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class TailNotDecaying : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class SubdivisionExhausted : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Domain types -------------------------------------------------------------

/// Model constants shared by the variance process, the bond and the option.
///
/// Times are year fractions and rates are continuously compounded. The
/// short rate is r = mu + beta * v; beta == 0 is the constant-rate model.
struct ModelParams {
    double kappa = 2.0;   ///< mean-reversion speed
    double theta = 0.04;  ///< long-run variance
    double sigma = 0.3;   ///< vol-of-vol
    double lambda = 0.0;  ///< volatility risk premium coefficient (premium = lambda * v)
    double rho_sv = -0.5; ///< stock/variance correlation
    double mu = 0.03;     ///< rate level
    double beta = 0.0;    ///< rate slope on variance

    /// Risk-neutral mean-reversion speed kappa + lambda.
    double kappa_q() const noexcept { return kappa + lambda; }
    /// Risk-neutral long-run variance kappa*theta / (kappa + lambda).
    double theta_q() const noexcept { return kappa * theta / kappa_q(); }
};

struct MarketState {
    double spot = 100.0;
    double variance = 0.04;
    double tau = 1.0;
};

enum class OptionKind { Call, Put };

struct OptionSpec {
    double strike = 100.0;
    OptionKind kind = OptionKind::Call;
};

struct ValidationReport {
    bool feller_satisfied = true;
    std::vector<std::string> warnings;
};

/// Throws InvalidParameter on any hard constraint violation; a failed Feller
/// condition only produces a warning.
ValidationReport validate(const ModelParams& params);

void validate(const MarketState& state);
void validate(const OptionSpec& option);

/// Expected integral of v over [0, tau] under the risk-neutral variance dynamics.
double expected_integrated_variance(const ModelParams& params, double v0, double tau);

const char* to_string(OptionKind kind) noexcept;

} // namespace hsir
