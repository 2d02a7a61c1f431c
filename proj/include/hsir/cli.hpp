#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hsir/inversion.hpp"
#include "hsir/mc.hpp"
#include "hsir/model.hpp"
#include "hsir/riccati.hpp"

namespace hsir::cli {

enum ExitCode : int {
    kOk = 0,
    kInvalidConfig = 2,
    kNumericalFailure = 3,
    kVerificationFailed = 4,
};

enum class OutputFormat { Csv, Json };

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SweepSpec {
    std::string parameter;
    std::vector<double> values;
};

/// Everything a run needs, as read from a config file and flag overrides.
///
/// File syntax: `[section]` headers, `key = value` lines whose values are
/// JSON (numbers, strings, arrays), `#` comments. Sections: model, market,
/// grid, quadrature, ode, mc, output, sweep.
struct RunConfig {
    ModelParams model;
    MarketState market;
    std::vector<double> strikes{100.0};
    std::vector<double> maturities{1.0};
    OptionKind kind = OptionKind::Call;
    inversion::QuadratureSpec quadrature;
    riccati::ToleranceSpec ode;
    mc::McConfig mc;
    OutputFormat format = OutputFormat::Csv;
    std::optional<SweepSpec> sweep;
};

/// Throws ConfigError on syntax errors, unknown sections/keys and wrong value types.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Validates every block; throws InvalidParameter or ConfigError.
void validate(const RunConfig& cfg);

/// Sets a named model/market parameter (kappa, theta, sigma, lambda, rho_sv,
/// mu, beta, spot, variance). Throws ConfigError for unknown names.
void set_parameter(RunConfig& cfg, std::string_view name, double value);

/// Entry point behind the `hsir` executable. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace hsir::cli
