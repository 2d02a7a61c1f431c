#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <variant>

#include <CLI11.hpp>

#include "hsir/bond.hpp"
#include "hsir/cli.hpp"
#include "hsir/mc.hpp"
#include "hsir/pricer.hpp"

namespace hsir::cli {

namespace {

using Cell = std::variant<std::string, double>;

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

void write_csv(const Table& t, std::ostream& out) {
    for (std::size_t i = 0; i < t.header.size(); ++i) out << (i ? "," : "") << t.header[i];
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            if (const auto* s = std::get_if<std::string>(&row[i])) out << *s;
            else out << format_double(std::get<double>(row[i]));
        }
        out << '\n';
    }
}

// Newline-delimited JSON, one object per row.
void write_json(const Table& t, std::ostream& out) {
    for (const auto& row : t.rows) {
        out << '{';
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << '"' << t.header[i] << "\":";
            if (const auto* s = std::get_if<std::string>(&row[i])) {
                out << '"' << *s << '"';
            } else {
                const double x = std::get<double>(row[i]);
                if (std::isfinite(x)) out << format_double(x);
                else out << "null";
            }
        }
        out << "}\n";
    }
}

void write(const Table& t, OutputFormat f, std::ostream& out) {
    if (f == OutputFormat::Csv) write_csv(t, out);
    else write_json(t, out);
}

/// Attaches grid context to a numerical failure.
class GridPointError : public NumericalError {
public:
    GridPointError(double strike, double tau, const std::exception& cause)
        : NumericalError(context(strike, tau) + ": " + cause.what()) {}

private:
    static std::string context(double strike, double tau) {
        std::ostringstream os;
        os << "numerical failure at K=" << format_double(strike) << ", tau=" << format_double(tau);
        return os.str();
    }
};

std::vector<double> sorted(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v;
}

const std::vector<std::string> kPriceHeader = {"model_tag", "S",  "K",    "tau",         "v0",
                                               "price",     "r1", "r2",   "bond",        "err_estimate"};

std::vector<pricer::PriceResult> price_grid(const RunConfig& cfg) {
    std::vector<pricer::PriceResult> out;
    for (double tau : sorted(cfg.maturities)) {
        for (double k : sorted(cfg.strikes)) {
            const MarketState state{cfg.market.spot, cfg.market.variance, tau};
            try {
                out.push_back(pricer::price(cfg.model, state, OptionSpec{k, cfg.kind},
                                            cfg.quadrature, cfg.ode));
            } catch (const NumericalError& e) {
                throw GridPointError(k, tau, e);
            }
        }
    }
    return out;
}

std::vector<Cell> price_row(const RunConfig& cfg, double k, double tau, const pricer::PriceResult& r) {
    return {std::string(pricer::to_string(r.model_tag)), cfg.market.spot, k, tau, cfg.market.variance,
            r.price, r.r1, r.r2, r.bond.price, r.err_estimate};
}

Table cmd_price(const RunConfig& cfg) {
    Table t{kPriceHeader, {}};
    const auto results = price_grid(cfg);
    std::size_t n = 0;
    for (double tau : sorted(cfg.maturities))
        for (double k : sorted(cfg.strikes)) t.rows.push_back(price_row(cfg, k, tau, results[n++]));
    return t;
}

Table cmd_sweep(const RunConfig& cfg) {
    if (!cfg.sweep || cfg.sweep->parameter.empty())
        throw ConfigError("sweep needs a parameter name and values ([sweep] or --param/--values)");
    Table t;
    t.header = {"parameter", "value"};
    t.header.insert(t.header.end(), kPriceHeader.begin(), kPriceHeader.end());
    for (double x : cfg.sweep->values) {
        RunConfig point = cfg;
        point.sweep.reset();
        set_parameter(point, cfg.sweep->parameter, x);
        const auto results = price_grid(point);
        std::size_t n = 0;
        for (double tau : sorted(point.maturities)) {
            for (double k : sorted(point.strikes)) {
                std::vector<Cell> row{cfg.sweep->parameter, x};
                auto rest = price_row(point, k, tau, results[n++]);
                row.insert(row.end(), rest.begin(), rest.end());
                t.rows.push_back(std::move(row));
            }
        }
    }
    return t;
}

Table cmd_bond(const RunConfig& cfg) {
    Table t{{"tau", "F", "G", "B"}, {}};
    for (double tau : cfg.maturities) {
        const auto bv = bond::bond_price(cfg.model, cfg.market.variance, tau);
        t.rows.push_back({tau, bv.f_factor, bv.g_factor, bv.price});
    }
    return t;
}

/// z-score of a deterministic price against an MC estimate. With a zero
/// standard error, agreement to rounding counts as z = 0.
double z_score(double price, const mc::McEstimate& e) {
    const double diff = price - e.mean;
    if (e.std_error > 0.0) return diff / e.std_error;
    if (std::abs(diff) <= 1e-9 * (1.0 + std::abs(price))) return 0.0;
    return diff > 0.0 ? INFINITY : -INFINITY;
}

Table cmd_verify(const RunConfig& cfg, bool& all_within) {
    Table t{{"model_tag", "S", "K", "tau", "v0", "price", "mc_mean", "mc_se", "z"}, {}};
    all_within = true;
    const auto results = price_grid(cfg);
    const auto strikes = sorted(cfg.strikes);
    std::size_t n = 0;
    for (double tau : sorted(cfg.maturities)) {
        const MarketState state{cfg.market.spot, cfg.market.variance, tau};
        const auto est = mc::simulate_prices(cfg.model, state, strikes, cfg.kind, cfg.mc);
        for (std::size_t i = 0; i < strikes.size(); ++i) {
            const auto& r = results[n++];
            const double z = z_score(r.price, est[i]);
            all_within = all_within && std::abs(z) <= 3.0;
            t.rows.push_back({std::string(pricer::to_string(r.model_tag)), cfg.market.spot,
                              strikes[i], tau, cfg.market.variance, r.price, est[i].mean,
                              est[i].std_error, z});
        }
    }
    return t;
}

struct Overrides {
    std::string config_path;
    std::string output;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    std::optional<unsigned> threads;
    std::optional<std::size_t> paths;
    std::vector<std::pair<std::string, std::optional<double>>> params;
    std::vector<double> strikes;
    std::vector<double> maturities;
    std::string kind;
    std::string sweep_param;
    std::vector<double> sweep_values;
};

void add_common(CLI::App* cmd, Overrides& o, bool market_grid) {
    cmd->add_option("--config", o.config_path, "Run configuration file");
    cmd->add_option("--output", o.output, "Output format")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--tol", o.tol, "Absolute quadrature tolerance on R_j");
    for (auto& [name, value] : o.params) {
        cmd->add_option("--" + name, value, "Override " + name);
    }
    cmd->add_option("--tau", o.maturities, "Maturities in years")->delimiter(',');
    if (market_grid) {
        cmd->add_option("--strike", o.strikes, "Strikes")->delimiter(',');
        cmd->add_option("--kind", o.kind, "Option kind")->check(CLI::IsMember({"call", "put"}));
    }
}

RunConfig resolve(const Overrides& o) {
    RunConfig cfg = o.config_path.empty() ? RunConfig{} : load_config(o.config_path);
    for (const auto& [name, value] : o.params) {
        if (value) set_parameter(cfg, name, *value);
    }
    if (!o.strikes.empty()) cfg.strikes = o.strikes;
    if (!o.maturities.empty()) cfg.maturities = o.maturities;
    if (o.kind == "put") cfg.kind = OptionKind::Put;
    if (o.kind == "call") cfg.kind = OptionKind::Call;
    if (o.output == "json") cfg.format = OutputFormat::Json;
    if (o.output == "csv") cfg.format = OutputFormat::Csv;
    if (o.tol) cfg.quadrature.abs_tol = *o.tol;
    if (o.seed) cfg.mc.seed = *o.seed;
    if (o.threads) cfg.mc.n_threads = *o.threads;
    if (o.paths) cfg.mc.n_paths = *o.paths;
    if (!o.sweep_param.empty() || !o.sweep_values.empty()) {
        SweepSpec s = cfg.sweep.value_or(SweepSpec{});
        if (!o.sweep_param.empty()) s.parameter = o.sweep_param;
        if (!o.sweep_values.empty()) s.values = o.sweep_values;
        cfg.sweep = s;
    }
    return cfg;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"European option pricing under stochastic volatility with stochastic rates", "hsir"};
    app.require_subcommand(1);

    Overrides o;
    for (const char* name : {"kappa", "theta", "sigma", "lambda", "rho_sv", "mu", "beta", "spot", "variance"})
        o.params.emplace_back(name, std::nullopt);

    auto* price = app.add_subcommand("price", "Semi-analytic prices on a strike x maturity grid");
    add_common(price, o, true);

    auto* bond_cmd = app.add_subcommand("bond", "Discount bond F, G and B on a maturity grid");
    add_common(bond_cmd, o, false);

    auto* verify = app.add_subcommand("verify", "Compare prices against Monte Carlo; exit 4 if any |z| > 3");
    add_common(verify, o, true);
    verify->add_option("--seed", o.seed, "Monte Carlo seed");
    verify->add_option("--threads", o.threads, "Monte Carlo worker threads");
    verify->add_option("--paths", o.paths, "Monte Carlo path count");

    auto* sweep = app.add_subcommand("sweep", "Price grid for each value of one parameter");
    add_common(sweep, o, true);
    sweep->add_option("--param", o.sweep_param, "Parameter to sweep");
    sweep->add_option("--values", o.sweep_values, "Values of the swept parameter")->delimiter(',');

    std::vector<const char*> argv{"hsir"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidConfig;
    }

    RunConfig cfg;
    try {
        cfg = resolve(o);
        validate(cfg);
    } catch (const std::exception& e) {
        err << "invalid configuration: " << e.what() << '\n';
        return kInvalidConfig;
    }

    try {
        Table table;
        int code = kOk;
        if (price->parsed()) {
            table = cmd_price(cfg);
        } else if (bond_cmd->parsed()) {
            table = cmd_bond(cfg);
        } else if (sweep->parsed()) {
            table = cmd_sweep(cfg);
        } else {
            bool within = true;
            table = cmd_verify(cfg, within);
            if (!within) code = kVerificationFailed;
        }
        write(table, cfg.format, out);
        return code;
    } catch (const ConfigError& e) {
        err << "invalid configuration: " << e.what() << '\n';
        return kInvalidConfig;
    } catch (const InvalidParameter& e) {
        err << "invalid configuration: " << e.what() << '\n';
        return kInvalidConfig;
    } catch (const NumericalError& e) {
        err << e.what() << '\n';
        return kNumericalFailure;
    }
}

} // namespace hsir::cli
