#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hsir/cli.hpp"

namespace hsir::cli {

namespace {

using json = nlohmann::json;

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

// Drops a trailing '#' comment that is not inside a JSON string.
std::string strip_comment(std::string_view line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (ch == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
        if (ch == '#' && !in_string) return std::string(line.substr(0, i));
    }
    return std::string(line);
}

double as_number(const json& v, const std::string& where) {
    if (!v.is_number()) throw ConfigError(where + ": expected a number");
    return v.get<double>();
}

std::uint64_t as_count(const json& v, const std::string& where) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
    throw ConfigError(where + ": expected a non-negative integer");
}

std::string as_string(const json& v, const std::string& where) {
    if (!v.is_string()) throw ConfigError(where + ": expected a string");
    return v.get<std::string>();
}

std::vector<double> as_numbers(const json& v, const std::string& where) {
    if (v.is_number()) return {v.get<double>()};
    if (!v.is_array() || v.empty()) throw ConfigError(where + ": expected a non-empty number array");
    std::vector<double> out;
    for (const auto& x : v) out.push_back(as_number(x, where));
    return out;
}

OptionKind parse_kind(const std::string& s, const std::string& where) {
    if (s == "call") return OptionKind::Call;
    if (s == "put") return OptionKind::Put;
    throw ConfigError(where + ": expected \"call\" or \"put\"");
}

OutputFormat parse_format(const std::string& s, const std::string& where) {
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    throw ConfigError(where + ": expected \"csv\" or \"json\"");
}

void assign(RunConfig& cfg, const std::string& section, const std::string& key, const json& v) {
    const std::string where = section + "." + key;
    if (section == "model") {
        static const std::array<std::string_view, 7> keys = {"kappa", "theta", "sigma", "lambda",
                                                             "rho_sv", "mu", "beta"};
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw ConfigError("unknown key " + where);
        set_parameter(cfg, key, as_number(v, where));
        return;
    }
    if (section == "market") {
        if (key == "spot" || key == "variance") set_parameter(cfg, key, as_number(v, where));
        else if (key == "tau") cfg.maturities = as_numbers(v, where);
        else throw ConfigError("unknown key " + where);
        return;
    }
    if (section == "grid") {
        if (key == "strikes") cfg.strikes = as_numbers(v, where);
        else if (key == "maturities") cfg.maturities = as_numbers(v, where);
        else if (key == "kind") cfg.kind = parse_kind(as_string(v, where), where);
        else throw ConfigError("unknown key " + where);
        return;
    }
    if (section == "quadrature") {
        if (key == "abs_tol") cfg.quadrature.abs_tol = as_number(v, where);
        else if (key == "phi_max") cfg.quadrature.phi_max = as_number(v, where);
        else if (key == "max_subdivisions") cfg.quadrature.max_subdivisions = as_count(v, where);
        else throw ConfigError("unknown key " + where);
        return;
    }
    if (section == "ode") {
        if (key == "rel_tol") cfg.ode.rel = as_number(v, where);
        else if (key == "abs_tol") cfg.ode.abs = as_number(v, where);
        else if (key == "max_steps") cfg.ode.max_steps = as_count(v, where);
        else throw ConfigError("unknown key " + where);
        return;
    }
    if (section == "mc") {
        if (key == "n_paths") cfg.mc.n_paths = as_count(v, where);
        else if (key == "n_steps_per_year") cfg.mc.n_steps_per_year = as_count(v, where);
        else if (key == "seed") cfg.mc.seed = as_count(v, where);
        else if (key == "threads") cfg.mc.n_threads = static_cast<unsigned>(as_count(v, where));
        else if (key == "scheme") {
            if (as_string(v, where) != "full_truncation_euler")
                throw ConfigError(where + ": only \"full_truncation_euler\" is supported");
        } else throw ConfigError("unknown key " + where);
        return;
    }
    if (section == "output") {
        if (key == "format") cfg.format = parse_format(as_string(v, where), where);
        else throw ConfigError("unknown key " + where);
        return;
    }
    if (section == "sweep") {
        if (!cfg.sweep) cfg.sweep.emplace();
        if (key == "parameter") cfg.sweep->parameter = as_string(v, where);
        else if (key == "values") cfg.sweep->values = as_numbers(v, where);
        else throw ConfigError("unknown key " + where);
        return;
    }
    throw ConfigError("unknown section [" + section + "]");
}

} // namespace

void set_parameter(RunConfig& cfg, std::string_view name, double value) {
    if (name == "kappa") cfg.model.kappa = value;
    else if (name == "theta") cfg.model.theta = value;
    else if (name == "sigma") cfg.model.sigma = value;
    else if (name == "lambda") cfg.model.lambda = value;
    else if (name == "rho_sv" || name == "rho") cfg.model.rho_sv = value;
    else if (name == "mu") cfg.model.mu = value;
    else if (name == "beta") cfg.model.beta = value;
    else if (name == "spot") cfg.market.spot = value;
    else if (name == "variance" || name == "v0") cfg.market.variance = value;
    else throw ConfigError("unknown parameter '" + std::string(name) + "'");
}

RunConfig parse_config(std::string_view text) {
    RunConfig cfg;
    std::string section;
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        const std::string at = "line " + std::to_string(lineno) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(at + "unterminated section header");
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            static constexpr std::string_view kSections[] = {"model", "market", "grid", "quadrature",
                                                             "ode",   "mc",     "output", "sweep"};
            if (std::find(std::begin(kSections), std::end(kSections), section) == std::end(kSections))
                throw ConfigError(at + "unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(at + "expected key = value");
        if (section.empty()) throw ConfigError(at + "key outside of a [section]");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        json parsed;
        try {
            parsed = json::parse(value);
        } catch (const json::parse_error&) {
            throw ConfigError(at + "value of '" + key + "' is not valid JSON: " + value);
        }
        try {
            assign(cfg, section, key, parsed);
        } catch (const ConfigError& e) {
            throw ConfigError(at + e.what());
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void validate(const RunConfig& cfg) {
    hsir::validate(cfg.model);
    MarketState probe = cfg.market;
    probe.tau = 0.0;
    hsir::validate(probe);
    if (cfg.strikes.empty()) throw ConfigError("grid.strikes is empty");
    if (cfg.maturities.empty()) throw ConfigError("grid.maturities is empty");
    for (double k : cfg.strikes) hsir::validate(OptionSpec{k, cfg.kind});
    for (double t : cfg.maturities) {
        if (!(t >= 0.0)) throw InvalidParameter("tau", "maturities must be >= 0");
    }
    inversion::validate(cfg.quadrature);
    if (!(cfg.ode.rel >= 1e-12 && cfg.ode.rel <= 1e-4))
        throw InvalidParameter("ode.rel_tol", "must lie in [1e-12, 1e-4]");
    if (!(cfg.ode.abs > 0.0)) throw InvalidParameter("ode.abs_tol", "must be > 0");
    mc::validate(cfg.mc);
    if (cfg.sweep) {
        if (cfg.sweep->values.empty()) throw ConfigError("sweep.values is empty");
        RunConfig probe_cfg = cfg;
        probe_cfg.sweep.reset();
        for (double x : cfg.sweep->values) {
            set_parameter(probe_cfg, cfg.sweep->parameter, x);
            validate(probe_cfg);
        }
    }
}

} // namespace hsir::cli
