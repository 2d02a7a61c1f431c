#include "hsir/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "hsir/rng.hpp"

namespace hsir::mc {

namespace {

constexpr std::size_t kBlock = 512;

double pairwise_sum(std::span<const double> x) {
    if (x.size() <= 64) {
        double s = 0.0;
        for (double v : x) s += v;
        return s;
    }
    const std::size_t half = x.size() / 2;
    return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

void simulate_block(const ModelParams& p, const MarketState& s, const McConfig& cfg,
                    simd::Backend backend, std::size_t n_steps, std::size_t first,
                    std::size_t count, TerminalSample& out) {
    std::vector<double> rate(count), u_indep(count), u_var(count);
    const simd::PathBlock blk{
        std::span(out.log_spot).subspan(first, count),
        std::span(out.variance).subspan(first, count),
        std::span(rate),
        std::span(out.int_rate).subspan(first, count),
    };
    const double v0p = s.variance > 0.0 ? s.variance : 0.0;
    std::fill(blk.log_spot.begin(), blk.log_spot.end(), std::log(s.spot));
    std::fill(blk.variance.begin(), blk.variance.end(), s.variance);
    std::fill(blk.rate.begin(), blk.rate.end(), p.mu + p.beta * v0p);
    std::fill(blk.int_rate.begin(), blk.int_rate.end(), 0.0);

    simd::EulerCoefficients k;
    k.dt = s.tau / static_cast<double>(n_steps);
    k.kappa_theta = p.kappa * p.theta;
    k.kappa_q = p.kappa_q();
    k.sigma = p.sigma;
    k.rho = p.rho_sv;
    k.rho_bar = std::sqrt(1.0 - p.rho_sv * p.rho_sv);
    k.mu = p.mu;
    k.beta = p.beta;

    for (std::size_t step = 0; step < n_steps; ++step) {
        simd::philox_uniforms(backend, cfg.seed, first, static_cast<std::uint32_t>(step), u_indep,
                              u_var);
        for (std::size_t i = 0; i < count; ++i) {
            u_indep[i] = rng::inverse_normal_cdf(u_indep[i]);
            u_var[i] = rng::inverse_normal_cdf(u_var[i]);
        }
        simd::euler_step(backend, k, blk, u_indep, u_var);
    }
}

std::vector<double> discount_factors(const TerminalSample& t) {
    std::vector<double> df(t.int_rate.size());
    std::transform(t.int_rate.begin(), t.int_rate.end(), df.begin(),
                   [](double ir) { return std::exp(-ir); });
    return df;
}

} // namespace

void validate(const McConfig& cfg) {
    if (cfg.n_paths < 1000) throw InvalidParameter("n_paths", "must be >= 1000");
    if (cfg.n_steps_per_year < 50) throw InvalidParameter("n_steps_per_year", "must be >= 50");
}

std::size_t step_count(double tau, std::size_t steps_per_year) {
    if (tau <= 0.0) return 0;
    const double raw = tau * static_cast<double>(steps_per_year);
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(raw - 1e-9)));
}

TerminalSample simulate_terminal(const ModelParams& params, const MarketState& state,
                                 const McConfig& cfg) {
    validate(params);
    validate(state);
    validate(cfg);

    TerminalSample out;
    out.n_steps = step_count(state.tau, cfg.n_steps_per_year);
    out.log_spot.resize(cfg.n_paths);
    out.variance.resize(cfg.n_paths);
    out.int_rate.resize(cfg.n_paths);

    const simd::Backend backend = cfg.backend.value_or(simd::active_backend());
    const std::size_t n_blocks = (cfg.n_paths + kBlock - 1) / kBlock;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t b = next++; b < n_blocks; b = next++) {
            const std::size_t first = b * kBlock;
            const std::size_t count = std::min(kBlock, cfg.n_paths - first);
            simulate_block(params, state, cfg, backend, out.n_steps, first, count, out);
        }
    };

    unsigned threads = cfg.n_threads ? cfg.n_threads : std::thread::hardware_concurrency();
    threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(n_blocks));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    return out;
}

McEstimate estimate(std::span<const double> values) {
    McEstimate e;
    e.n_paths = values.size();
    if (values.empty()) return e;
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (*lo == *hi) {
        e.mean = *lo;
        return e;
    }
    const double n = static_cast<double>(values.size());
    e.mean = pairwise_sum(values) / n;
    std::vector<double> sq(values.size());
    std::transform(values.begin(), values.end(), sq.begin(), [m = e.mean](double x) {
        return (x - m) * (x - m);
    });
    const double var = values.size() > 1 ? pairwise_sum(sq) / (n - 1.0) : 0.0;
    e.std_error = std::sqrt(var / n);
    return e;
}

std::vector<McEstimate> simulate_prices(const ModelParams& params, const MarketState& state,
                                        std::span<const double> strikes, OptionKind kind,
                                        const McConfig& cfg) {
    for (double k : strikes) validate(OptionSpec{k, kind});
    const auto term = simulate_terminal(params, state, cfg);
    const auto df = discount_factors(term);

    std::vector<McEstimate> out;
    std::vector<double> payoff(cfg.n_paths);
    for (double strike : strikes) {
        for (std::size_t i = 0; i < payoff.size(); ++i) {
            const double st = std::exp(term.log_spot[i]);
            const double intrinsic = kind == OptionKind::Call ? st - strike : strike - st;
            payoff[i] = df[i] * (intrinsic > 0.0 ? intrinsic : 0.0);
        }
        out.push_back(estimate(payoff));
    }
    return out;
}

McEstimate simulate_price(const ModelParams& params, const MarketState& state,
                          const OptionSpec& option, const McConfig& cfg) {
    const double k[] = {option.strike};
    return simulate_prices(params, state, k, option.kind, cfg).front();
}

McEstimate simulate_bond(const ModelParams& params, double v0, double tau, const McConfig& cfg) {
    const auto term = simulate_terminal(params, MarketState{1.0, v0, tau}, cfg);
    return estimate(discount_factors(term));
}

McEstimate simulate_exercise_prob(const ModelParams& params, const MarketState& state,
                                  const OptionSpec& option, const McConfig& cfg) {
    validate(option);
    if (params.beta != 0.0)
        throw InvalidParameter("beta", "exercise probability is defined for beta == 0");
    const auto term = simulate_terminal(params, state, cfg);
    const double log_k = std::log(option.strike);
    const auto hits = std::count_if(term.log_spot.begin(), term.log_spot.end(),
                                    [log_k](double x) { return x > log_k; });
    McEstimate e;
    e.n_paths = cfg.n_paths;
    const double n = static_cast<double>(cfg.n_paths);
    e.mean = static_cast<double>(hits) / n;
    e.std_error = std::sqrt(e.mean * (1.0 - e.mean) / n);
    return e;
}

} // namespace hsir::mc
