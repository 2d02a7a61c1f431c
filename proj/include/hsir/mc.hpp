#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hsir/model.hpp"
#include "hsir/simd/kernels.hpp"

namespace hsir::mc {

enum class Scheme { FullTruncationEuler };

struct McConfig {
    std::size_t n_paths = 100'000;
    std::size_t n_steps_per_year = 250;
    std::uint64_t seed = 42;
    Scheme scheme = Scheme::FullTruncationEuler;
    /// Worker threads; 0 uses the hardware concurrency. Results do not depend on it.
    unsigned n_threads = 0;
    /// Kernel backend; unset uses simd::active_backend(). Results do not depend on it.
    std::optional<simd::Backend> backend;
};

void validate(const McConfig& cfg);

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
};

/// Terminal values of every simulated path, in path order.
struct TerminalSample {
    std::vector<double> log_spot;
    std::vector<double> variance;
    std::vector<double> int_rate; ///< integral of the short rate over [0, tau]
    std::size_t n_steps = 0;
};

/// Number of Euler steps used for a horizon: ceil(tau * steps_per_year), at least 1.
std::size_t step_count(double tau, std::size_t steps_per_year);

/// Simulates the risk-neutral dynamics
///   dv = (kappa theta - (kappa+lambda) v) dt + sigma sqrt(v) dz2,
///   d ln S = (r - v/2) dt + sqrt(v) dz1,  corr(dz1, dz2) = rho_sv,  r = mu + beta v,
/// with full truncation. Path i draws its normals from Philox keyed by the
/// seed with counter (i, step), so any subset of paths is reproducible.
TerminalSample simulate_terminal(const ModelParams& params, const MarketState& state,
                                 const McConfig& cfg);

/// Mean and standard error sample_std / sqrt(n), summed pairwise in path order.
McEstimate estimate(std::span<const double> values);

McEstimate simulate_price(const ModelParams& params, const MarketState& state,
                          const OptionSpec& option, const McConfig& cfg);

/// One simulation shared across strikes; estimates in strike order.
std::vector<McEstimate> simulate_prices(const ModelParams& params, const MarketState& state,
                                        std::span<const double> strikes, OptionKind kind,
                                        const McConfig& cfg);

/// E[exp(-int_0^tau (mu + beta v_s) ds)].
McEstimate simulate_bond(const ModelParams& params, double v0, double tau, const McConfig& cfg);

/// Fraction of paths with S_T > K and its binomial standard error. Requires beta == 0.
McEstimate simulate_exercise_prob(const ModelParams& params, const MarketState& state,
                                  const OptionSpec& option, const McConfig& cfg);

} // namespace hsir::mc
