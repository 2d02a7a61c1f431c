#pragma once

#include <array>
#include <cstdint>

namespace hsir::rng {

using Philox4x32Counter = std::array<std::uint32_t, 4>;
using Philox4x32Key = std::array<std::uint32_t, 2>;

inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

/// Philox4x32 with 10 rounds. Stateless: the output is a pure function of
/// (counter, key), so any path can be regenerated independently.
constexpr Philox4x32Counter philox4x32(Philox4x32Counter ctr, Philox4x32Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kPhiloxW0;
            key[1] += kPhiloxW1;
        }
        const std::uint64_t p0 = std::uint64_t{kPhiloxM0} * ctr[0];
        const std::uint64_t p1 = std::uint64_t{kPhiloxM1} * ctr[2];
        ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
               static_cast<std::uint32_t>(p1),
               static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
               static_cast<std::uint32_t>(p0)};
    }
    return ctr;
}

/// Maps the top 52 bits of a 64-bit word to the open interval (0, 1).
inline double to_open_unit(std::uint64_t bits) noexcept {
    const auto top = static_cast<double>(bits >> 12);
    return (top + 0.5) * 0x1p-52;
}

/// Standard normal quantile, Wichura's AS241 (PPND16); relative accuracy about 1e-16.
double inverse_normal_cdf(double p) noexcept;

} // namespace hsir::rng
