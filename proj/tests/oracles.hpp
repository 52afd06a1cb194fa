#pragma once

// Independent closed forms used as test oracles. Nothing here calls the library.

#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

/// Unit descent shape on [0, 1]: 1 at 0, 0 at 1, written out as explicit cubics.
inline double descent(double x)
{
    if (x <= 0.0) {
        return 1.0;
    }
    if (x >= 1.0) {
        return 0.0;
    }
    if (x > 0.5) {
        return 1.0 - descent(1.0 - x);
    }
    if (x <= 0.25) {
        return 1.0 - 16.0 * x * x * x / 3.0;
    }
    const double y = x - 0.25;
    return (1.0 - 1.0 / 12.0) - y - 4.0 * y * y + 16.0 * y * y * y / 3.0;
}

inline double descentSlope(double x)
{
    if (x <= 0.0 || x >= 1.0) {
        return 0.0;
    }
    if (x > 0.5) {
        return descentSlope(1.0 - x);
    }
    if (x <= 0.25) {
        return -16.0 * x * x;
    }
    const double y = x - 0.25;
    return -1.0 - 8.0 * y + 16.0 * y * y;
}

inline std::uint64_t binomial(int m, int k)
{
    if (k < 0 || k > m) {
        return 0;
    }
    std::uint64_t out = 1;
    for (int i = 1; i <= k; ++i) {
        out = out * static_cast<std::uint64_t>(m - k + i) / static_cast<std::uint64_t>(i);
    }
    return out;
}

/// Betti numbers of T^m by counting subsets of the m circle generators.
inline std::vector<int> torusBetti(int m)
{
    std::vector<int> out(static_cast<std::size_t>(m + 1), 0);
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        out[static_cast<std::size_t>(__builtin_popcount(mask))] += 1;
    }
    return out;
}

/// Action of a constant-momentum orbit q0 = ell t at level p0 with H-value h, under
/// the reference loop p = 0: h - p0 * ell.
inline double constantLevelAction(double h, double level, int ell)
{
    return h - level * ell;
}

} // namespace oracle
