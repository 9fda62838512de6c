#pragma once

// Test-side reference implementations, kept deliberately independent of the
// library code paths they check.

#include <cmath>
#include <functional>
#include <random>

#include "gravwave/grid.hpp"

namespace oracle {

// Plain bisection to ~1e-15 relative; fn must change sign on [lo, hi].
inline double bisect(const std::function<double(double)>& fn, double lo, double hi) {
    double flo = fn(lo);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = fn(mid);
        if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Fourth-order central difference of a scalar function.
inline double diff5(const std::function<double(double)>& fn, double x, double h) {
    return (-fn(x + 2 * h) + 8 * fn(x + h) - 8 * fn(x - h) + fn(x - 2 * h)) / (12 * h);
}

// Random state field: smooth low-mode content plus rough noise, values kept
// in [lo, hi], bottom row 1.
inline gravwave::Field random_state(const gravwave::GridSpec& g, uint64_t seed,
                                    double lo = 0.0, double hi = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::uniform_real_distribution<double> ph(0.0, 2.0 * M_PI);
    const double a1 = uni(rng), a2 = uni(rng), p1 = ph(rng), p2 = ph(rng);
    gravwave::Field f(g, 0.0);
    for (int i = 0; i < g.nx; ++i) f.at(i, 0) = 1.0;
    for (int j = 1; j <= g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double s = 0.5 + 0.25 * a1 * std::cos(2 * M_PI * g.x(i) + p1) *
                                       std::sin(M_PI * g.y(j) / g.Ly) +
                             0.2 * a2 * std::sin(4 * M_PI * g.x(i) + p2) +
                             0.3 * (uni(rng) - 0.5);
            f.at(i, j) = lo + (hi - lo) * std::clamp(s, 0.0, 1.0);
        }
    return f;
}

// Random direction field with zero bottom trace.
inline gravwave::Field random_direction(const gravwave::GridSpec& g, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    gravwave::Field v(g, 0.0);
    for (int j = 1; j <= g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) v.at(i, j) = uni(rng);
    return v;
}

} // namespace oracle
