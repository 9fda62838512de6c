#pragma once

#include <vector>

#include "gravwave/model.hpp"

namespace gravwave {

// Branches of x-independent critical points. Minus/Plus are the two finite
// roots in the subcritical regime, Zero the double root at criticality,
// Infinity the full-strip state u == 1.
enum class FlatWaveKind { Minus, Plus, Zero, Infinity };

const char* flat_wave_kind_name(FlatWaveKind k);

struct FlatWave {
    FlatWaveKind kind = FlatWaveKind::Infinity;
    double Y = 0.0;      // +inf for the Infinity branch
    double energy = 0.0;
};

// p(Y) = A*Y^2 - B*Y^3 - 1; finite-depth profiles exist at its positive roots.
double cubic_p(const Parameters& p, double Y);

// Energy of the depth-Y profile: 1/Y + A*Y - (B/2)*Y^2. Requires Y > 0.
double flat_energy(const Parameters& p, double Y);

// Energy A^2/(2B) of the full-strip state.
double uinfinity_energy(const Parameters& p);

// All flat critical points for the given parameters, Infinity branch first,
// finite branches by increasing Y. Y+ comes from the trigonometric closed
// form of the depressed cubic, Y- from bisection; both are Newton-polished
// until |p(Y)| <= 1e-12 * (1 + A*Y^2 + B*Y^3).
std::vector<FlatWave> flat_roots(const Parameters& p);

// coth via expm1; arguments above 20 return exactly 1.
double coth_stable(double t);

struct SpectrumEntry {
    int m = 0;
    double lambda = 0.0;
};

// Second-variation eigenvalues at the upper branch against even horizontal
// modes cos(2*pi*m*x): lambda_0 = 2/Y+^3 - B and
// lambda_m = (4*pi*m/Y+^2) * coth(2*pi*m*Y+) - B, m = 0..mmax.
// Throws NoUpperBranchError outside the subcritical regime.
std::vector<SpectrumEntry> second_variation_spectrum(const Parameters& p, int mmax);

} // namespace gravwave
