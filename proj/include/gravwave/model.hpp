#pragma once

#include <string>
#include <vector>

#include "gravwave/errors.hpp"

namespace gravwave {

// Gravity/flux parameters of the periodic strip problem. Both must be > 0.
struct Parameters {
    double A = 0.0;
    double B = 0.0;
};

void validate(const Parameters& p);

enum class Regime { Subcritical, Critical, Supercritical };

const char* regime_name(Regime r);

struct RegimeReport {
    Regime regime = Regime::Supercritical;
    double criticalB = 0.0;     // threshold value of B at this A
    bool admissible = false;
    double conditionValue = 0.0; // NaN when the upper branch is absent
};

// Compares B against 2*(A/3)^{3/2}; equality within rel tol 1e-12 is Critical.
// Fills only the regime part of the report.
RegimeReport classify_regime(const Parameters& p);

// Left-hand side 2*(A/B - Y+) * 2*pi * coth(2*pi*Y+) of the instability
// condition; < 1 means the second even mode at the upper branch is unstable.
// Throws NoUpperBranchError outside the subcritical regime.
double admissibility_condition(const Parameters& p);

// classify_regime plus the admissibility fields when subcritical.
RegimeReport regime_report(const Parameters& p);

struct RegionSample {
    double A = 0.0;
    double B = 0.0;
    RegimeReport report;
};

// Row-major n x n scan of [Amin,Amax] x [Bmin,Bmax]; endpoints included,
// A is the outer (row) index. n >= 2.
std::vector<RegionSample> sample_region(double Amin, double Amax,
                                        double Bmin, double Bmax, int n);

// CSV with header A,B,regime,admissible,condition_value, 17 significant
// digits, one row per sample in scan order.
std::string region_csv(const std::vector<RegionSample>& samples);

} // namespace gravwave
