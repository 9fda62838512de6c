#pragma once

#include <utility>
#include <vector>

#include "gravwave/grid.hpp"
#include "gravwave/model.hpp"

namespace gravwave {

enum class ExtractionMethod { LevelCrossing };

// Water surface as a graph over depth: one (y, x) sample per grid row where
// the level theta is crossed on the arm x >= 0.
struct FreeBoundaryCurve {
    struct Sample {
        double y = 0.0;
        double x = 0.0; // in [0, 1/2]
    };
    std::vector<Sample> samples;
    double thetaLevel = 0.0;
    ExtractionMethod method = ExtractionMethod::LevelCrossing;
    int graphViolations = 0; // rows crossing the level more than once
};

struct DiagnosticsReport {
    double minValue = 0.0;
    double maxValue = 0.0;
    double bernsteinExcess = 0.0; // max of |grad u|^2 - (A - By)_+
    double vacuumMass = 0.0;      // sum of u^2 over rows with y >= A/B
    double bernoulliResidualMedian = 0.0;
    double bernoulliResidualMax = 0.0;
    double lipschitzNorm = 0.0; // max centered-difference |grad u|
    int graphViolations = 0;
};

// Nodewise extrema over the whole field, bottom row included.
std::pair<double, double> bounds_check(const Field& f);

// Max over interior rows of centered-difference |grad u|^2 - (A - By)_+.
// Positive values flag gradients steeper than the hydrostatic bound.
double bernstein_check(const Field& f, const Parameters& p);

// Plain sum of u^2 over all nodes at heights y >= A/B; zero when the state
// honors the vacuum region.
double vacuum_check(const Field& f, const Parameters& p);

// Max centered-difference gradient magnitude over interior rows.
double lipschitz_norm(const Field& f);

// Scan each row outward from x = 0 for sign changes of u - theta and place
// one linearly interpolated sample per crossing row. Rows that stay fully
// above or below the level yield no sample; a row with several crossings
// counts as a graph violation and keeps its innermost crossing.
FreeBoundaryCurve extract_free_boundary(const Field& f, double theta);

// At each curve sample: gradient taken one-sided from the wet side, and the
// residual |grad u|^2 - (A - By) evaluated at the sample height. Returns
// (median, max) of the absolute residuals. The curve must be nonempty.
std::pair<double, double> bernoulli_residual(const Field& f, const FreeBoundaryCurve& fb,
                                             const Parameters& p);

// One-stop assembly of every check above at the extraction level theta. An
// empty extracted curve reports zero Bernoulli residuals.
DiagnosticsReport diagnose(const Field& f, const Parameters& p, double theta);

} // namespace gravwave
