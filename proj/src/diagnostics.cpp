#include "gravwave/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gravwave/errors.hpp"

namespace gravwave {

namespace {

// Centered gradient at an interior node, x taken periodically.
struct GradAt {
    double gx = 0.0;
    double gy = 0.0;
};

GradAt centered_gradient(const Field& f, int i, int j) {
    const auto& g = f.grid;
    GradAt out;
    out.gx = (f.atp(i + 1, j) - f.atp(i - 1, j)) / (2.0 * g.hx());
    out.gy = (f.at(i, j + 1) - f.at(i, j - 1)) / (2.0 * g.hy());
    return out;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

std::pair<double, double> bounds_check(const Field& f) {
    validate(f.grid);
    auto [lo, hi] = std::minmax_element(f.values.begin(), f.values.end());
    return {*lo, *hi};
}

double bernstein_check(const Field& f, const Parameters& p) {
    validate(f.grid);
    validate(p);
    const auto& g = f.grid;
    double worst = -std::numeric_limits<double>::infinity();
    for (int j = 1; j < g.ny; ++j) {
        const double w = std::max(p.A - p.B * g.y(j), 0.0);
        for (int i = 0; i < g.nx; ++i) {
            const GradAt d = centered_gradient(f, i, j);
            worst = std::max(worst, d.gx * d.gx + d.gy * d.gy - w);
        }
    }
    return worst;
}

double vacuum_check(const Field& f, const Parameters& p) {
    validate(f.grid);
    validate(p);
    const auto& g = f.grid;
    const double cut = p.A / p.B;
    double mass = 0.0;
    for (int j = 0; j <= g.ny; ++j) {
        if (g.y(j) < cut) continue;
        for (int i = 0; i < g.nx; ++i) mass += f.at(i, j) * f.at(i, j);
    }
    return mass;
}

double lipschitz_norm(const Field& f) {
    validate(f.grid);
    const auto& g = f.grid;
    double worst = 0.0;
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const GradAt d = centered_gradient(f, i, j);
            worst = std::max(worst, d.gx * d.gx + d.gy * d.gy);
        }
    return std::sqrt(worst);
}

FreeBoundaryCurve extract_free_boundary(const Field& f, double theta) {
    validate(f.grid);
    if (!std::isfinite(theta)) throw InvalidParameterError("extract_free_boundary: theta must be finite");
    const auto& g = f.grid;
    const int c = g.nx / 2; // x = 0 lives at this index

    FreeBoundaryCurve fb;
    fb.thetaLevel = theta;
    for (int j = 0; j <= g.ny; ++j) {
        int crossings = 0;
        for (int k = 0; k < g.nx / 2; ++k) {
            const double a = f.atp(c + k, j);
            const double b = f.atp(c + k + 1, j);
            if ((a >= theta) == (b >= theta)) continue;
            ++crossings;
            if (crossings == 1) {
                const double t = (theta - a) / (b - a);
                fb.samples.push_back({g.y(j), (k + t) * g.hx()});
            }
        }
        if (crossings > 1) ++fb.graphViolations;
    }
    return fb;
}

std::pair<double, double> bernoulli_residual(const Field& f, const FreeBoundaryCurve& fb,
                                             const Parameters& p) {
    validate(f.grid);
    validate(p);
    if (fb.samples.empty())
        throw ContractViolationError("bernoulli_residual: curve has no samples");

    const auto& g = f.grid;
    const int c = g.nx / 2;
    std::vector<double> res;
    res.reserve(fb.samples.size());
    for (const auto& s : fb.samples) {
        const int j = std::clamp(static_cast<int>(std::llround(s.y / g.hy())), 0, g.ny);
        const int k = std::clamp(static_cast<int>(std::floor(s.x / g.hx())), 0, g.nx / 2 - 1);
        const int il = (c + k) % g.nx;
        const int ir = (c + k + 1) % g.nx;
        // wet cell of the bracketing pair; gradient is taken there, with the
        // vertical difference one-sided into the water
        const int iw = (f.at(il, j) >= f.at(ir, j)) ? il : ir;
        const double gx = (f.atp(iw + 1, j) - f.atp(iw - 1, j)) / (2.0 * g.hx());
        double gy;
        if (j == 0)
            gy = (f.at(iw, 1) - f.at(iw, 0)) / g.hy();
        else if (j == g.ny)
            gy = (f.at(iw, g.ny) - f.at(iw, g.ny - 1)) / g.hy();
        else if (f.at(iw, j - 1) >= f.at(iw, j + 1))
            gy = (f.at(iw, j) - f.at(iw, j - 1)) / g.hy();
        else
            gy = (f.at(iw, j + 1) - f.at(iw, j)) / g.hy();
        res.push_back(std::abs(gx * gx + gy * gy - (p.A - p.B * s.y)));
    }
    const double mx = *std::max_element(res.begin(), res.end());
    return {median_of(std::move(res)), mx};
}

DiagnosticsReport diagnose(const Field& f, const Parameters& p, double theta) {
    DiagnosticsReport r;
    std::tie(r.minValue, r.maxValue) = bounds_check(f);
    r.bernsteinExcess = bernstein_check(f, p);
    r.vacuumMass = vacuum_check(f, p);
    r.lipschitzNorm = lipschitz_norm(f);
    const FreeBoundaryCurve fb = extract_free_boundary(f, theta);
    r.graphViolations = fb.graphViolations;
    if (!fb.samples.empty())
        std::tie(r.bernoulliResidualMedian, r.bernoulliResidualMax) = bernoulli_residual(f, fb, p);
    return r;
}

} // namespace gravwave
