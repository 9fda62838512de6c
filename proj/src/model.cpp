#include "gravwave/model.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "gravwave/flatwaves.hpp"

namespace gravwave {

void validate(const Parameters& p) {
    if (!(p.A > 0.0) || !std::isfinite(p.A))
        throw InvalidParameterError("parameters: A must be positive and finite");
    if (!(p.B > 0.0) || !std::isfinite(p.B))
        throw InvalidParameterError("parameters: B must be positive and finite");
}

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::Subcritical: return "subcritical";
        case Regime::Critical: return "critical";
        case Regime::Supercritical: return "supercritical";
    }
    return "?";
}

RegimeReport classify_regime(const Parameters& p) {
    validate(p);
    RegimeReport rr;
    rr.criticalB = 2.0 * std::pow(p.A / 3.0, 1.5);
    rr.conditionValue = std::numeric_limits<double>::quiet_NaN();
    const double tol = 1e-12 * std::max(p.B, rr.criticalB);
    if (std::abs(p.B - rr.criticalB) <= tol) rr.regime = Regime::Critical;
    else if (p.B < rr.criticalB) rr.regime = Regime::Subcritical;
    else rr.regime = Regime::Supercritical;
    return rr;
}

double admissibility_condition(const Parameters& p) {
    const auto waves = flat_roots(p);
    for (const auto& w : waves) {
        if (w.kind == FlatWaveKind::Plus) {
            const double twoPi = 2.0 * M_PI;
            return 2.0 * (p.A / p.B - w.Y) * twoPi * coth_stable(twoPi * w.Y);
        }
    }
    throw NoUpperBranchError("admissibility_condition: no upper branch at these parameters");
}

RegimeReport regime_report(const Parameters& p) {
    RegimeReport rr = classify_regime(p);
    if (rr.regime == Regime::Subcritical) {
        rr.conditionValue = admissibility_condition(p);
        rr.admissible = rr.conditionValue < 1.0;
    }
    return rr;
}

std::vector<RegionSample> sample_region(double Amin, double Amax,
                                        double Bmin, double Bmax, int n) {
    if (n < 2) throw InvalidParameterError("sample_region: need n >= 2");
    if (!(Amin > 0.0) || !(Bmin > 0.0) || !(Amax >= Amin) || !(Bmax >= Bmin))
        throw InvalidParameterError("sample_region: bounds must satisfy 0 < min <= max");
    std::vector<RegionSample> out;
    out.reserve(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        const double A = Amin + (Amax - Amin) * i / (n - 1);
        for (int j = 0; j < n; ++j) {
            const double B = Bmin + (Bmax - Bmin) * j / (n - 1);
            out.push_back({A, B, regime_report({A, B})});
        }
    }
    return out;
}

std::string region_csv(const std::vector<RegionSample>& samples) {
    std::string out = "A,B,regime,admissible,condition_value\n";
    char buf[160];
    for (const auto& s : samples) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%s,%d,%.17g\n",
                      s.A, s.B, regime_name(s.report.regime),
                      s.report.admissible ? 1 : 0, s.report.conditionValue);
        out += buf;
    }
    return out;
}

} // namespace gravwave
