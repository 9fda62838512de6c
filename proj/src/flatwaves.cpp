#include "gravwave/flatwaves.hpp"

#include <cmath>
#include <limits>

namespace gravwave {

const char* flat_wave_kind_name(FlatWaveKind k) {
    switch (k) {
        case FlatWaveKind::Minus: return "minus";
        case FlatWaveKind::Plus: return "plus";
        case FlatWaveKind::Zero: return "zero";
        case FlatWaveKind::Infinity: return "infinity";
    }
    return "?";
}

double cubic_p(const Parameters& p, double Y) {
    return (p.A * Y - p.B * Y * Y) * Y - 1.0;
}

double flat_energy(const Parameters& p, double Y) {
    validate(p);
    if (!(Y > 0.0)) throw DomainError("flat_energy: depth must be positive");
    return 1.0 / Y + p.A * Y - 0.5 * p.B * Y * Y;
}

double uinfinity_energy(const Parameters& p) {
    validate(p);
    return p.A * p.A / (2.0 * p.B);
}

namespace {

double cubic_dp(const Parameters& p, double Y) {
    return 2.0 * p.A * Y - 3.0 * p.B * Y * Y;
}

// One or two Newton corrections; the starting guesses are already within
// O(1e-10) so this only tightens the residual.
double polish_root(const Parameters& p, double Y) {
    const double scale = 1.0 + p.A * Y * Y + p.B * Y * Y * Y;
    for (int it = 0; it < 8; ++it) {
        const double f = cubic_p(p, Y);
        if (std::abs(f) <= 1e-12 * scale) break;
        const double df = cubic_dp(p, Y);
        if (df == 0.0) break;
        Y -= f / df;
    }
    return Y;
}

double upper_root_closed_form(const Parameters& p) {
    const double ratio = p.A / p.B;
    double arg = 1.0 - 27.0 * p.B * p.B / (2.0 * p.A * p.A * p.A);
    if (arg < -1.0) arg = -1.0;
    if (arg > 1.0) arg = 1.0;
    return ratio / 3.0 * (1.0 + 2.0 * std::cos(std::acos(arg) / 3.0));
}

double lower_root_bisect(const Parameters& p) {
    // p(0+) = -1 and p at the cubic's maximum is > 0 when subcritical.
    double lo = std::numeric_limits<double>::min();
    double hi = (2.0 * p.A) / (3.0 * p.B);
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (cubic_p(p, mid) < 0.0) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

std::vector<FlatWave> flat_roots(const Parameters& p) {
    const RegimeReport rr = classify_regime(p);
    std::vector<FlatWave> out;
    out.push_back({FlatWaveKind::Infinity,
                   std::numeric_limits<double>::infinity(),
                   uinfinity_energy(p)});
    if (rr.regime == Regime::Critical) {
        const double Y0 = (2.0 * p.A) / (3.0 * p.B);
        out.push_back({FlatWaveKind::Zero, Y0, flat_energy(p, Y0)});
    } else if (rr.regime == Regime::Subcritical) {
        const double Ym = polish_root(p, lower_root_bisect(p));
        const double Yp = polish_root(p, upper_root_closed_form(p));
        out.push_back({FlatWaveKind::Minus, Ym, flat_energy(p, Ym)});
        out.push_back({FlatWaveKind::Plus, Yp, flat_energy(p, Yp)});
    }
    return out;
}

double coth_stable(double t) {
    if (t > 20.0) return 1.0;
    return 1.0 + 2.0 / std::expm1(2.0 * t);
}

std::vector<SpectrumEntry> second_variation_spectrum(const Parameters& p, int mmax) {
    if (mmax < 0) throw InvalidParameterError("second_variation_spectrum: mmax must be >= 0");
    const auto waves = flat_roots(p);
    const FlatWave* plus = nullptr;
    for (const auto& w : waves)
        if (w.kind == FlatWaveKind::Plus) plus = &w;
    if (!plus)
        throw NoUpperBranchError("second_variation_spectrum: no upper branch at these parameters");
    const double Y = plus->Y;

    const double lam0 = 2.0 / (Y * Y * Y) - p.B;
    const double lam0_alt = 2.0 * p.A / Y - 3.0 * p.B;
    if (std::abs(lam0 - lam0_alt) > 1e-10 * (1.0 + std::abs(lam0)))
        throw ContractViolationError("second_variation_spectrum: root identity check failed");

    std::vector<SpectrumEntry> out;
    out.reserve(static_cast<size_t>(mmax) + 1);
    out.push_back({0, lam0});
    for (int m = 1; m <= mmax; ++m) {
        const double k = 2.0 * M_PI * m;
        out.push_back({m, (2.0 * k / (Y * Y)) * coth_stable(k * Y) - p.B});
    }
    return out;
}

} // namespace gravwave
