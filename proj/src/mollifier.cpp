#include "gravwave/mollifier.hpp"

#include <algorithm>
#include <cmath>

namespace gravwave {

void validate(const MollifierSpec& ms) {
    if (!(ms.eps > 0.0) || !std::isfinite(ms.eps))
        throw InvalidParameterError("mollifier: eps must be positive and finite");
}

namespace {

// ramp(s) on [0,1] scaled so the plateau value is 1/2; clamped so rounding
// near s=1 cannot push past the plateau
double quintic_ramp(double s) {
    return std::clamp(0.5 * s * s * s * (10.0 + s * (-15.0 + 6.0 * s)), 0.0, 0.5);
}

double quintic_ramp_d(double s) {
    const double u = s * (1.0 - s);
    return 15.0 * u * u;
}

double quintic_ramp_dd(double s) {
    return 30.0 * s * (1.0 - s) * (1.0 - 2.0 * s);
}

// The ExpStep ramp is the logistic of phi(s) = 1/s - 1/(1-s):
// sigma = 1 / (1 + e^phi), with sigma(0+) = 0 and sigma(1-) = 1.
double exp_sigma(double s) {
    const double phi = 1.0 / s - 1.0 / (1.0 - s);
    return 1.0 / (1.0 + std::exp(phi));
}

double exp_ramp(double s) { return 0.5 * exp_sigma(s); }

double exp_ramp_d(double s) {
    const double sg = exp_sigma(s);
    const double w = sg * (1.0 - sg);
    if (w == 0.0) return 0.0;
    const double a = 1.0 / (s * s);
    const double b = 1.0 / ((1.0 - s) * (1.0 - s));
    return 0.5 * w * (a + b);
}

double exp_ramp_dd(double s) {
    const double sg = exp_sigma(s);
    const double w = sg * (1.0 - sg);
    if (w == 0.0) return 0.0;
    const double a = 1.0 / (s * s);
    const double b = 1.0 / ((1.0 - s) * (1.0 - s));
    const double psi = a + b;
    const double dpsi = -2.0 / (s * s * s) + 2.0 / ((1.0 - s) * (1.0 - s) * (1.0 - s));
    // sigma' = w * psi, w' = (1 - 2 sigma) sigma'
    return 0.5 * (w * psi * (1.0 - 2.0 * sg) * psi + w * dpsi);
}

} // namespace

double mollifier_B(const MollifierSpec& ms, double t) {
    validate(ms);
    const double s = t / ms.eps;
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 0.5;
    return ms.kind == MollifierKind::Quintic ? quintic_ramp(s) : exp_ramp(s);
}

double beta(const MollifierSpec& ms, double t) {
    validate(ms);
    const double s = t / ms.eps;
    if (s <= 0.0 || s >= 1.0) return 0.0;
    const double d = ms.kind == MollifierKind::Quintic ? quintic_ramp_d(s) : exp_ramp_d(s);
    return d / ms.eps;
}

double beta_prime(const MollifierSpec& ms, double t) {
    validate(ms);
    const double s = t / ms.eps;
    if (s <= 0.0 || s >= 1.0) return 0.0;
    const double dd = ms.kind == MollifierKind::Quintic ? quintic_ramp_dd(s) : exp_ramp_dd(s);
    return dd / (ms.eps * ms.eps);
}

} // namespace gravwave
