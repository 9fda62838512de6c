#pragma once

#include "gravwave/errors.hpp"

namespace gravwave {

// Smoothed step profiles used to regularize the wet-region indicator.
// Quintic is the polynomial ramp (C^2 at the ends), ExpStep the C-infinity
// transition built from exp(-1/s).
enum class MollifierKind { Quintic, ExpStep };

struct MollifierSpec {
    double eps = 0.05;
    MollifierKind kind = MollifierKind::Quintic;
};

void validate(const MollifierSpec& ms);

// B_eps(t) = B(t/eps): 0 for t <= 0, 1/2 for t >= eps, smooth in between.
double mollifier_B(const MollifierSpec& ms, double t);

// beta_eps = d/dt B_eps; supported on (0, eps).
double beta(const MollifierSpec& ms, double t);

// d/dt beta_eps; changes sign once inside the ramp.
double beta_prime(const MollifierSpec& ms, double t);

} // namespace gravwave
