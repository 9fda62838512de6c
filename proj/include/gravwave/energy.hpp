#pragma once

#include "gravwave/grid.hpp"
#include "gravwave/mollifier.hpp"

namespace gravwave {

struct EnergyBreakdown {
    double dirichlet = 0.0;
    double bulk = 0.0;
    double total = 0.0;
};

// Dirichlet part plus the sharp wet-region bulk integral of (A - B*y)+.
// The positivity predicate at a node is strict u > 0; rows at or above
// y = A/B carry zero weight. Exact for the full-strip state on a grid with
// A/B on a row.
EnergyBreakdown energy_sharp(const Field& f, const Parameters& p);

// Same with the indicator replaced by 2*B_eps(u). Never exceeds the sharp
// energy and is non-increasing as eps decreases.
EnergyBreakdown energy_eps(const Field& f, const Parameters& p, const MollifierSpec& ms);

// Exact discrete gradient of energy_eps in the weighted L2 pairing:
// -2*laplacian + 2*beta_eps(u)*(A - B*y)+ nodewise, zero on the bottom row.
// inner(gradient, v) equals the directional derivative for every direction v
// with zero bottom trace.
Field gradient_eps(const Field& f, const Parameters& p, const MollifierSpec& ms);

// Action of the second derivative at f on a zero-bottom-trace direction v:
// -2*laplacian(v) + 2*beta_eps'(f)*(A - B*y)+ * v. Self-adjoint in the
// weighted product. Throws ContractViolationError if v has a nonzero bottom
// trace.
Field hessian_apply(const Field& f, const Field& v, const Parameters& p,
                    const MollifierSpec& ms);

// Discrete integral of u_x^2; zero exactly on x-independent fields.
double x_variation(const Field& f);

} // namespace gravwave
