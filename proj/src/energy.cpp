#include "gravwave/energy.hpp"

#include <algorithm>
#include <cmath>

namespace gravwave {

namespace {

// Both halves of the Dirichlet form: x-differences weighted like the row
// quadrature (half on the boundary rows), y-differences over whole cells.
double dirichlet_energy(const Field& f, double* xPartOut) {
    const GridSpec& g = f.grid;
    const double hx = g.hx(), hy = g.hy();
    const int nx = g.nx;
    double xPart = 0.0, yPart = 0.0;
    for (int j = 0; j <= g.ny; ++j) {
        double row = 0.0;
        for (int i = 0; i < nx; ++i) {
            const double d = f.at(i == nx - 1 ? 0 : i + 1, j) - f.at(i, j);
            row += d * d;
        }
        xPart += (j == 0 || j == g.ny) ? 0.5 * row : row;
    }
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const double d = f.at(i, j + 1) - f.at(i, j);
            yPart += d * d;
        }
    xPart *= hy / hx;
    yPart *= hx / hy;
    if (xPartOut) *xPartOut = xPart;
    return xPart + yPart;
}

// Row sums accumulate in descending value order so that any permutation of
// a row, in particular its rearrangement, produces bitwise the same bulk.
template <class NodeTerm>
double bulk_sum(const Field& f, const Parameters& p, NodeTerm term) {
    const GridSpec& g = f.grid;
    std::vector<double> scratch(static_cast<size_t>(g.nx));
    double total = 0.0;
    for (int j = 0; j <= g.ny; ++j) {
        const double w = p.A - p.B * g.y(j);
        if (w <= 0.0) continue;
        for (int i = 0; i < g.nx; ++i) scratch[static_cast<size_t>(i)] = f.at(i, j);
        std::sort(scratch.begin(), scratch.end(), std::greater<double>());
        double row = 0.0;
        for (double v : scratch) row += term(v);
        total += ((j == 0 || j == g.ny) ? 0.5 : 1.0) * w * row;
    }
    return total * g.hx() * g.hy();
}

} // namespace

EnergyBreakdown energy_sharp(const Field& f, const Parameters& p) {
    validate(f.grid);
    validate(p);
    EnergyBreakdown e;
    e.dirichlet = dirichlet_energy(f, nullptr);
    e.bulk = bulk_sum(f, p, [](double v) { return v > 0.0 ? 1.0 : 0.0; });
    e.total = e.dirichlet + e.bulk;
    return e;
}

EnergyBreakdown energy_eps(const Field& f, const Parameters& p, const MollifierSpec& ms) {
    validate(f.grid);
    validate(p);
    validate(ms);
    EnergyBreakdown e;
    e.dirichlet = dirichlet_energy(f, nullptr);
    e.bulk = bulk_sum(f, p, [&](double v) { return 2.0 * mollifier_B(ms, v); });
    e.total = e.dirichlet + e.bulk;
    return e;
}

Field gradient_eps(const Field& f, const Parameters& p, const MollifierSpec& ms) {
    validate(p);
    validate(ms);
    Field lap = laplacian_apply(f);
    const GridSpec& g = f.grid;
    Field out(g, 0.0);
    for (int j = 1; j <= g.ny; ++j) {
        const double w = std::max(0.0, p.A - p.B * g.y(j));
        for (int i = 0; i < g.nx; ++i)
            out.at(i, j) = -2.0 * lap.at(i, j) + 2.0 * beta(ms, f.at(i, j)) * w;
    }
    return out;
}

Field hessian_apply(const Field& f, const Field& v, const Parameters& p,
                    const MollifierSpec& ms) {
    validate(p);
    validate(ms);
    if (!(f.grid == v.grid))
        throw ContractViolationError("hessian_apply: mismatched grids");
    if (!has_zero_bottom_trace(v))
        throw ContractViolationError("hessian_apply: direction must have zero bottom trace");
    Field lap = laplacian_apply(v);
    const GridSpec& g = f.grid;
    Field out(g, 0.0);
    for (int j = 1; j <= g.ny; ++j) {
        const double w = std::max(0.0, p.A - p.B * g.y(j));
        for (int i = 0; i < g.nx; ++i)
            out.at(i, j) = -2.0 * lap.at(i, j) +
                           2.0 * beta_prime(ms, f.at(i, j)) * w * v.at(i, j);
    }
    return out;
}

double x_variation(const Field& f) {
    double xPart = 0.0;
    dirichlet_energy(f, &xPart);
    return xPart;
}

} // namespace gravwave
