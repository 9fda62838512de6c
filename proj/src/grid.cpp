#include "gravwave/grid.hpp"

#include <cmath>
#include <random>

namespace gravwave {

void validate(const GridSpec& g) {
    if (g.nx < 8 || g.nx % 2 != 0)
        throw InvalidParameterError("grid: nx must be even and >= 8");
    if (g.ny < 8)
        throw InvalidParameterError("grid: ny must be >= 8");
    if (!(g.Ly > 0.0) || !std::isfinite(g.Ly))
        throw InvalidParameterError("grid: Ly must be positive and finite");
}

Field make_state(const GridSpec& g, double fill) {
    validate(g);
    Field f(g, fill);
    for (int i = 0; i < g.nx; ++i) f.at(i, 0) = 1.0;
    return f;
}

bool has_unit_bottom_trace(const Field& f) {
    for (int i = 0; i < f.grid.nx; ++i)
        if (f.at(i, 0) != 1.0) return false;
    return true;
}

bool has_zero_bottom_trace(const Field& f) {
    for (int i = 0; i < f.grid.nx; ++i)
        if (f.at(i, 0) != 0.0) return false;
    return true;
}

double inner(const Field& a, const Field& b) {
    const GridSpec& g = a.grid;
    if (!(g == b.grid))
        throw ContractViolationError("inner: mismatched grids");
    const double w = g.hx() * g.hy();
    double total = 0.0;
    for (int j = 0; j <= g.ny; ++j) {
        double row = 0.0;
        for (int i = 0; i < g.nx; ++i) row += a.at(i, j) * b.at(i, j);
        total += (j == 0 || j == g.ny) ? 0.5 * row : row;
    }
    return w * total;
}

double norm(const Field& f) { return std::sqrt(inner(f, f)); }

Field laplacian_apply(const Field& f) {
    const GridSpec& g = f.grid;
    validate(g);
    const double ihx2 = 1.0 / (g.hx() * g.hx());
    const double ihy2 = 1.0 / (g.hy() * g.hy());
    Field out(g, 0.0);
    const int nx = g.nx;
    for (int j = 1; j <= g.ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const double c = f.at(i, j);
            const double xl = f.at(i == 0 ? nx - 1 : i - 1, j);
            const double xr = f.at(i == nx - 1 ? 0 : i + 1, j);
            const double yd = f.at(i, j - 1);
            const double yu = j == g.ny ? f.at(i, j - 1) : f.at(i, j + 1);
            out.at(i, j) = (xl + xr - 2.0 * c) * ihx2 + (yd + yu - 2.0 * c) * ihy2;
        }
    }
    return out;
}

Field embed_flat(const FlatWave& w, const GridSpec& g) {
    validate(g);
    Field f = make_state(g, 1.0);
    if (w.kind == FlatWaveKind::Infinity) return f;
    if (!(w.Y > 0.0))
        throw DomainError("embed_flat: finite branch needs Y > 0");
    if (w.Y >= g.Ly)
        throw TruncationError("embed_flat: strip height must exceed the profile depth");
    for (int j = 1; j <= g.ny; ++j) {
        const double v = std::max(0.0, 1.0 - g.y(j) / w.Y);
        for (int i = 0; i < g.nx; ++i) f.at(i, j) = v;
    }
    return f;
}

Field perturb(const Field& f, int mode, double amp, uint64_t seed) {
    validate(f.grid);
    if (amp == 0.0) return f;
    const GridSpec& g = f.grid;
    Field out = f;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    const double noiseAmp = seed != 0 ? std::abs(amp) / 10.0 : 0.0;
    for (int j = 1; j <= g.ny; ++j) {
        const double bump = std::sin(M_PI * g.y(j) / g.Ly);
        for (int i = 0; i < g.nx; ++i) {
            double d = amp * std::cos(2.0 * M_PI * mode * g.x(i)) * bump;
            if (noiseAmp != 0.0) d += noiseAmp * uni(rng) * bump;
            out.at(i, j) += d;
        }
    }
    return out;
}

bool weight_row_aligned(const GridSpec& g, const Parameters& p) {
    const double rows = (p.A / p.B) / g.hy();
    return std::abs(rows - std::round(rows)) <= 1e-12 * (1.0 + std::abs(rows));
}

} // namespace gravwave
