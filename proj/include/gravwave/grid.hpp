#pragma once

#include <cstdint>
#include <vector>

#include "gravwave/flatwaves.hpp"
#include "gravwave/model.hpp"

namespace gravwave {

// Uniform grid on the periodic strip T x [0, Ly]. x_i = -1/2 + i*hx wraps
// around, y_j = j*hy with both boundary rows stored (ny+1 rows in total).
struct GridSpec {
    int nx = 0;
    int ny = 0;
    double Ly = 0.0;

    double hx() const { return 1.0 / nx; }
    double hy() const { return Ly / ny; }
    double x(int i) const { return -0.5 + i * hx(); }
    double y(int j) const { return j * hy(); }
    int rows() const { return ny + 1; }
    size_t size() const { return static_cast<size_t>(nx) * (ny + 1); }
    bool operator==(const GridSpec&) const = default;
};

// nx must be even and >= 8, ny >= 8, Ly positive.
void validate(const GridSpec& g);

// Scalar samples on a GridSpec, row-major with the y index outer. State
// fields keep the bottom row pinned at 1; direction fields keep it at 0.
struct Field {
    GridSpec grid;
    std::vector<double> values;

    Field() = default;
    explicit Field(const GridSpec& g, double fill = 0.0)
        : grid(g), values(g.size(), fill) {}

    double& at(int i, int j) { return values[static_cast<size_t>(j) * grid.nx + i]; }
    double at(int i, int j) const { return values[static_cast<size_t>(j) * grid.nx + i]; }
    // x-periodic access
    double atp(int i, int j) const {
        const int n = grid.nx;
        return at(((i % n) + n) % n, j);
    }
};

Field make_state(const GridSpec& g, double fill = 1.0);

bool has_unit_bottom_trace(const Field& f);
bool has_zero_bottom_trace(const Field& f);

// Trapezoid-in-y discrete L2 inner product (half weight on the two boundary
// rows); this is the product all residual norms and eigen solves use, and
// the one the discrete operators are self-adjoint in.
double inner(const Field& a, const Field& b);
double norm(const Field& f);

// 5-point Laplacian: periodic in x, bottom row values read as stored
// (Dirichlet data), reflected ghost above the top row (natural Neumann).
// Output is zero on the bottom row.
Field laplacian_apply(const Field& f);

// Samples of the flat profile: (1 - y/Y)+ for finite branches, all ones for
// the Infinity branch. Bottom row is 1 either way. Throws TruncationError
// when a finite Y does not fit strictly inside [0, Ly).
Field embed_flat(const FlatWave& w, const GridSpec& g);

// Adds amp * cos(2*pi*mode*x) * sin(pi*y/Ly); when seed != 0, adds seeded
// uniform noise of amplitude |amp|/10 shaped by the same vertical bump.
// Bottom row is untouched. amp = 0 returns f unchanged.
Field perturb(const Field& f, int mode, double amp, uint64_t seed);

// True when A/B lies on a grid row (within 1e-12 of one); the bulk
// quadrature is exact for the piecewise-linear weight only in that case.
bool weight_row_aligned(const GridSpec& g, const Parameters& p);

} // namespace gravwave
