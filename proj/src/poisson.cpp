#include "gravwave/poisson.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <vector>

namespace gravwave {

// the FFTW planner mutates global state; executes are fine concurrently
static std::mutex planner_mutex;

struct StripPoissonSolver::Impl {
    GridSpec g;
    std::vector<double> mu;        // symbol of the x-part per halfcomplex slot
    mutable std::vector<double> work;
    mutable std::vector<double> diag, rhs; // Thomas scratch
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;

    explicit Impl(const GridSpec& grid) : g(grid) {
        validate(g);
        const int nx = g.nx, ny = g.ny;
        work.assign(static_cast<size_t>(nx) * ny, 0.0);
        diag.assign(static_cast<size_t>(ny), 0.0);
        rhs.assign(static_cast<size_t>(ny), 0.0);
        mu.resize(static_cast<size_t>(nx));
        const double ihx2 = 1.0 / (g.hx() * g.hx());
        for (int q = 0; q < nx; ++q) {
            const int k = q <= nx / 2 ? q : nx - q;
            mu[static_cast<size_t>(q)] = (2.0 - 2.0 * std::cos(2.0 * M_PI * k / nx)) * ihx2;
        }
        const fftw_r2r_kind fk = FFTW_R2HC, ik = FFTW_HC2R;
        std::lock_guard<std::mutex> lock(planner_mutex);
        fwd = fftw_plan_many_r2r(1, &g.nx, ny, work.data(), nullptr, 1, nx,
                                 work.data(), nullptr, 1, nx, &fk, FFTW_ESTIMATE);
        inv = fftw_plan_many_r2r(1, &g.nx, ny, work.data(), nullptr, 1, nx,
                                 work.data(), nullptr, 1, nx, &ik, FFTW_ESTIMATE);
    }

    ~Impl() {
        std::lock_guard<std::mutex> lock(planner_mutex);
        if (fwd) fftw_destroy_plan(fwd);
        if (inv) fftw_destroy_plan(inv);
    }
};

StripPoissonSolver::StripPoissonSolver(const GridSpec& g) : impl_(new Impl(g)) {}
StripPoissonSolver::~StripPoissonSolver() = default;

const GridSpec& StripPoissonSolver::grid() const { return impl_->g; }

Field StripPoissonSolver::solve(const Field& r, double shift) const {
    const GridSpec& g = impl_->g;
    if (!(r.grid == g)) throw ContractViolationError("poisson: field grid mismatch");
    if (!(shift >= 0.0)) throw InvalidParameterError("poisson: shift must be >= 0");
    const int nx = g.nx, ny = g.ny;
    auto& work = impl_->work;
    for (int j = 1; j <= ny; ++j)
        for (int i = 0; i < nx; ++i)
            work[static_cast<size_t>(j - 1) * nx + i] = r.at(i, j);

    fftw_execute(impl_->fwd);

    const double ihy2 = 1.0 / (g.hy() * g.hy());
    const double off = -2.0 * ihy2;
    auto& diag = impl_->diag;
    auto& rhs = impl_->rhs;
    for (int q = 0; q < nx; ++q) {
        const double d = 4.0 * ihy2 + 2.0 * impl_->mu[static_cast<size_t>(q)] + shift;
        // rows j = 1..ny; the top row couples to ny-1 with doubled weight
        diag[0] = d;
        rhs[0] = work[static_cast<size_t>(q)];
        for (int j = 1; j < ny; ++j) {
            const double sub = j == ny - 1 ? 2.0 * off : off;
            const double m = sub / diag[static_cast<size_t>(j - 1)];
            diag[static_cast<size_t>(j)] = d - m * off;
            rhs[static_cast<size_t>(j)] =
                work[static_cast<size_t>(j) * nx + q] - m * rhs[static_cast<size_t>(j - 1)];
        }
        double prev = rhs[static_cast<size_t>(ny - 1)] / diag[static_cast<size_t>(ny - 1)];
        work[static_cast<size_t>(ny - 1) * nx + q] = prev;
        for (int j = ny - 2; j >= 0; --j) {
            prev = (rhs[static_cast<size_t>(j)] - off * prev) / diag[static_cast<size_t>(j)];
            work[static_cast<size_t>(j) * nx + q] = prev;
        }
    }

    fftw_execute(impl_->inv);

    Field out(g, 0.0);
    const double scale = 1.0 / nx;
    for (int j = 1; j <= ny; ++j)
        for (int i = 0; i < nx; ++i)
            out.at(i, j) = work[static_cast<size_t>(j - 1) * nx + i] * scale;
    return out;
}

} // namespace gravwave
