#include "gravwave/minmax.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <vector>

namespace gravwave {

namespace {

// Nodal equations of the energy gradient, rows j = 1..ny unknown, bottom row
// Dirichlet. Nonsymmetric as a plain matrix (the top-row ghost reflection
// doubles one coupling); symmetric only in the row-weighted product, which a
// direct factorization does not care about.
Eigen::SparseMatrix<double> assemble_jacobian(const Field& f, const Parameters& p,
                                              const MollifierSpec& ms) {
    const GridSpec& g = f.grid;
    const int nx = g.nx, ny = g.ny;
    const double ihx2 = 1.0 / (g.hx() * g.hx());
    const double ihy2 = 1.0 / (g.hy() * g.hy());
    const int n = nx * ny;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(n) * 5);
    auto id = [nx](int i, int j) { return (j - 1) * nx + i; };
    for (int j = 1; j <= ny; ++j) {
        const double w = std::max(p.A - p.B * g.y(j), 0.0);
        for (int i = 0; i < nx; ++i) {
            const int row = id(i, j);
            const double center =
                4.0 * ihx2 + 4.0 * ihy2 + 2.0 * beta_prime(ms, f.at(i, j)) * w;
            trip.emplace_back(row, row, center);
            trip.emplace_back(row, id((i + 1) % nx, j), -2.0 * ihx2);
            trip.emplace_back(row, id((i + nx - 1) % nx, j), -2.0 * ihx2);
            if (j < ny) trip.emplace_back(row, id(i, j + 1), -2.0 * ihy2);
            if (j > 1) trip.emplace_back(row, id(i, j - 1), j == ny ? -4.0 * ihy2 : -2.0 * ihy2);
        }
    }
    Eigen::SparseMatrix<double> H(n, n);
    H.setFromTriplets(trip.begin(), trip.end());
    return H;
}

} // namespace

NewtonResult refine_saddle(const Field& f0, const Parameters& p,
                           const MollifierSpec& ms, const NewtonOptions& opt) {
    validate(p);
    validate(ms);
    validate(f0.grid);
    if (!has_unit_bottom_trace(f0))
        throw ContractViolationError("refine_saddle: start must carry bottom value 1");
    if (!(opt.tol > 0.0) || opt.maxIter < 0)
        throw InvalidParameterError("refine_saddle: tol must be positive, maxIter >= 0");

    const GridSpec& g = f0.grid;
    const int nx = g.nx, ny = g.ny;
    const int n = nx * ny;

    Field f = opt.projectEven ? detail::mirror_symmetrize(f0) : f0;
    double res = norm(gradient_eps(f, p, ms));

    for (int iter = 0;; ++iter) {
        if (res <= opt.tol) return NewtonResult{std::move(f), res, iter};
        if (iter >= opt.maxIter)
            throw NewtonDivergenceError("refine_saddle: iteration cap reached",
                                        NewtonResult{std::move(f), res, iter});

        const Field grad = gradient_eps(f, p, ms);
        Eigen::VectorXd rhs(n);
        for (int j = 1; j <= ny; ++j)
            for (int i = 0; i < nx; ++i)
                rhs[(j - 1) * nx + i] = -grad.at(i, j);

        Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
        Eigen::SparseMatrix<double> H = assemble_jacobian(f, p, ms);
        lu.analyzePattern(H);
        lu.factorize(H);
        if (lu.info() != Eigen::Success)
            throw NewtonDivergenceError("refine_saddle: singular linearization",
                                        NewtonResult{std::move(f), res, iter});
        const Eigen::VectorXd delta = lu.solve(rhs);

        Field step(g, 0.0);
        for (int j = 1; j <= ny; ++j)
            for (int i = 0; i < nx; ++i)
                step.at(i, j) = delta[(j - 1) * nx + i];

        double lam = 1.0;
        bool accepted = false;
        Field trial;
        double trialRes = 0.0;
        for (int bt = 0; bt < 30; ++bt) {
            trial = f;
            for (size_t c = 0; c < trial.values.size(); ++c)
                trial.values[c] += lam * step.values[c];
            if (opt.projectEven) trial = detail::mirror_symmetrize(trial);
            trialRes = norm(gradient_eps(trial, p, ms));
            if (trialRes <= (1.0 - 1e-4 * lam) * res) {
                accepted = true;
                break;
            }
            lam *= 0.5;
        }
        if (!accepted)
            throw NewtonDivergenceError("refine_saddle: residual would not decrease",
                                        NewtonResult{std::move(f), res, iter});
        f = std::move(trial);
        res = trialRes;
    }
}

NewtonResult refine_xindependent(const Field& f0, const Parameters& p,
                                 const MollifierSpec& ms, const NewtonOptions& opt) {
    validate(p);
    validate(ms);
    validate(f0.grid);
    if (!has_unit_bottom_trace(f0))
        throw ContractViolationError("refine_xindependent: start must carry bottom value 1");

    const GridSpec& g = f0.grid;
    const int nx = g.nx, ny = g.ny;

    // collapse to the column average; exact for already x-independent input
    Field f(g, 0.0);
    for (int j = 0; j <= ny; ++j) {
        double avg = 0.0;
        for (int i = 0; i < nx; ++i) avg += f0.at(i, j);
        avg /= nx;
        for (int i = 0; i < nx; ++i) f.at(i, j) = avg;
    }
    for (int i = 0; i < nx; ++i) f.at(i, 0) = 1.0;

    const double ihy2 = 1.0 / (g.hy() * g.hy());
    std::vector<double> diag(static_cast<size_t>(ny)), rhs(static_cast<size_t>(ny));
    double res = norm(gradient_eps(f, p, ms));

    for (int iter = 0;; ++iter) {
        if (res <= opt.tol) return NewtonResult{std::move(f), res, iter};
        if (iter >= opt.maxIter)
            throw NewtonDivergenceError("refine_xindependent: iteration cap reached",
                                        NewtonResult{std::move(f), res, iter});

        const Field grad = gradient_eps(f, p, ms);
        for (int j = 1; j <= ny; ++j) {
            const double w = std::max(p.A - p.B * g.y(j), 0.0);
            diag[static_cast<size_t>(j - 1)] =
                4.0 * ihy2 + 2.0 * beta_prime(ms, f.at(0, j)) * w;
            rhs[static_cast<size_t>(j - 1)] = -grad.at(0, j);
        }
        // Thomas on the y-line; the top row couples down with doubled weight
        const double off = -2.0 * ihy2;
        for (int j = 1; j < ny; ++j) {
            const double sub = j == ny - 1 ? 2.0 * off : off;
            const double m = sub / diag[static_cast<size_t>(j - 1)];
            diag[static_cast<size_t>(j)] -= m * off;
            rhs[static_cast<size_t>(j)] -= m * rhs[static_cast<size_t>(j - 1)];
        }
        std::vector<double> dv(static_cast<size_t>(ny));
        dv[static_cast<size_t>(ny - 1)] =
            rhs[static_cast<size_t>(ny - 1)] / diag[static_cast<size_t>(ny - 1)];
        for (int j = ny - 2; j >= 0; --j)
            dv[static_cast<size_t>(j)] = (rhs[static_cast<size_t>(j)] -
                                          off * dv[static_cast<size_t>(j + 1)]) /
                                         diag[static_cast<size_t>(j)];

        double lam = 1.0;
        bool accepted = false;
        Field trial;
        double trialRes = 0.0;
        for (int bt = 0; bt < 30; ++bt) {
            trial = f;
            for (int j = 1; j <= ny; ++j) {
                const double v = f.at(0, j) + lam * dv[static_cast<size_t>(j - 1)];
                for (int i = 0; i < nx; ++i) trial.at(i, j) = v;
            }
            trialRes = norm(gradient_eps(trial, p, ms));
            if (trialRes <= (1.0 - 1e-4 * lam) * res) {
                accepted = true;
                break;
            }
            lam *= 0.5;
        }
        if (!accepted)
            throw NewtonDivergenceError("refine_xindependent: residual would not decrease",
                                        NewtonResult{std::move(f), res, iter});
        f = std::move(trial);
        res = trialRes;
    }
}

} // namespace gravwave
