#include "gravwave/minmax.hpp"

#include <algorithm>
#include <cmath>

namespace gravwave {

namespace {

void axpy(Field& y, double a, const Field& x) {
    const size_t n = y.values.size();
    for (size_t k = 0; k < n; ++k) y.values[k] += a * x.values[k];
}

} // namespace

// Nonlinear conjugate gradient (Polak-Ribiere, clipped at zero) on the
// mollified energy, preconditioned by the exact inverse of -2*laplacian.
// Armijo on the energy cannot certify decreases once the predicted drop
// falls under the evaluation roundoff (measured near gradient norm 1e-4 for
// a marginally resolved transition layer), so the descent phase stops at
// that scale and a Newton polish with backtracking on the residual norm
// finishes the approach; the polish never compares energies.
MinimizeResult local_minimize(const Field& f0, const Parameters& p,
                              const MollifierSpec& ms, const MinimizeOptions& opt) {
    validate(p);
    validate(ms);
    validate(f0.grid);
    if (!has_unit_bottom_trace(f0))
        throw ContractViolationError("local_minimize: start must carry bottom value 1");
    if (!(opt.tol > 0.0) || opt.maxIter < 0)
        throw InvalidParameterError("local_minimize: tol must be positive, maxIter >= 0");

    StripPoissonSolver pois(f0.grid);

    Field f = f0;
    double energy = energy_eps(f, p, ms).total;
    Field g = gradient_eps(f, p, ms);
    double gnorm = norm(g);

    const double polishEntry = std::max(opt.tol, 1e-3);
    auto polish = [&](Field start, double res, int iter) {
        if (res <= opt.tol) {
            const double e = energy_eps(start, p, ms).total;
            return MinimizeResult{std::move(start), e, res, iter};
        }
        NewtonOptions no;
        no.tol = opt.tol;
        no.maxIter = std::max(0, opt.maxIter - iter);
        const double entryEnergy = energy_eps(start, p, ms).total;
        try {
            NewtonResult nr = refine_saddle(start, p, ms, no);
            const double e = energy_eps(nr.field, p, ms).total;
            if (e > entryEnergy + 1e-9 * (1.0 + std::abs(entryEnergy)))
                throw MinimizeDivergenceError(
                    "local_minimize: polish left the descent basin",
                    MinimizeResult{std::move(nr.field), e, nr.residualNorm,
                                   iter + nr.iterations});
            return MinimizeResult{std::move(nr.field), e, nr.residualNorm,
                                  iter + nr.iterations};
        } catch (const NewtonDivergenceError& err) {
            throw MinimizeDivergenceError(
                "local_minimize: polish diverged",
                MinimizeResult{err.last.field,
                               energy_eps(err.last.field, p, ms).total,
                               err.last.residualNorm, iter + err.last.iterations});
        }
    };

    Field d;          // search direction
    Field zPrev;      // previous preconditioned gradient
    double gzPrev = 0.0;
    double alpha = 1.0;

    for (int iter = 0;; ++iter) {
        if (gnorm <= opt.tol)
            return MinimizeResult{std::move(f), energy, gnorm, iter};
        if (gnorm <= polishEntry) return polish(std::move(f), gnorm, iter);
        if (iter >= opt.maxIter)
            throw MinimizeDivergenceError(
                "local_minimize: iteration cap reached before the gradient tolerance",
                MinimizeResult{std::move(f), energy, gnorm, iter});

        Field z = pois.solve(g);
        const double gz = inner(g, z); // preconditioned norm^2, positive

        bool fresh = false;
        if (iter == 0 || zPrev.values.empty()) {
            fresh = true;
        } else {
            const double betaPR = (gz - inner(g, zPrev)) / gzPrev;
            if (betaPR > 0.0) {
                for (size_t k = 0; k < d.values.size(); ++k)
                    d.values[k] = -z.values[k] + betaPR * d.values[k];
            } else {
                fresh = true;
            }
        }
        if (fresh) {
            d = z;
            for (double& v : d.values) v = -v;
        }

        double gd = inner(g, d);
        if (!(gd < 0.0)) { // conjugacy went stale; fall back to steepest descent
            d = z;
            for (double& v : d.values) v = -v;
            gd = -gz;
        }

        // Armijo backtracking from a step carried over between iterations
        double a = std::min(1.0, 2.0 * alpha);
        bool accepted = false;
        Field trial;
        double trialEnergy = 0.0;
        for (int bt = 0; bt < 60; ++bt) {
            trial = f;
            axpy(trial, a, d);
            trialEnergy = energy_eps(trial, p, ms).total;
            if (trialEnergy <= energy + 1e-4 * a * gd) {
                accepted = true;
                break;
            }
            a *= 0.5;
        }
        if (!accepted) // energy differences hit roundoff; hand over early
            return polish(std::move(f), gnorm, iter);

        alpha = a;
        f = std::move(trial);
        energy = trialEnergy;
        g = gradient_eps(f, p, ms);
        gnorm = norm(g);
        zPrev = std::move(z);
        gzPrev = gz;
    }
}

} // namespace gravwave
