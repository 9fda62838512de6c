#include "gravwave/minmax.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace gravwave {

namespace {

void axpy(Field& y, double a, const Field& x) {
    for (size_t k = 0; k < y.values.size(); ++k) y.values[k] += a * x.values[k];
}

Field random_direction(const GridSpec& g, std::mt19937_64& rng) {
    Field v(g, 0.0);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int j = 1; j <= g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) v.at(i, j) = u(rng);
    return v;
}

struct NegativeCurvature {};

// (H - sigma)^{-1} b by conjugate gradients in the weighted product,
// preconditioned with the exact inverse of -2*laplacian + c. Negative
// curvature means sigma sits above the bottom of the spectrum; the caller
// lowers it and retries.
Field inverse_apply(const std::function<Field(const Field&)>& applyH, double sigma,
                    const StripPoissonSolver& pois, double precShift, const Field& b,
                    double tolRel, int maxIter) {
    Field x(b.grid, 0.0);
    const double bn = norm(b);
    if (bn == 0.0) return x;
    Field r = b;
    Field z = pois.solve(r, precShift);
    Field p = z;
    double rz = inner(r, z);
    for (int it = 0; it < maxIter; ++it) {
        Field Ap = applyH(p);
        axpy(Ap, -sigma, p);
        const double pAp = inner(p, Ap);
        if (!(pAp > 0.0)) throw NegativeCurvature{};
        const double a = rz / pAp;
        axpy(x, a, p);
        axpy(r, -a, Ap);
        if (norm(r) <= tolRel * bn) return x;
        z = pois.solve(r, precShift);
        const double rzNew = inner(r, z);
        const double beta = rzNew / rz;
        rz = rzNew;
        for (size_t k = 0; k < p.values.size(); ++k)
            p.values[k] = z.values[k] + beta * p.values[k];
    }
    return x; // certification downstream decides whether this was good enough
}

struct LanczosOut {
    std::vector<double> alpha, beta; // beta has one fewer entry than alpha
    std::vector<Field> Q;
};

// Lanczos with full reorthogonalization (two sweeps) against both the basis
// and an optional deflation set.
LanczosOut lanczos(const std::function<Field(const Field&)>& apply, Field q0, int steps,
                   const std::vector<Field>* deflate) {
    LanczosOut out;
    auto purge = [&](Field& u) {
        for (int pass = 0; pass < 2; ++pass) {
            if (deflate)
                for (const Field& v : *deflate) axpy(u, -inner(u, v), v);
            for (const Field& v : out.Q) axpy(u, -inner(u, v), v);
        }
    };
    purge(q0);
    const double q0n = norm(q0);
    if (q0n == 0.0) return out;
    for (double& v : q0.values) v /= q0n;
    out.Q.push_back(std::move(q0));

    for (int j = 0; j < steps; ++j) {
        Field u = apply(out.Q[static_cast<size_t>(j)]);
        if (j > 0) axpy(u, -out.beta[static_cast<size_t>(j - 1)], out.Q[static_cast<size_t>(j - 1)]);
        const double aj = inner(u, out.Q[static_cast<size_t>(j)]);
        out.alpha.push_back(aj);
        axpy(u, -aj, out.Q[static_cast<size_t>(j)]);
        purge(u);
        const double bj = norm(u);
        if (!(bj > 1e-300) || j + 1 >= steps) break;
        out.beta.push_back(bj);
        for (double& v : u.values) v /= bj;
        out.Q.push_back(std::move(u));
    }
    return out;
}

struct RitzPair {
    double theta = 0.0; // tridiagonal eigenvalue
    Field vector;
};

// Ritz pairs of the tridiagonal, vectors assembled in the full space,
// ordered by descending theta.
std::vector<RitzPair> ritz_pairs(const LanczosOut& lo, int want) {
    std::vector<RitzPair> out;
    const int m = static_cast<int>(lo.alpha.size());
    if (m == 0) return out;
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) T(i, i) = lo.alpha[static_cast<size_t>(i)];
    for (int i = 0; i + 1 < m; ++i) {
        T(i, i + 1) = lo.beta[static_cast<size_t>(i)];
        T(i + 1, i) = lo.beta[static_cast<size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    for (int r = 0; r < std::min(want, m); ++r) {
        const int col = m - 1 - r; // eigenvalues come back ascending
        RitzPair pr;
        pr.theta = es.eigenvalues()[col];
        pr.vector = Field(lo.Q[0].grid, 0.0);
        for (int i = 0; i < m; ++i)
            axpy(pr.vector, es.eigenvectors()(i, col), lo.Q[static_cast<size_t>(i)]);
        const double vn = norm(pr.vector);
        if (vn > 0.0)
            for (double& v : pr.vector.values) v /= vn;
        out.push_back(std::move(pr));
    }
    return out;
}

} // namespace

SpectrumResult morse_index(const Field& f, const Parameters& p, const MollifierSpec& ms,
                           const EigenOptions& opt) {
    validate(p);
    validate(ms);
    validate(f.grid);
    if (!has_unit_bottom_trace(f))
        throw ContractViolationError("morse_index: state must carry bottom value 1");
    if (opt.k < 1) throw InvalidParameterError("morse_index: k must be positive");

    const GridSpec& g = f.grid;
    const int dof = g.nx * g.ny;
    StripPoissonSolver pois(g);
    std::mt19937_64 rng(opt.seed);

    auto applyH = std::function<Field(const Field&)>(
        [&](const Field& v) { return hessian_apply(f, v, p, ms); });

    // scale pass: plain Lanczos pins down the spectral extent and a safe
    // bracket under the lowest eigenvalue
    const int preSteps = std::min(opt.prePassSteps, dof);
    LanczosOut pre = lanczos(applyH, random_direction(g, rng), preSteps, nullptr);
    if (pre.alpha.empty())
        throw EigensolverError("morse_index: empty operator", SpectrumResult{});
    double thetaMin = std::numeric_limits<double>::infinity();
    double scale = 0.0;
    {
        const int m = static_cast<int>(pre.alpha.size());
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) T(i, i) = pre.alpha[static_cast<size_t>(i)];
        for (int i = 0; i + 1 < m; ++i) {
            T(i, i + 1) = pre.beta[static_cast<size_t>(i)];
            T(i + 1, i) = pre.beta[static_cast<size_t>(i)];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T, Eigen::EigenvaluesOnly);
        thetaMin = es.eigenvalues()[0];
        scale = std::max(std::abs(es.eigenvalues()[0]),
                         std::abs(es.eigenvalues()[m - 1]));
    }
    pre.Q.clear();
    pre.Q.shrink_to_fit();

    double margin = std::max(0.5, 1e-5 * scale);
    double sigma = thetaMin - margin;
    int outerSteps = opt.outerSteps;
    const double certTol = opt.certTolFactor * std::max(scale, 1.0);

    SpectrumResult result;
    result.spectralScale = scale;
    result.negTol = opt.negTolFactor * scale;

    for (int attempt = 0; attempt < 4; ++attempt) {
        std::vector<EigenPair> certified;
        std::vector<Field> deflate;
        bool negCurv = false;
        try {
            for (int run = 0; run < 2; ++run) {
                auto applyK = std::function<Field(const Field&)>([&](const Field& v) {
                    return inverse_apply(applyH, sigma, pois, std::max(0.0, -sigma), v,
                                         opt.innerTol, opt.innerMaxIter);
                });
                const int steps =
                    std::min(outerSteps, dof - static_cast<int>(deflate.size()));
                LanczosOut lo =
                    lanczos(applyK, random_direction(g, rng), steps,
                            deflate.empty() ? nullptr : &deflate);
                for (RitzPair& rp : ritz_pairs(lo, opt.k + 2)) {
                    if (!(rp.theta > 0.0)) continue; // unconverged inverse direction
                    Field Hv = applyH(rp.vector);
                    const double lambda = inner(rp.vector, Hv); // Rayleigh refinement
                    axpy(Hv, -lambda, rp.vector);
                    const double resid = norm(Hv);
                    if (resid <= certTol) {
                        bool dup = false;
                        for (const EigenPair& e : certified)
                            if (std::abs(e.lambda - lambda) <= 1e-6 * std::max(scale, 1.0) &&
                                std::abs(inner(e.vector, rp.vector)) > 0.5) {
                                dup = true;
                                break;
                            }
                        if (!dup) {
                            certified.push_back(EigenPair{lambda, resid, rp.vector});
                            deflate.push_back(std::move(rp.vector));
                        }
                    }
                }
            }
        } catch (const NegativeCurvature&) {
            negCurv = true;
        }

        if (negCurv) {
            sigma -= 2.0 * margin;
            margin *= 2.0;
            continue;
        }

        std::sort(certified.begin(), certified.end(),
                  [](const EigenPair& a, const EigenPair& b) { return a.lambda < b.lambda; });
        if (static_cast<int>(certified.size()) > opt.k) certified.resize(static_cast<size_t>(opt.k));
        result.pairs = std::move(certified);
        if (static_cast<int>(result.pairs.size()) >= std::min(opt.k, dof)) break;
        outerSteps *= 2; // not enough certified pairs; deepen the Krylov space
    }

    if (static_cast<int>(result.pairs.size()) < std::min(opt.k, dof))
        throw EigensolverError("morse_index: could not certify the requested pairs",
                               std::move(result));

    result.morseIndex = 0;
    result.negativeEigenvalues.clear();
    for (const EigenPair& e : result.pairs)
        if (e.lambda < -result.negTol) {
            ++result.morseIndex;
            result.negativeEigenvalues.push_back(e.lambda);
        }
    return result;
}

} // namespace gravwave
