#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gravwave/energy.hpp"
#include "gravwave/poisson.hpp"

namespace gravwave {

// ---------------------------------------------------------------------------
// results and options

struct MinimizeOptions {
    double tol = 1e-8;   // weighted L2 norm of the energy gradient
    int maxIter = 20000;
};

struct MinimizeResult {
    Field field;
    double energy = 0.0;
    double residualNorm = 0.0;
    int iterations = 0;
};

// NonConvergence failures carry the last iterate so callers can inspect or
// continue from it.
class MinimizeDivergenceError : public NonConvergenceError {
public:
    MinimizeDivergenceError(const std::string& msg, MinimizeResult last)
        : NonConvergenceError(msg), last(std::move(last)) {}
    MinimizeResult last;
};

struct PathState {
    std::vector<Field> nodes;
    std::vector<double> energies; // filled by relax_path, one per node
    int maxIndex = 0;             // position of the highest-energy node
};

struct RelaxOptions {
    double tol = 1e-3;        // tangent-projected residual at the top node
    int maxIter = 4000;       // relaxation sweeps
    bool climb = true;        // reverse the tangent force at the top node
    double climbStart = 0.05; // projected residual level that arms climbing
    double endpointTol = 1e-5;
};

struct RelaxReport {
    int iterations = 0;
    double projectedResidual = 0.0;
    std::vector<double> supEnergyHistory; // top-node energy after each sweep
    bool converged = false;
};

struct NewtonOptions {
    double tol = 1e-8;
    int maxIter = 60;
    bool projectEven = false; // keep iterates mirror-symmetric about x = 0
};

struct NewtonResult {
    Field field;
    double residualNorm = 0.0;
    int iterations = 0;
};

class NewtonDivergenceError : public NonConvergenceError {
public:
    NewtonDivergenceError(const std::string& msg, NewtonResult last)
        : NonConvergenceError(msg), last(std::move(last)) {}
    NewtonResult last;
};

struct EigenOptions {
    int k = 6;                  // how many lowest eigenpairs to resolve
    int prePassSteps = 140;     // plain Lanczos steps for the scale estimate
    int outerSteps = 70;        // shift-inverted Lanczos steps per start
    int innerMaxIter = 6000;    // MINRES cap per inverse application
    double innerTol = 1e-11;
    double negTolFactor = 1e-6; // negatives are lambda < -factor * scale
    double certTolFactor = 1e-8; // direct-residual certification level
    uint64_t seed = 1;
};

struct EigenPair {
    double lambda = 0.0;
    double residual = 0.0; // ||H v - lambda v|| in the weighted norm
    Field vector;
};

struct SpectrumResult {
    std::vector<EigenPair> pairs; // sorted by lambda, ascending
    double spectralScale = 0.0;
    double negTol = 0.0;
    int morseIndex = 0;
    std::vector<double> negativeEigenvalues;
};

class EigensolverError : public NonConvergenceError {
public:
    EigensolverError(const std::string& msg, SpectrumResult partial)
        : NonConvergenceError(msg), partial(std::move(partial)) {}
    SpectrumResult partial;
};

struct SaddleResult {
    Field field;
    double energy = 0.0;
    double residualNorm = 0.0;
    int morseIndex = 0;
    std::vector<double> negativeEigenvalues;
    double epsilon = 0.0;
    double xVariation = 0.0;
    int iterations = 0;
    bool converged = true;
    std::string note;
};

struct SolveOptions {
    GridSpec grid{64, 128, 4.0};
    MollifierSpec mollifier{0.05, MollifierKind::Quintic};
    int nodes = 17;
    double kickAmp = 1e-2;
    int kickMode = 1;
    uint64_t seed = 1;
    bool symmetrize = false;
    double kickDelta = 0.05; // displacement along the second eigenvector
    int kickCap = 3;
    MinimizeOptions minimize;
    RelaxOptions relax;
    NewtonOptions newton;
    EigenOptions eigen;
};

// ---------------------------------------------------------------------------
// operations

// Preconditioned nonlinear CG descent of the mollified energy. Returns at
// once when the start already meets the tolerance. Iteration cap raises
// MinimizeDivergenceError carrying the last iterate.
MinimizeResult local_minimize(const Field& f0, const Parameters& p,
                              const MollifierSpec& ms, const MinimizeOptions& opt);

// Linear interpolation between two endpoint states over n >= 8 nodes plus a
// horizontal-mode kick of size kickAmp on the interior nodes. Endpoints are
// stored untouched.
PathState init_path(const Field& a, const Field& b, int n, double kickAmp,
                    int kickMode = 1);

// String relaxation with arclength renode and, once the path is roughly
// settled, a climbing top node. Endpoints must already be minimizers to
// endpointTol, else ContractViolationError.
RelaxReport relax_path(PathState& ps, const Parameters& p, const MollifierSpec& ms,
                       const RelaxOptions& opt);

// Newton with backtracking on the gradient norm, inner solves by a sparse
// direct factorization of the (internal) Hessian matrix.
NewtonResult refine_saddle(const Field& f0, const Parameters& p,
                           const MollifierSpec& ms, const NewtonOptions& opt);

// Newton restricted to x-independent fields (profiles along y only).
NewtonResult refine_xindependent(const Field& f0, const Parameters& p,
                                 const MollifierSpec& ms, const NewtonOptions& opt);

// Lowest Hessian eigenpairs by shift-inverted Lanczos with full
// reorthogonalization; the Hessian enters only through its action. The
// Morse index counts certified eigenvalues below -negTol, which leaves the
// near-zero horizontal translation mode out.
SpectrumResult morse_index(const Field& f, const Parameters& p,
                           const MollifierSpec& ms, const EigenOptions& opt);

// While the refined saddle has index >= 2: push off along the second descent
// direction on both sides and re-refine, halving the displacement each round.
// Candidates that fall back onto the same saddle or into a well are rejected.
// Gives up after opt.kickCap rounds and returns the best candidate with a
// note.
SaddleResult index_kick(const SaddleResult& sr, const Parameters& p,
                        const SolveOptions& opt);

// Full pipeline: wells, kicked path, relaxation, Newton refinement, index
// certification and the index kick loop.
SaddleResult solve_minmax(const Parameters& p, const SolveOptions& opt,
                          PathState* pathOut = nullptr);

// Saddle branch continuation across a decreasing eps list; each stage warm
// starts from the previous field. The first entry runs the full pipeline.
std::vector<SaddleResult> continuation(const Parameters& p,
                                       const std::vector<double>& epsList,
                                       const SolveOptions& opt);

namespace detail {
// relax_path with a per-node post-sweep transform (used by the symmetrized
// variant); pass nullptr for the plain method.
RelaxReport relax_path_hooked(PathState& ps, const Parameters& p,
                              const MollifierSpec& ms, const RelaxOptions& opt,
                              const std::function<Field(const Field&)>* nodeFilter);

// Mirror average about x = 0; output is exactly even.
Field mirror_symmetrize(const Field& f);
} // namespace detail

} // namespace gravwave
