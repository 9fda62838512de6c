#pragma once

#include <memory>

#include "gravwave/grid.hpp"

namespace gravwave {

// Direct solver for (-2*laplacian + shift) z = r on zero-bottom-trace
// fields: real FFT across the periodic direction, tridiagonal solves in y.
// Used as the preconditioner everywhere a descent or Krylov step needs one.
// One instance per grid; not safe for concurrent use.
class StripPoissonSolver {
public:
    explicit StripPoissonSolver(const GridSpec& g);
    ~StripPoissonSolver();

    StripPoissonSolver(const StripPoissonSolver&) = delete;
    StripPoissonSolver& operator=(const StripPoissonSolver&) = delete;

    const GridSpec& grid() const;

    // r may have arbitrary bottom-row values; they are ignored and the
    // result has a zero bottom row. shift must be >= 0.
    Field solve(const Field& r, double shift = 0.0) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace gravwave
