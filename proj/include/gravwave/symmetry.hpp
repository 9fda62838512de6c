#pragma once

#include "gravwave/minmax.hpp"

namespace gravwave {

struct RearrangedField {
    Field field;
    // re-checked monotone property of the output rows, not assumed
    bool symmetricDecreasing = false;
};

// Rowwise rearrangement onto the center-out alternating pattern: sort each
// row descending and place the values at x=0, then alternately one cell
// right, one cell left, working outward; ties keep their original index
// order. The bottom row is left untouched. Each row's value multiset is
// preserved exactly, so the bulk energy term is invariant and the discrete
// Dirichlet term cannot increase.
RearrangedField steiner_rearrange(const Field& f);

// True when every row is even about x=0 and non-increasing outward on
// (0, 1/2), both within tol. The cell across from x=0 has no mirror
// partner on an even cycle, so the pair adjacent to it may instead match
// the value sitting there.
bool is_symmetric_decreasing(const Field& f, double tol);

// relax_path with every interior node rearranged after its sweep update;
// contract and report are those of relax_path.
RelaxReport symmetrized_relax_path(PathState& ps, const Parameters& p,
                                   const MollifierSpec& ms, const RelaxOptions& opt);

namespace detail {
// Cyclic rearrangement of a single row of values.
std::vector<double> rearrange_row(const std::vector<double>& v);
} // namespace detail

} // namespace gravwave
