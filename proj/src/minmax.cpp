#include "gravwave/minmax.hpp"
#include "gravwave/symmetry.hpp"

#include <algorithm>
#include <cmath>

namespace gravwave {

namespace {

double dist(const Field& a, const Field& b) {
    Field d = a;
    for (size_t k = 0; k < d.values.size(); ++k) d.values[k] -= b.values[k];
    return norm(d);
}

int interior_argmax(const std::vector<double>& e) {
    int mi = 1;
    for (int s = 2; s + 1 < static_cast<int>(e.size()); ++s)
        if (e[static_cast<size_t>(s)] > e[static_cast<size_t>(mi)]) mi = s;
    return mi;
}

SaddleResult assemble(Field f, const Parameters& p, const MollifierSpec& ms,
                      double residual, int iterations, const SpectrumResult& spec,
                      bool converged, std::string note) {
    SaddleResult sr;
    sr.energy = energy_eps(f, p, ms).total;
    sr.xVariation = x_variation(f);
    sr.field = std::move(f);
    sr.residualNorm = residual;
    sr.morseIndex = spec.morseIndex;
    sr.negativeEigenvalues = spec.negativeEigenvalues;
    sr.epsilon = ms.eps;
    sr.iterations = iterations;
    sr.converged = converged;
    sr.note = std::move(note);
    return sr;
}

// Newton plus spectrum from a near-critical start; divergence is reported in
// the result rather than thrown, so drivers can keep the best iterate.
SaddleResult refine_and_certify(const Field& start, const Parameters& p,
                                const MollifierSpec& ms, const SolveOptions& opt,
                                int priorIterations) {
    NewtonOptions no = opt.newton;
    no.projectEven = no.projectEven || opt.symmetrize;
    Field refined;
    double residual = 0.0;
    int iters = priorIterations;
    bool converged = true;
    std::string note;
    try {
        NewtonResult nr = refine_saddle(start, p, ms, no);
        refined = std::move(nr.field);
        residual = nr.residualNorm;
        iters += nr.iterations;
    } catch (const NewtonDivergenceError& e) {
        refined = e.last.field;
        residual = e.last.residualNorm;
        iters += e.last.iterations;
        converged = false;
        note = "refinement stalled: ";
        note += e.what();
    }
    EigenOptions eo = opt.eigen;
    eo.seed = opt.seed;
    SpectrumResult spec = morse_index(refined, p, ms, eo);
    return assemble(std::move(refined), p, ms, residual, iters, spec, converged,
                    std::move(note));
}

// True when a refined state is one of the flat wells rather than a ridge
// point: no descent direction and no horizontal structure.
bool settled_in_well(const SaddleResult& sr) {
    return sr.morseIndex == 0 && sr.xVariation <= 1e-8;
}

// Refinement from a relaxed or warm-started field can miss the ridge and land
// in a well, or stall. The x-independent ridge profile is always available in
// the subcritical regime, so restart the certification from there; the index
// kick loop then handles its surplus descent directions.
SaddleResult ridge_restart(SaddleResult sr, const Parameters& p,
                           const MollifierSpec& ms, const SolveOptions& opt) {
    const std::vector<FlatWave> branches = flat_roots(p);
    const FlatWave* plus = nullptr;
    for (const FlatWave& w : branches)
        if (w.kind == FlatWaveKind::Plus) plus = &w;
    if (!plus) return sr;
    try {
        NewtonResult nr = refine_xindependent(embed_flat(*plus, sr.field.grid), p,
                                              ms, opt.newton);
        std::string note = sr.note;
        if (!note.empty()) note += "; ";
        note += "restarted from the x-independent ridge profile";
        EigenOptions eo = opt.eigen;
        eo.seed = opt.seed;
        SpectrumResult spec = morse_index(nr.field, p, ms, eo);
        const int iters = sr.iterations + nr.iterations;
        return assemble(std::move(nr.field), p, ms, nr.residualNorm, iters, spec,
                        true, std::move(note));
    } catch (const NewtonDivergenceError&) {
        return sr; // keep the original diagnosis
    }
}

} // namespace

SaddleResult index_kick(const SaddleResult& sr, const Parameters& p,
                        const SolveOptions& opt) {
    validate(p);
    const MollifierSpec ms{sr.epsilon, opt.mollifier.kind};
    NewtonOptions no = opt.newton;
    no.projectEven = no.projectEven || opt.symmetrize;
    SaddleResult cur = sr;

    for (int round = 0; round < opt.kickCap && cur.morseIndex >= 2; ++round) {
        EigenOptions eo = opt.eigen;
        eo.seed = opt.seed + static_cast<uint64_t>(round) + 1;
        eo.k = std::max(opt.eigen.k, 3);
        SpectrumResult spec = morse_index(cur.field, p, ms, eo);
        if (spec.pairs.size() < 2) break;

        // Kick directions off the second descent direction. When it sits in a
        // near-degenerate pair the solver returns an arbitrary rotation of the
        // two members, so the mirror-even combination is tried first; the
        // branch that bifurcates along it keeps the even symmetry.
        std::vector<Field> dirs;
        {
            Field bestEven;
            double bestNorm = 0.0;
            const double l2 = spec.pairs[1].lambda;
            for (size_t k = 1; k < spec.pairs.size() && k < 3; ++k) {
                if (k == 2 && std::abs(spec.pairs[2].lambda - l2) >
                                  1e-3 * std::max(std::abs(l2), spec.negTol))
                    break;
                Field even = detail::mirror_symmetrize(spec.pairs[k].vector);
                const double n = norm(even);
                if (n > bestNorm) {
                    bestNorm = n;
                    bestEven = std::move(even);
                }
            }
            if (bestNorm > 0.1) {
                for (double& v : bestEven.values) v /= bestNorm;
                dirs.push_back(std::move(bestEven));
            }
            dirs.push_back(spec.pairs[1].vector);
        }

        // the first round uses the configured displacement, later rounds halve
        // it in case the target branch sits closer than that
        const double delta = opt.kickDelta / static_cast<double>(1 << round);
        bool moved = false;
        for (const Field& dir : dirs) {
            for (double sign : {1.0, -1.0}) {
                Field start = cur.field;
                for (size_t c = 0; c < start.values.size(); ++c)
                    start.values[c] += sign * delta * dir.values[c];
                NewtonResult nr;
                try {
                    nr = refine_saddle(start, p, ms, no);
                } catch (const NewtonDivergenceError&) {
                    continue;
                }
                if (dist(nr.field, cur.field) <= 1e-6 * (1.0 + norm(cur.field)))
                    continue; // fell back onto the same saddle
                SpectrumResult cand = morse_index(nr.field, p, ms, eo);
                if (cand.morseIndex == 0)
                    continue; // overshot the ridge into a well
                if (cand.morseIndex < cur.morseIndex) {
                    const int iters = cur.iterations + nr.iterations;
                    cur = assemble(std::move(nr.field), p, ms, nr.residualNorm,
                                   iters, cand, true, cur.note);
                    moved = true;
                    break;
                }
            }
            if (moved) break;
        }
    }
    if (cur.morseIndex > 1)
        cur.note += "; index reduction cap reached with index > 1";
    return cur;
}

// An even critical point comes as a pair, crest at the center or at the
// antipode. The symmetric branch reports the centered representative; the
// half-period roll is an exact grid symmetry, so energy, residual and
// spectrum carry over untouched.
Field center_crest(Field f) {
    const int nx = f.grid.nx, ny = f.grid.ny;
    double center = 0.0, anti = 0.0;
    for (int j = 1; j <= ny; ++j) {
        center += f.at(nx / 2, j);
        anti += f.at(0, j);
    }
    if (anti <= center) return f;
    Field out = f;
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i < nx; ++i) out.at((i + nx / 2) % nx, j) = f.at(i, j);
    return out;
}

SaddleResult solve_minmax(const Parameters& p, const SolveOptions& opt,
                          PathState* pathOut) {
    validate(p);
    validate(opt.grid);
    validate(opt.mollifier);
    const RegimeReport rr = regime_report(p);
    if (rr.regime != Regime::Subcritical)
        throw InvalidParameterError(
            "solve_minmax: parameters admit no flat barrier between two wells");

    const std::vector<FlatWave> branches = flat_roots(p);
    const FlatWave* minus = nullptr;
    const FlatWave* infinity = nullptr;
    for (const FlatWave& w : branches) {
        if (w.kind == FlatWaveKind::Minus) minus = &w;
        if (w.kind == FlatWaveKind::Infinity) infinity = &w;
    }
    if (!minus || !infinity)
        throw ContractViolationError("solve_minmax: expected both well branches");

    const MollifierSpec& ms = opt.mollifier;
    MinimizeResult wellA =
        local_minimize(embed_flat(*minus, opt.grid), p, ms, opt.minimize);
    MinimizeResult wellB =
        local_minimize(embed_flat(*infinity, opt.grid), p, ms, opt.minimize);

    PathState ps = init_path(wellA.field, wellB.field, opt.nodes, opt.kickAmp,
                             opt.kickMode);
    std::function<Field(const Field&)> symFilter = [](const Field& f) {
        return steiner_rearrange(f).field;
    };
    detail::relax_path_hooked(ps, p, ms, opt.relax,
                              opt.symmetrize ? &symFilter : nullptr);

    const int mi = interior_argmax(ps.energies);
    SaddleResult sr = refine_and_certify(ps.nodes[static_cast<size_t>(mi)], p, ms, opt,
                                         wellA.iterations + wellB.iterations);
    if (!sr.converged || settled_in_well(sr)) sr = ridge_restart(std::move(sr), p, ms, opt);
    if (sr.morseIndex >= 2 && sr.converged) sr = index_kick(sr, p, opt);
    if (opt.symmetrize) sr.field = center_crest(std::move(sr.field));

    if (pathOut) *pathOut = std::move(ps);
    return sr;
}

std::vector<SaddleResult> continuation(const Parameters& p,
                                       const std::vector<double>& epsList,
                                       const SolveOptions& opt) {
    if (epsList.empty())
        throw InvalidParameterError("continuation: need at least one epsilon");
    for (size_t k = 0; k < epsList.size(); ++k) {
        if (!(epsList[k] > 0.0))
            throw InvalidParameterError("continuation: epsilon must be positive");
        if (k > 0 && !(epsList[k] < epsList[k - 1]))
            throw InvalidParameterError("continuation: epsilon list must decrease");
    }

    std::vector<SaddleResult> out;
    SolveOptions first = opt;
    first.mollifier.eps = epsList[0];
    out.push_back(solve_minmax(p, first, nullptr));

    for (size_t k = 1; k < epsList.size(); ++k) {
        const MollifierSpec msNext{epsList[k], opt.mollifier.kind};
        const SaddleResult& prev = out.back();
        SolveOptions stage = opt;
        stage.mollifier = msNext;
        NewtonOptions no = stage.newton;
        no.projectEven = no.projectEven || stage.symmetrize;

        Field warm = prev.field;
        bool ok = true;
        std::string note;
        try {
            NewtonResult nr = refine_saddle(warm, p, msNext, no);
            warm = std::move(nr.field);
        } catch (const NewtonDivergenceError&) {
            // halve the epsilon step once before giving up on the stage
            const double mid = std::sqrt(epsList[k - 1] * epsList[k]);
            try {
                NewtonResult half =
                    refine_saddle(prev.field, p, {mid, opt.mollifier.kind}, no);
                NewtonResult nr = refine_saddle(half.field, p, msNext, no);
                warm = std::move(nr.field);
            } catch (const NewtonDivergenceError& e2) {
                warm = e2.last.field;
                ok = false;
                note = "continuation stage stalled: ";
                note += e2.what();
            }
        }

        EigenOptions eo = stage.eigen;
        eo.seed = stage.seed + k;
        SpectrumResult spec = morse_index(warm, p, msNext, eo);
        const double res = norm(gradient_eps(warm, p, msNext));
        SaddleResult sr = assemble(std::move(warm), p, msNext, res,
                                   prev.iterations, spec, ok, std::move(note));
        if (!sr.converged || settled_in_well(sr))
            sr = ridge_restart(std::move(sr), p, msNext, stage);
        if (sr.morseIndex >= 2 && sr.converged) sr = index_kick(sr, p, stage);
        if (stage.symmetrize) sr.field = center_crest(std::move(sr.field));
        out.push_back(std::move(sr));
    }
    return out;
}

} // namespace gravwave
