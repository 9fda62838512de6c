#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>

#include "gravwave/minmax.hpp"
#include "gravwave/poisson.hpp"
#include "oracles.hpp"

using namespace gravwave;

namespace {

const Parameters P62{6.0, 2.0};
const MollifierSpec MS05{0.05, MollifierKind::Quintic};

const FlatWave& branch(const std::vector<FlatWave>& ws, FlatWaveKind k) {
    for (const auto& w : ws)
        if (w.kind == k) return w;
    throw std::runtime_error("branch not found");
}

Field well_start(const GridSpec& g) {
    return perturb(embed_flat(branch(flat_roots(P62), FlatWaveKind::Minus), g), 3, 1e-2, 11);
}

// The two endpoint minimizers the path tests run between.
struct Wells {
    Field lower;
    Field full;
};

Wells settle_wells(const GridSpec& g, const MollifierSpec& ms) {
    const auto ws = flat_roots(P62);
    Wells w{local_minimize(embed_flat(branch(ws, FlatWaveKind::Minus), g), P62, ms, {}).field,
            local_minimize(embed_flat(branch(ws, FlatWaveKind::Infinity), g), P62, ms, {}).field};
    return w;
}

bool fields_identical(const Field& a, const Field& b) {
    return a.values.size() == b.values.size() &&
           std::memcmp(a.values.data(), b.values.data(), a.values.size() * sizeof(double)) == 0;
}

} // namespace

TEST_CASE("strip poisson solve inverts the shifted stiffness operator") {
    for (const GridSpec& g : {GridSpec{16, 32, 4.0}, GridSpec{24, 48, 3.0}}) {
        StripPoissonSolver pois(g);
        CHECK(pois.grid() == g);
        for (double shift : {0.0, 1.0, 37.5}) {
            Field r = oracle::random_direction(g, 40 + static_cast<uint64_t>(shift));
            Field z = pois.solve(r, shift);
            for (int i = 0; i < g.nx; ++i) CHECK(z.at(i, 0) == 0.0);
            Field lz = laplacian_apply(z);
            for (int j = 1; j <= g.ny; ++j)
                for (int i = 0; i < g.nx; ++i) {
                    const double lhs = -2.0 * lz.at(i, j) + shift * z.at(i, j);
                    CHECK(lhs == doctest::Approx(r.at(i, j)).epsilon(1e-10));
                }
        }
    }
}

TEST_CASE("strip poisson rejects bad input") {
    StripPoissonSolver pois(GridSpec{16, 32, 4.0});
    CHECK_THROWS_AS(pois.solve(Field(GridSpec{16, 16, 4.0}, 0.0)), ContractViolationError);
    CHECK_THROWS_AS(pois.solve(Field(GridSpec{16, 32, 4.0}, 0.0), -1.0), InvalidParameterError);
}

TEST_CASE("minimize leaves the full-strip state alone") {
    GridSpec g{16, 64, 4.0};
    Field u = embed_flat(branch(flat_roots(P62), FlatWaveKind::Infinity), g);
    MinimizeResult mr = local_minimize(u, P62, MS05, {});
    CHECK(mr.iterations == 0);
    CHECK(mr.energy == doctest::Approx(9.0).epsilon(1e-13));
    CHECK(mr.residualNorm == 0.0);
    CHECK(fields_identical(mr.field, u));
}

TEST_CASE("minimize settles the lower well, energy trending up as eps shrinks") {
    GridSpec g{48, 96, 4.0};
    // the mollifier discounts the interface, so every value sits below the
    // sharp flat-wave energy and climbs back toward it as eps decreases
    const double sharpLower = 4.7190792729;
    const double expected[] = {4.521439, 4.584046, 4.606736};
    double prev = 0.0;
    int k = 0;
    for (double eps : {0.1, 0.05, 0.025}) {
        MinimizeResult mr = local_minimize(well_start(g), P62, {eps, MollifierKind::Quintic}, {});
        CHECK(mr.residualNorm <= 1e-8);
        CHECK(std::abs(mr.energy - expected[k]) <= 5e-3);
        CHECK(mr.energy < sharpLower);
        CHECK(mr.energy > prev);
        prev = mr.energy;
        ++k;
    }
}

TEST_CASE("minimize on a fine grid pins the lower well near the sharp energy") {
    GridSpec g{128, 256, 4.0};
    MinimizeResult mr = local_minimize(well_start(g), P62, {0.01, MollifierKind::Quintic}, {});
    CHECK(mr.residualNorm <= 1e-8);
    CHECK(std::abs(mr.energy - 4.7190792729) <= 0.07);
}

TEST_CASE("minimize raises on iteration cap and carries the last iterate") {
    // the start must sit inside the transition layer: away from it the
    // functional is exactly quadratic and one preconditioned step finishes
    GridSpec g{16, 32, 4.0};
    MinimizeOptions mo;
    mo.maxIter = 2;
    try {
        local_minimize(well_start(g), P62, MS05, mo);
        FAIL("expected divergence");
    } catch (const MinimizeDivergenceError& e) {
        CHECK(e.last.field.grid == g);
        CHECK(e.last.iterations == 2);
        CHECK(std::isfinite(e.last.energy));
    }
}

TEST_CASE("wells are index zero") {
    GridSpec g{32, 64, 4.0};
    MinimizeResult mr = local_minimize(well_start(g), P62, MS05, {});
    CHECK(std::abs(mr.energy - 4.533183) <= 5e-3);
    EigenOptions eo;
    eo.k = 4;
    SpectrumResult sp = morse_index(mr.field, P62, MS05, eo);
    CHECK(sp.morseIndex == 0);
    CHECK(sp.negativeEigenvalues.empty());
    CHECK(sp.pairs[0].lambda > 0.0);
    CHECK(std::abs(sp.pairs[0].lambda - 1.2654) <= 0.05);
}

TEST_CASE("spectrum at the full-strip state matches the separable closed form") {
    GridSpec g{16, 32, 4.0};
    Field u = embed_flat(branch(flat_roots(P62), FlatWaveKind::Infinity), g);
    EigenOptions eo;
    eo.k = 12;
    SpectrumResult sp = morse_index(u, P62, MS05, eo);
    CHECK(sp.morseIndex == 0);
    CHECK(static_cast<int>(sp.pairs.size()) == 12);

    // hessian there is the bare stiffness: periodic cosines in x times
    // sin(k_l y) in y with the mirror closure at the top row
    std::vector<double> ref;
    for (int m = 0; m <= g.nx / 2; ++m)
        for (int l = 0; l < g.ny; ++l) {
            const double mx =
                2.0 / (g.hx() * g.hx()) * (1.0 - std::cos(2.0 * M_PI * m * g.hx()));
            const double kl = (2 * l + 1) * M_PI / (2.0 * g.Ly);
            const double my = 2.0 / (g.hy() * g.hy()) * (1.0 - std::cos(kl * g.hy()));
            ref.push_back(2.0 * (mx + my));
            if (m > 0 && 2 * m < g.nx) ref.push_back(2.0 * (mx + my));
        }
    std::sort(ref.begin(), ref.end());
    for (size_t i = 0; i < sp.pairs.size(); ++i) {
        CHECK(std::abs(sp.pairs[i].lambda - ref[i]) <= 1e-8);
        CHECK(sp.pairs[i].residual <= 1e-6);
    }
    // the m = +-1 levels come out as exactly degenerate pairs
    CHECK(std::abs(sp.pairs[8].lambda - sp.pairs[9].lambda) <= 1e-9);
    CHECK(std::abs(sp.pairs[10].lambda - sp.pairs[11].lambda) <= 1e-9);

    SpectrumResult again = morse_index(u, P62, MS05, eo);
    for (size_t i = 0; i < sp.pairs.size(); ++i)
        CHECK(sp.pairs[i].lambda == again.pairs[i].lambda);
}

TEST_CASE("init_path stores endpoints untouched and kicks only the interior") {
    GridSpec g{32, 64, 4.0};
    Wells w = settle_wells(g, MS05);

    PathState flat = init_path(w.lower, w.full, 17, 0.0);
    CHECK(static_cast<int>(flat.nodes.size()) == 17);
    CHECK(fields_identical(flat.nodes.front(), w.lower));
    CHECK(fields_identical(flat.nodes.back(), w.full));
    for (const Field& f : flat.nodes) CHECK(x_variation(f) <= 1e-12);

    PathState kicked = init_path(w.lower, w.full, 17, 1e-2, 1);
    CHECK(fields_identical(kicked.nodes.front(), w.lower));
    CHECK(fields_identical(kicked.nodes.back(), w.full));
    for (size_t s = 1; s + 1 < kicked.nodes.size(); ++s)
        CHECK(x_variation(kicked.nodes[s]) > 0.0);

    CHECK_THROWS_AS(init_path(w.lower, w.full, 5, 0.0), InvalidParameterError);
    CHECK_THROWS_AS(init_path(w.lower, Field(GridSpec{16, 32, 4.0}, 1.0), 17, 0.0),
                    ContractViolationError);
}

TEST_CASE("unrelaxed straight path crosses above the upper flat energy") {
    GridSpec g{48, 96, 4.0};
    Wells w = settle_wells(g, MS05);
    PathState ps = init_path(w.lower, w.full, 17, 0.0);
    double maxE = -1e300;
    for (const Field& f : ps.nodes) maxE = std::max(maxE, energy_eps(f, P62, MS05).total);
    CHECK(maxE >= 9.33654088284);
    CHECK(maxE <= 12.0);
}

TEST_CASE("relax_path requires settled endpoints") {
    GridSpec g{16, 32, 4.0};
    PathState ps = init_path(make_state(g, 0.4), make_state(g, 0.9), 9, 0.0);
    RelaxOptions ro;
    ro.maxIter = 5;
    CHECK_THROWS_AS(relax_path(ps, P62, MS05, ro), ContractViolationError);
}

TEST_CASE("relax without climbing lowers the crest and never raises it") {
    GridSpec g{48, 96, 4.0};
    Wells w = settle_wells(g, MS05);
    PathState ps = init_path(w.lower, w.full, 17, 0.0);
    RelaxOptions ro;
    ro.climb = false;
    ro.maxIter = 150;
    RelaxReport rep = relax_path(ps, P62, MS05, ro);
    REQUIRE(!rep.supEnergyHistory.empty());
    for (size_t i = 1; i < rep.supEnergyHistory.size(); ++i)
        CHECK(rep.supEnergyHistory[i] <= rep.supEnergyHistory[i - 1] + 1e-8);
    CHECK(rep.supEnergyHistory.back() < 11.0);
    CHECK(rep.supEnergyHistory.back() >= 9.0);
    // an x-independent path must stay x-independent
    for (const Field& f : ps.nodes) CHECK(x_variation(f) <= 1e-12);
}

TEST_CASE("relaxed straight path climbs onto the x-independent ridge point") {
    GridSpec g{48, 96, 4.0};
    Wells w = settle_wells(g, MS05);
    PathState ps = init_path(w.lower, w.full, 17, 0.0);
    RelaxReport rep = relax_path(ps, P62, MS05, {});
    CHECK(rep.converged);
    CHECK(rep.projectedResidual <= 1e-3);
    const double topE = ps.energies[static_cast<size_t>(ps.maxIndex)];
    CHECK(std::abs(topE - 9.319135) <= 5e-3);
    CHECK(std::abs(topE - 9.33654088284) <= 0.05);
    CHECK(ps.energies[static_cast<size_t>(ps.maxIndex)] ==
          *std::max_element(ps.energies.begin(), ps.energies.end()));
    for (const Field& f : ps.nodes) CHECK(x_variation(f) <= 1e-12);
    // the armed climber may transiently overshoot, but the crest stays on
    // the scale of the unrelaxed barrier and ends below where it began
    double supMax = -1e300;
    for (double h : rep.supEnergyHistory) supMax = std::max(supMax, h);
    CHECK(supMax <= 11.5);
    CHECK(rep.supEnergyHistory.back() <= rep.supEnergyHistory.front());
}

TEST_CASE("profile refinement lands on the flat saddle with spectrum 3") {
    GridSpec g{48, 96, 4.0};
    Field u0 = embed_flat(branch(flat_roots(P62), FlatWaveKind::Plus), g);
    NewtonResult nr = refine_xindependent(u0, P62, MS05, {});
    CHECK(nr.residualNorm <= 1e-8);
    CHECK(nr.iterations <= 30);
    CHECK(x_variation(nr.field) <= 1e-12);
    CHECK(std::abs(energy_eps(nr.field, P62, MS05).total - 9.319135) <= 5e-4);

    SpectrumResult sp = morse_index(nr.field, P62, MS05, {});
    CHECK(sp.morseIndex == 3);
    REQUIRE(static_cast<int>(sp.negativeEigenvalues.size()) == 3);
    CHECK(sp.negativeEigenvalues[0] == doctest::Approx(-91.763191).epsilon(1e-3));
    CHECK(sp.negativeEigenvalues[1] == doctest::Approx(-12.919033).epsilon(1e-3));
    CHECK(sp.negativeEigenvalues[2] == doctest::Approx(-12.919033).epsilon(1e-3));
    CHECK(std::abs(sp.pairs[1].lambda - sp.pairs[2].lambda) <=
          1e-6 * std::abs(sp.pairs[1].lambda));
    CHECK(sp.pairs[3].lambda == doctest::Approx(2.496896).epsilon(1e-3));
    // ground descent mode is a profile deformation, the degenerate pair is
    // the symmetry-breaking horizontal mode
    CHECK(x_variation(sp.pairs[0].vector) <= 1e-8);
    CHECK(x_variation(sp.pairs[1].vector) > 1e-4);
}

TEST_CASE("newton pulls a perturbed state back onto the nearby saddle") {
    GridSpec g{48, 96, 4.0};
    NewtonResult nr0 =
        refine_xindependent(embed_flat(branch(flat_roots(P62), FlatWaveKind::Plus), g), P62,
                            MS05, {});
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Field f0 = nr0.field;
    for (int j = 1; j <= g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) f0.at(i, j) += 1e-5 * uni(rng);
    NewtonResult nr = refine_saddle(f0, P62, MS05, {});
    CHECK(nr.residualNorm <= 1e-8);
    CHECK(nr.iterations <= 10);
    CHECK(std::abs(energy_eps(nr.field, P62, MS05).total - 9.319135) <= 1e-3);
    CHECK(x_variation(nr.field) <= 1e-12);
}

TEST_CASE("newton raises on iteration cap from a layer start") {
    GridSpec g{16, 32, 4.0};
    NewtonOptions no;
    no.maxIter = 3;
    CHECK_THROWS_AS(refine_saddle(well_start(g), P62, MS05, no), NewtonDivergenceError);
}

TEST_CASE("index kick walks the flat saddle down to index one") {
    GridSpec g{48, 96, 4.0};
    NewtonResult nr =
        refine_xindependent(embed_flat(branch(flat_roots(P62), FlatWaveKind::Plus), g), P62,
                            MS05, {});
    SpectrumResult sp = morse_index(nr.field, P62, MS05, {});
    REQUIRE(sp.morseIndex == 3);

    SaddleResult sr;
    sr.field = nr.field;
    sr.energy = energy_eps(nr.field, P62, MS05).total;
    sr.residualNorm = nr.residualNorm;
    sr.morseIndex = sp.morseIndex;
    sr.negativeEigenvalues = sp.negativeEigenvalues;
    sr.epsilon = MS05.eps;
    sr.xVariation = x_variation(nr.field);

    SolveOptions so;
    so.grid = g;
    SaddleResult out = index_kick(sr, P62, so);
    CHECK(out.morseIndex == 1);
    CHECK(out.residualNorm <= 1e-8);
    CHECK(std::abs(out.energy - 9.3180531) <= 1e-3);
    CHECK(out.energy < sr.energy);
    CHECK(out.xVariation > 1e-4);
}

TEST_CASE("full pipeline finds an index-one x-dependent saddle, deterministically") {
    SolveOptions so;
    so.grid = GridSpec{48, 96, 4.0};
    PathState path;
    SaddleResult sr = solve_minmax(P62, so, &path);
    CHECK(sr.converged);
    CHECK(sr.residualNorm <= 1e-8);
    CHECK(sr.morseIndex == 1);
    REQUIRE(static_cast<int>(sr.negativeEigenvalues.size()) == 1);
    CHECK(sr.negativeEigenvalues[0] == doctest::Approx(-43.946689).epsilon(1e-2));
    CHECK(std::abs(sr.energy - 9.3180531) <= 1e-3);
    CHECK(sr.energy > 9.01);
    // strictly below the x-independent ridge point: the min-max sits on the
    // symmetry-broken branch
    CHECK(sr.energy < 9.319135 - 5e-4);
    CHECK(sr.xVariation > 1e-4);
    CHECK(sr.xVariation < 0.1);
    CHECK(sr.epsilon == 0.05);
    CHECK(static_cast<int>(path.nodes.size()) == 17);
    CHECK(static_cast<int>(path.energies.size()) == 17);
    CHECK(path.maxIndex > 0);
    CHECK(path.maxIndex < 16);

    SaddleResult again = solve_minmax(P62, so, nullptr);
    CHECK(fields_identical(sr.field, again.field));
    CHECK(sr.energy == again.energy);
    CHECK(sr.morseIndex == again.morseIndex);
}

TEST_CASE("continuation hands the saddle down a decreasing eps list") {
    SolveOptions so;
    so.grid = GridSpec{48, 96, 4.0};
    auto stages = continuation(P62, {0.1, 0.05}, so);
    REQUIRE(static_cast<int>(stages.size()) == 2);
    CHECK(stages[0].epsilon == 0.1);
    CHECK(stages[1].epsilon == 0.05);
    for (const auto& sr : stages) {
        CHECK(sr.converged);
        CHECK(sr.residualNorm <= 1e-8);
        CHECK(sr.morseIndex == 1);
    }
    // at the wider layer the saddle is still x-independent; the narrow layer
    // breaks symmetry, and the barrier grows on the way down
    CHECK(std::abs(stages[0].energy - 9.29751487) <= 1e-3);
    CHECK(stages[0].xVariation <= 1e-12);
    CHECK(std::abs(stages[1].energy - 9.3180531) <= 1e-3);
    CHECK(stages[1].xVariation > 1e-4);
    CHECK(stages[0].energy < stages[1].energy);
}

TEST_CASE("mirror symmetrize is an even idempotent average") {
    GridSpec g{16, 32, 4.0};
    Field f = oracle::random_state(g, 21);
    Field m = detail::mirror_symmetrize(f);
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) CHECK(m.at(i, j) == m.at((g.nx - i) % g.nx, j));
    CHECK(fields_identical(detail::mirror_symmetrize(m), m));
    Field flat = embed_flat(branch(flat_roots(P62), FlatWaveKind::Infinity), g);
    CHECK(fields_identical(detail::mirror_symmetrize(flat), flat));
}
