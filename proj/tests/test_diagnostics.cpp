#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "gravwave/diagnostics.hpp"
#include "gravwave/minmax.hpp"
#include "oracles.hpp"

using namespace gravwave;

namespace {

const Parameters P62{6.0, 2.0};

FlatWave branch(FlatWaveKind k) {
    for (const FlatWave& w : flat_roots(P62))
        if (w.kind == k) return w;
    REQUIRE(false);
    return {};
}

// Cone-shaped graph state: linear ramp through the level set, so the
// row-wise crossing position r(y) - theta/5 is recovered exactly by linear
// interpolation.
Field cone_state(const GridSpec& g) {
    Field f = make_state(g, 1.0);
    for (int j = 1; j <= g.ny; ++j) {
        const double r = 0.35 * (1.0 - g.y(j) / g.Ly);
        for (int i = 0; i < g.nx; ++i) {
            const double v = 5.0 * (r - std::fabs(g.x(i)));
            f.at(i, j) = std::clamp(v, 0.0, 1.0);
        }
    }
    return f;
}

} // namespace

TEST_CASE("bounds track nodewise extrema") {
    GridSpec g{16, 32, 4.0};

    auto [flo, fhi] = bounds_check(embed_flat(branch(FlatWaveKind::Minus), g));
    CHECK(flo == 0.0);
    CHECK(fhi == 1.0);

    auto [olo, ohi] = bounds_check(make_state(g, 1.0));
    CHECK(olo == 1.0);
    CHECK(ohi == 1.0);

    Field f = make_state(g, 1.0);
    f.at(3, 5) = -0.3;
    f.at(7, 20) = 2.7;
    auto [lo, hi] = bounds_check(f);
    CHECK(lo == -0.3);
    CHECK(hi == 2.7);
}

TEST_CASE("bernstein excess vanishes for flat profiles and flags steep fields") {
    // both finite branches satisfy |grad u|^2 <= (A - By)+ with equality only
    // where both sides vanish, so the discrete max sits exactly at zero
    for (int ny : {32, 128}) {
        GridSpec g{ny / 2, ny, 4.0};
        CHECK(bernstein_check(embed_flat(branch(FlatWaveKind::Minus), g), P62) == 0.0);
    }
    // the upper branch puts its kink within 3 - Y of the weight cutoff; while
    // one cell spans both, the centered difference at the cutoff row sees the
    // wet tail against a clamped weight, a spurious excess that dies with h
    {
        const FlatWave plus = branch(FlatWaveKind::Plus);
        GridSpec coarse{16, 32, 4.0};
        const double exCoarse = bernstein_check(embed_flat(plus, coarse), P62);
        CHECK(coarse.hy() > 3.0 - plus.Y);
        CHECK(exCoarse > 0.0);
        CHECK(exCoarse < 0.01);
        GridSpec fine{64, 128, 4.0};
        CHECK(fine.hy() < 3.0 - plus.Y);
        CHECK(bernstein_check(embed_flat(plus, fine), P62) == 0.0);
    }

    // slope 3 everywhere: excess 9 attained in the vacuum strip, exactly
    // because centered differences reproduce linear data
    GridSpec g{16, 32, 4.0};
    Field steep = make_state(g, 1.0);
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) steep.at(i, j) = 1.0 + 3.0 * g.y(j);
    CHECK(bernstein_check(steep, P62) == doctest::Approx(9.0).epsilon(1e-12));
}

TEST_CASE("vacuum mass is zero iff the state clears the high strip") {
    GridSpec g{16, 32, 4.0};
    CHECK(vacuum_check(embed_flat(branch(FlatWaveKind::Minus), g), P62) == 0.0);
    CHECK(vacuum_check(embed_flat(branch(FlatWaveKind::Plus), g), P62) == 0.0);

    // rows at y >= 3 are j = 24..32, all ones: nx * 9 cells of mass 1
    CHECK(vacuum_check(make_state(g, 1.0), P62) == 144.0);

    Field f = embed_flat(branch(FlatWaveKind::Minus), g);
    f.at(5, 28) = 0.25; // y = 3.5
    CHECK(vacuum_check(f, P62) == doctest::Approx(0.0625).epsilon(1e-14));
}

TEST_CASE("free boundary extraction interpolates level crossings by row") {
    GridSpec g{32, 32, 4.0};
    Field f = cone_state(g);
    FreeBoundaryCurve fb = extract_free_boundary(f, 0.5);

    // rows with 5*r(y) > theta cross once; the rest stay dry
    int expected = 0;
    for (int j = 1; j <= g.ny; ++j)
        if (5.0 * 0.35 * (1.0 - g.y(j) / g.Ly) > 0.5) ++expected;
    CHECK(fb.samples.size() == static_cast<size_t>(expected));
    CHECK(fb.graphViolations == 0);
    CHECK(fb.thetaLevel == 0.5);
    CHECK(fb.method == ExtractionMethod::LevelCrossing);

    double prevY = -1.0;
    for (const auto& s : fb.samples) {
        CHECK(s.x >= 0.0);
        CHECK(s.x <= 0.5);
        CHECK(s.y > prevY);
        prevY = s.y;
        const double r = 0.35 * (1.0 - s.y / g.Ly);
        CHECK(s.x == doctest::Approx(r - 0.1).epsilon(1e-12));
    }

    // level above the range: nothing to cross
    CHECK(extract_free_boundary(f, 2.0).samples.empty());

    // x-independent state: every row is fully wet or fully dry, the
    // degenerate horizontal surface produces no graph samples
    Field flat = embed_flat(branch(FlatWaveKind::Minus), g);
    FreeBoundaryCurve none = extract_free_boundary(flat, 0.5);
    CHECK(none.samples.empty());
    CHECK(none.graphViolations == 0);

    CHECK_THROWS_AS(extract_free_boundary(f, std::nan("")), InvalidParameterError);
}

TEST_CASE("multiple crossings per row are counted as graph violations") {
    GridSpec g{64, 16, 4.0};
    Field f = make_state(g, 1.0);
    for (int j = 1; j <= g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            f.at(i, j) = 0.5 + 0.4 * std::cos(4.0 * M_PI * g.x(i));

    FreeBoundaryCurve fb = extract_free_boundary(f, 0.5);
    // every interior row crosses at x = 1/8 and x = 3/8; the bottom row is
    // pinned wet. One sample per row, the innermost crossing
    CHECK(fb.samples.size() == static_cast<size_t>(g.ny));
    CHECK(fb.graphViolations == g.ny);
    for (const auto& s : fb.samples) CHECK(s.x == doctest::Approx(0.125).epsilon(1e-9));
}

TEST_CASE("bernoulli residual matches the one-sided slope defect for flat profiles") {
    const FlatWave lower = branch(FlatWaveKind::Minus);
    for (int ny : {64, 128, 256}) {
        GridSpec g{ny / 2, ny, 4.0};
        Field f = embed_flat(lower, g);

        // sample the last wet row; the one-sided vertical slope there is the
        // exact profile slope, so the residual reduces to B*(Y - y_row)
        const int js = static_cast<int>(std::floor(lower.Y / g.hy()));
        FreeBoundaryCurve fb;
        fb.thetaLevel = 0.5;
        fb.samples.push_back({g.y(js), 0.25});

        auto [med, mx] = bernoulli_residual(f, fb, P62);
        const double predicted = P62.B * (lower.Y - g.y(js));
        CHECK(med == doctest::Approx(predicted).epsilon(1e-10));
        CHECK(mx == doctest::Approx(predicted).epsilon(1e-10));
        CHECK(mx <= P62.B * g.hy());
    }

    GridSpec g{16, 32, 4.0};
    FreeBoundaryCurve empty;
    CHECK_THROWS_AS(bernoulli_residual(embed_flat(lower, g), empty, P62),
                    ContractViolationError);
}

TEST_CASE("converged symmetric saddle passes the free boundary screens") {
    SolveOptions opt;
    opt.grid = GridSpec{48, 96, 4.0};
    opt.mollifier.eps = 0.05;
    opt.symmetrize = true;
    SaddleResult sr = solve_minmax(P62, opt);
    REQUIRE(sr.converged);

    DiagnosticsReport r = diagnose(sr.field, P62, 0.05);
    CHECK(r.minValue > 0.0);
    CHECK(r.minValue < 0.05);
    CHECK(r.maxValue == 1.0); // pinned bottom trace dominates
    CHECK(r.bernsteinExcess > 0.0);
    CHECK(r.bernsteinExcess < 0.05);
    CHECK(r.vacuumMass > 0.0);
    CHECK(r.vacuumMass < 2.5);
    CHECK(r.lipschitzNorm > 0.3);
    CHECK(r.lipschitzNorm < 0.8);
    CHECK(r.graphViolations == 0);

    // surface sits under the hydrostatic cutoff A/B
    FreeBoundaryCurve fb = extract_free_boundary(sr.field, 0.05);
    REQUIRE(fb.samples.size() >= 4);
    CHECK(fb.graphViolations == 0);
    for (const auto& s : fb.samples) {
        CHECK(s.y > 2.0);
        CHECK(s.y < 3.0 + 0.1);
    }

    // the defect of the sharp surface identity shrinks with the level: the
    // smearing layer thins toward the wet side
    auto [medLo, mxLo] = bernoulli_residual(sr.field, extract_free_boundary(sr.field, 0.025), P62);
    auto [medMid, mxMid] = bernoulli_residual(sr.field, fb, P62);
    auto [medHi, mxHi] = bernoulli_residual(sr.field, extract_free_boundary(sr.field, 0.1), P62);
    CHECK(medLo < medMid);
    CHECK(medMid < medHi);
    CHECK(medMid < 0.5);
    CHECK(mxLo < mxMid);
    CHECK(mxMid < mxHi);

    // assembled report agrees with the direct calls
    CHECK(r.bernoulliResidualMedian == medMid);
    CHECK(r.bernoulliResidualMax == mxMid);
}

TEST_CASE("diagnose stays finite on rough random states") {
    GridSpec g{16, 32, 4.0};
    Field f = oracle::random_state(g, 3);

    DiagnosticsReport r = diagnose(f, P62, 0.5);
    CHECK(std::isfinite(r.minValue));
    CHECK(std::isfinite(r.maxValue));
    CHECK(std::isfinite(r.bernsteinExcess));
    CHECK(std::isfinite(r.vacuumMass));
    CHECK(std::isfinite(r.bernoulliResidualMedian));
    CHECK(std::isfinite(r.bernoulliResidualMax));
    CHECK(std::isfinite(r.lipschitzNorm));
    CHECK(r.graphViolations >= 0);

    // unreachable level: no curve, residuals stay at their zero defaults
    DiagnosticsReport hi = diagnose(f, P62, 99.0);
    CHECK(hi.bernoulliResidualMedian == 0.0);
    CHECK(hi.bernoulliResidualMax == 0.0);
}
