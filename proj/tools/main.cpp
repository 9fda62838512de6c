#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>

#include "gravwave/diagnostics.hpp"
#include "gravwave/flatwaves.hpp"
#include "gravwave/io.hpp"
#include "gravwave/minmax.hpp"
#include "gravwave/pipeline.hpp"
#include "gravwave/symmetry.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;
using namespace gravwave;

namespace {

std::string iso_now() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Reports carry their only run-dependent content (the timestamp) in this
// block, so payloads compare equal across reruns of the same config.
json meta_for(const std::string& command) {
    return {{"command", command}, {"generated", iso_now()}, {"tool", "gravwave 0.1.0"}};
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw InvalidParameterError("cannot open " + path.string());
    os << text;
    if (!os) throw InvalidParameterError("write failed for " + path.string());
}

void emit_json(json doc, const std::string& command, const std::string& outDir,
               const char* filename) {
    doc["meta"] = meta_for(command);
    const std::string text = doc.dump(2) + "\n";
    std::cout << text;
    if (!outDir.empty()) {
        fs::create_directories(outDir);
        write_text(fs::path(outDir) / filename, text);
    }
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(); }

json saddle_json(const SaddleResult& sr, const RunConfig& cfg) {
    return {{"parameters", {{"A", cfg.params.A}, {"B", cfg.params.B}}},
            {"grid",
             {{"nx", cfg.solve.grid.nx}, {"ny", cfg.solve.grid.ny}, {"Ly", cfg.solve.grid.Ly}}},
            {"eps", sr.epsilon},
            {"energy", sr.energy},
            {"residualNorm", sr.residualNorm},
            {"morseIndex", sr.morseIndex},
            {"negativeEigenvalues", sr.negativeEigenvalues},
            {"xVariation", sr.xVariation},
            {"iterations", sr.iterations},
            {"converged", sr.converged},
            {"note", sr.note},
            {"symmetrized", cfg.solve.symmetrize},
            {"seed", cfg.solve.seed}};
}

int guarded(const std::string& command, const std::function<int()>& body) {
    try {
        return body();
    } catch (const NonConvergenceError& e) {
        json doc{{"error", {{"type", "non-convergence"}, {"message", e.what()}}}};
        doc["meta"] = meta_for(command);
        std::cout << doc.dump(2) << '\n';
        return 2;
    } catch (const Error& e) {
        json doc{{"error", {{"type", "invalid-input"}, {"message", e.what()}}}};
        doc["meta"] = meta_for(command);
        std::cout << doc.dump(2) << '\n';
        return 3;
    } catch (const std::exception& e) {
        json doc{{"error", {{"type", "internal"}, {"message", e.what()}}}};
        doc["meta"] = meta_for(command);
        std::cout << doc.dump(2) << '\n';
        return 3;
    }
}

// Config file first, then every flag the user actually passed, through the
// same parser the config uses.
struct ConfigFlags {
    std::string config, A, B, nx, ny, Ly, eps, epsList, nodes, kickAmp, seed, tol, maxIter,
        theta, out;
    bool symmetrize = false;
    bool hasEpsList = false;

    void attach(CLI::App* sub, bool withEpsList) {
        hasEpsList = withEpsList;
        sub->add_option("--config", config, "key = value settings file");
        sub->add_option("--A", A);
        sub->add_option("--B", B);
        sub->add_option("--nx", nx);
        sub->add_option("--ny", ny);
        sub->add_option("--Ly", Ly);
        sub->add_option("--eps", eps);
        if (withEpsList) sub->add_option("--eps-list", epsList, "comma-separated widths");
        sub->add_option("--nodes", nodes);
        sub->add_option("--kick-amp", kickAmp);
        sub->add_flag("--symmetrize", symmetrize);
        sub->add_option("--seed", seed);
        sub->add_option("--tol", tol);
        sub->add_option("--max-iter", maxIter);
        sub->add_option("--theta", theta);
        sub->add_option("--out", out);
    }

    RunConfig merge(const CLI::App* sub) const {
        RunConfig cfg;
        if (!config.empty()) cfg = load_config_file(config);
        auto over = [&](const char* flag, const char* key, const std::string& v) {
            if (sub->count(flag)) apply_setting(cfg, key, v);
        };
        over("--A", "A", A);
        over("--B", "B", B);
        over("--nx", "nx", nx);
        over("--ny", "ny", ny);
        over("--Ly", "Ly", Ly);
        over("--eps", "eps", eps);
        if (hasEpsList && sub->count("--eps-list")) apply_setting(cfg, "eps-list", epsList);
        over("--nodes", "nodes", nodes);
        over("--kick-amp", "kick-amp", kickAmp);
        if (sub->count("--symmetrize")) apply_setting(cfg, "symmetrize", "1");
        over("--seed", "seed", seed);
        over("--tol", "tol", tol);
        over("--max-iter", "max-iter", maxIter);
        over("--theta", "theta", theta);
        over("--out", "out", out);
        validate(cfg);
        return cfg;
    }
};

int cmd_landscape(double A, double B, int mmax, const std::string& outDir) {
    Parameters p{A, B};
    validate(p);
    const RegimeReport rr = regime_report(p);

    json branches = json::array();
    for (const FlatWave& w : flat_roots(p))
        branches.push_back({{"kind", flat_wave_kind_name(w.kind)},
                            {"Y", finite_or_null(w.Y)},
                            {"energy", w.energy}});

    json spectrum = json::array();
    if (rr.regime == Regime::Subcritical)
        for (const SpectrumEntry& se : second_variation_spectrum(p, mmax))
            spectrum.push_back({{"m", se.m}, {"lambda", se.lambda}});

    json doc{{"A", A},
             {"B", B},
             {"regime", regime_name(rr.regime)},
             {"criticalB", rr.criticalB},
             {"admissible", rr.admissible},
             {"conditionValue", finite_or_null(rr.conditionValue)},
             {"branches", branches},
             {"spectrum", spectrum}};
    emit_json(std::move(doc), "landscape", outDir, "landscape.json");
    return 0;
}

int cmd_region(double Amin, double Amax, double Bmin, double Bmax, int n,
               const std::string& outDir) {
    const std::string csv = region_csv(sample_region(Amin, Amax, Bmin, Bmax, n));
    std::cout << csv;
    if (!outDir.empty()) {
        fs::create_directories(outDir);
        write_text(fs::path(outDir) / "region.csv", csv);
    }
    return 0;
}

int cmd_solve(const RunConfig& cfg) {
    const SaddleResult sr = solve_minmax(cfg.params, cfg.solve);
    if (!cfg.outDir.empty()) {
        fs::create_directories(cfg.outDir);
        write_field_file((fs::path(cfg.outDir) / "field.dat").string(),
                         {sr.field, cfg.params, sr.epsilon});
    }
    emit_json(saddle_json(sr, cfg), "solve", cfg.outDir, "saddle.json");
    return sr.converged ? 0 : 2;
}

int cmd_continue(const RunConfig& cfg) {
    if (cfg.epsList.empty())
        throw InvalidParameterError("continue: eps-list is required");
    const std::vector<SaddleResult> stages = continuation(cfg.params, cfg.epsList, cfg.solve);

    json arr = json::array();
    bool allConverged = true;
    for (size_t k = 0; k < stages.size(); ++k) {
        arr.push_back(saddle_json(stages[k], cfg));
        allConverged = allConverged && stages[k].converged;
        if (!cfg.outDir.empty()) {
            fs::create_directories(cfg.outDir);
            const std::string name = "field_stage" + std::to_string(k) + ".dat";
            write_field_file((fs::path(cfg.outDir) / name).string(),
                             {stages[k].field, cfg.params, stages[k].epsilon});
        }
    }
    emit_json(json{{"stages", arr}}, "continue", cfg.outDir, "continuation.json");
    return allConverged ? 0 : 2;
}

int cmd_verify(const std::string& fieldFile, double theta, const std::string& outDir) {
    const FieldRecord rec = read_field_file(fieldFile);
    const double level = theta >= 0.0 ? theta : rec.eps;
    if (!(level > 0.0))
        throw InvalidParameterError("verify: need a positive --theta for this record");

    const DiagnosticsReport r = diagnose(rec.field, rec.params, level);
    const FreeBoundaryCurve fb = extract_free_boundary(rec.field, level);

    json doc{{"fieldFile", fieldFile},
             {"parameters", {{"A", rec.params.A}, {"B", rec.params.B}}},
             {"grid",
              {{"nx", rec.field.grid.nx},
               {"ny", rec.field.grid.ny},
               {"Ly", rec.field.grid.Ly}}},
             {"eps", rec.eps},
             {"theta", level},
             {"minValue", r.minValue},
             {"maxValue", r.maxValue},
             {"bernsteinExcess", r.bernsteinExcess},
             {"vacuumMass", r.vacuumMass},
             {"bernoulliResidualMedian", r.bernoulliResidualMedian},
             {"bernoulliResidualMax", r.bernoulliResidualMax},
             {"lipschitzNorm", r.lipschitzNorm},
             {"graphViolations", r.graphViolations},
             {"curveSamples", fb.samples.size()},
             {"symmetricDecreasing", is_symmetric_decreasing(rec.field, 1e-10)}};
    if (!outDir.empty()) {
        fs::create_directories(outDir);
        write_text(fs::path(outDir) / "curve.csv", curve_csv(fb));
    }
    emit_json(std::move(doc), "verify", outDir, "verify.json");
    return 0;
}

int cmd_spectrum(const std::string& fieldFile, int k, uint64_t seed,
                 const std::string& outDir) {
    const FieldRecord rec = read_field_file(fieldFile);
    EigenOptions eo;
    eo.k = k;
    eo.seed = seed;
    const SpectrumResult s =
        morse_index(rec.field, rec.params, {rec.eps, MollifierKind::Quintic}, eo);

    json pairs = json::array();
    for (const EigenPair& pr : s.pairs)
        pairs.push_back({{"lambda", pr.lambda}, {"residual", pr.residual}});
    json doc{{"fieldFile", fieldFile},
             {"eps", rec.eps},
             {"morseIndex", s.morseIndex},
             {"negTol", s.negTol},
             {"spectralScale", s.spectralScale},
             {"negativeEigenvalues", s.negativeEigenvalues},
             {"eigenvalues", pairs}};
    emit_json(std::move(doc), "spectrum", outDir, "spectrum.json");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Periodic free-surface wave solver"};
    app.require_subcommand(1);
    int rc = 0;

    auto* land = app.add_subcommand("landscape", "flat branches, regime and stability");
    double lA = 6.0, lB = 2.0;
    int mmax = 8;
    std::string landOut;
    land->add_option("--A", lA)->required();
    land->add_option("--B", lB)->required();
    land->add_option("--mmax", mmax);
    land->add_option("--out", landOut);
    land->callback([&] { rc = guarded("landscape", [&] { return cmd_landscape(lA, lB, mmax, landOut); }); });

    auto* reg = app.add_subcommand("region", "admissibility scan of the parameter plane");
    double Amin = 1.0, Amax = 10.0, Bmin = 0.5, Bmax = 8.0;
    int rn = 100;
    std::string regOut;
    reg->add_option("--Amin", Amin);
    reg->add_option("--Amax", Amax);
    reg->add_option("--Bmin", Bmin);
    reg->add_option("--Bmax", Bmax);
    reg->add_option("--n", rn);
    reg->add_option("--out", regOut);
    reg->callback([&] {
        rc = guarded("region", [&] { return cmd_region(Amin, Amax, Bmin, Bmax, rn, regOut); });
    });

    auto* solve = app.add_subcommand("solve", "min-max saddle search at one eps");
    ConfigFlags solveFlags;
    solveFlags.attach(solve, false);
    solve->callback(
        [&] { rc = guarded("solve", [&] { return cmd_solve(solveFlags.merge(solve)); }); });

    auto* cont = app.add_subcommand("continue", "saddle continuation across an eps schedule");
    ConfigFlags contFlags;
    contFlags.attach(cont, true);
    cont->callback(
        [&] { rc = guarded("continue", [&] { return cmd_continue(contFlags.merge(cont)); }); });

    auto* verify = app.add_subcommand("verify", "free boundary diagnostics of a stored field");
    std::string verifyFile, verifyOut;
    double vtheta = -1.0;
    verify->add_option("field", verifyFile, "field file")->required();
    verify->add_option("--theta", vtheta);
    verify->add_option("--out", verifyOut);
    verify->callback([&] {
        rc = guarded("verify", [&] { return cmd_verify(verifyFile, vtheta, verifyOut); });
    });

    auto* spec = app.add_subcommand("spectrum", "lowest Hessian eigenvalues of a stored field");
    std::string specFile, specOut;
    int sk = 6;
    uint64_t sseed = 1;
    spec->add_option("field", specFile, "field file")->required();
    spec->add_option("--k", sk);
    spec->add_option("--seed", sseed);
    spec->add_option("--out", specOut);
    spec->callback([&] {
        rc = guarded("spectrum", [&] { return cmd_spectrum(specFile, sk, sseed, specOut); });
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }
    return rc;
}
