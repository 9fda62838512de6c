#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gravwave/minmax.hpp"

namespace gravwave {

// Everything a solver run needs, assembled from defaults, an optional
// key=value config file, and command-line overrides (applied in that order).
struct RunConfig {
    Parameters params{6.0, 2.0};
    SolveOptions solve;
    std::vector<double> epsList; // continuation schedule; empty = single solve
    double theta = -1.0;         // diagnostics level; negative = use eps
    std::string outDir;          // empty = no artifact files
};

// Accepted keys mirror the CLI flag names: A, B, nx, ny, Ly, eps, eps-list,
// nodes, kick-amp, symmetrize, seed, tol, max-iter, theta, out. Unknown keys
// and unparsable values are rejected.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

// Line-oriented `key = value` text; blank lines and lines starting with #
// are skipped.
RunConfig parse_config(std::istream& is);
RunConfig load_config_file(const std::string& path);

// Re-validates every embedded constraint; throws the owning module's error.
void validate(const RunConfig& cfg);

std::vector<double> parse_eps_list(const std::string& text);

} // namespace gravwave
