#include "gravwave/pipeline.hpp"

#include <fstream>
#include <istream>
#include <sstream>

#include "gravwave/errors.hpp"

namespace gravwave {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos == v.size()) return x;
    } catch (const std::exception&) {
    }
    throw InvalidParameterError("config: bad real for " + key + ": '" + v + "'");
}

long parse_int(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const long x = std::stol(v, &pos);
        if (pos == v.size()) return x;
    } catch (const std::exception&) {
    }
    throw InvalidParameterError("config: bad integer for " + key + ": '" + v + "'");
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "1" || v == "true") return true;
    if (v == "0" || v == "false") return false;
    throw InvalidParameterError("config: bad flag for " + key + ": '" + v + "'");
}

} // namespace

std::vector<double> parse_eps_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(parse_real("eps-list", item));
    }
    if (out.empty()) throw InvalidParameterError("config: empty eps-list");
    return out;
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "A")
        cfg.params.A = parse_real(key, value);
    else if (key == "B")
        cfg.params.B = parse_real(key, value);
    else if (key == "nx")
        cfg.solve.grid.nx = static_cast<int>(parse_int(key, value));
    else if (key == "ny")
        cfg.solve.grid.ny = static_cast<int>(parse_int(key, value));
    else if (key == "Ly")
        cfg.solve.grid.Ly = parse_real(key, value);
    else if (key == "eps")
        cfg.solve.mollifier.eps = parse_real(key, value);
    else if (key == "eps-list")
        cfg.epsList = parse_eps_list(value);
    else if (key == "nodes")
        cfg.solve.nodes = static_cast<int>(parse_int(key, value));
    else if (key == "kick-amp")
        cfg.solve.kickAmp = parse_real(key, value);
    else if (key == "symmetrize")
        cfg.solve.symmetrize = parse_bool(key, value);
    else if (key == "seed")
        cfg.solve.seed = static_cast<uint64_t>(parse_int(key, value));
    else if (key == "tol")
        cfg.solve.relax.tol = parse_real(key, value);
    else if (key == "max-iter")
        cfg.solve.relax.maxIter = static_cast<int>(parse_int(key, value));
    else if (key == "theta")
        cfg.theta = parse_real(key, value);
    else if (key == "out")
        cfg.outDir = value;
    else
        throw InvalidParameterError("config: unknown key '" + key + "'");
}

RunConfig parse_config(std::istream& is) {
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw InvalidParameterError("config: line " + std::to_string(lineno) +
                                        " is not key = value");
        apply_setting(cfg, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw InvalidParameterError("config: cannot open " + path);
    return parse_config(is);
}

void validate(const RunConfig& cfg) {
    validate(cfg.params);
    validate(cfg.solve.grid);
    validate(cfg.solve.mollifier);
    if (cfg.solve.nodes < 8)
        throw InvalidParameterError("config: nodes must be at least 8");
    for (double e : cfg.epsList)
        if (!(e > 0.0)) throw InvalidParameterError("config: eps-list entries must be positive");
}

} // namespace gravwave
