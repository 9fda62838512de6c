#include "gravwave/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "gravwave/errors.hpp"

namespace gravwave {

namespace {

constexpr const char* kHeader = "# gravwave-field v1";

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

void write_field(std::ostream& os, const FieldRecord& rec) {
    validate(rec.field.grid);
    validate(rec.params);
    if (!(rec.eps >= 0.0))
        throw InvalidParameterError("write_field: eps must be nonnegative");
    const auto& g = rec.field.grid;
    os << kHeader << '\n';
    os << g.nx << ' ' << g.ny << ' ' << fmt17(g.Ly) << ' ' << fmt17(rec.params.A) << ' '
       << fmt17(rec.params.B) << ' ' << fmt17(rec.eps) << '\n';
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) os << fmt17(rec.field.at(i, j)) << '\n';
}

FieldRecord read_field(std::istream& is) {
    std::string header;
    if (!std::getline(is, header) || header != kHeader)
        throw InvalidParameterError("read_field: missing or unknown header");

    FieldRecord rec;
    GridSpec g;
    if (!(is >> g.nx >> g.ny >> g.Ly >> rec.params.A >> rec.params.B >> rec.eps))
        throw InvalidParameterError("read_field: malformed metadata line");
    validate(g);
    validate(rec.params);
    if (!(rec.eps >= 0.0)) throw InvalidParameterError("read_field: negative eps");

    rec.field = Field(g);
    for (double& v : rec.field.values)
        if (!(is >> v)) throw InvalidParameterError("read_field: truncated value block");
    return rec;
}

void write_field_file(const std::string& path, const FieldRecord& rec) {
    std::ofstream os(path);
    if (!os) throw InvalidParameterError("write_field_file: cannot open " + path);
    write_field(os, rec);
    if (!os) throw InvalidParameterError("write_field_file: write failed for " + path);
}

FieldRecord read_field_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw InvalidParameterError("read_field_file: cannot open " + path);
    return read_field(is);
}

std::string curve_csv(const FreeBoundaryCurve& fb) {
    std::ostringstream os;
    os << "y,x\n";
    for (const auto& s : fb.samples) os << fmt17(s.y) << ',' << fmt17(s.x) << '\n';
    return os.str();
}

} // namespace gravwave
