#pragma once

#include <iosfwd>
#include <string>

#include "gravwave/diagnostics.hpp"
#include "gravwave/grid.hpp"
#include "gravwave/model.hpp"

namespace gravwave {

// A stored solver state: the field plus the parameters and mollifier width
// it was computed with, enough to rerun every diagnostic.
struct FieldRecord {
    Field field;
    Parameters params;
    double eps = 0.0;
};

// Text format: a fixed header line, one metadata line `nx ny Ly A B eps`,
// then nx*(ny+1) values row-major (j outer), one per line, 17 significant
// digits. Write -> read -> write is byte-identical.
void write_field(std::ostream& os, const FieldRecord& rec);
FieldRecord read_field(std::istream& is);

void write_field_file(const std::string& path, const FieldRecord& rec);
FieldRecord read_field_file(const std::string& path);

// CSV with header y,x, one sample per row, 17 significant digits.
std::string curve_csv(const FreeBoundaryCurve& fb);

} // namespace gravwave
