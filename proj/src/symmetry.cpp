#include "gravwave/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gravwave {

namespace detail {

std::vector<double> rearrange_row(const std::vector<double>& v) {
    const int n = static_cast<int>(v.size());
    std::vector<double> out(v);
    if (n < 2) return out;
    std::vector<int> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
        return v[static_cast<size_t>(a)] > v[static_cast<size_t>(b)];
    });
    const int c = n / 2;
    for (int r = 0; r < n; ++r) {
        const int off = (r + 1) / 2;
        const int slot = r % 2 == 1 ? c + off : c - off;
        out[static_cast<size_t>((slot % n + n) % n)] =
            v[static_cast<size_t>(idx[static_cast<size_t>(r)])];
    }
    return out;
}

} // namespace detail

RearrangedField steiner_rearrange(const Field& f) {
    validate(f.grid);
    const int nx = f.grid.nx, ny = f.grid.ny;
    RearrangedField out{f, true};
    std::vector<double> row(static_cast<size_t>(nx));
    for (int j = 1; j <= ny; ++j) {
        for (int i = 0; i < nx; ++i) row[static_cast<size_t>(i)] = f.at(i, j);
        const std::vector<double> re = detail::rearrange_row(row);
        for (int i = 0; i < nx; ++i) out.field.at(i, j) = re[static_cast<size_t>(i)];
    }
    const int c = nx / 2;
    for (int j = 1; j <= ny && out.symmetricDecreasing; ++j) {
        for (int k = 0; k < nx / 2; ++k)
            if (out.field.at((c + k) % nx, j) < out.field.at((c + k + 1) % nx, j)) {
                out.symmetricDecreasing = false;
                break;
            }
        for (int k = 0; k + 1 < nx / 2; ++k)
            if (out.field.at(c - k, j) < out.field.at(c - k - 1, j)) {
                out.symmetricDecreasing = false;
                break;
            }
    }
    return out;
}

bool is_symmetric_decreasing(const Field& f, double tol) {
    validate(f.grid);
    const int nx = f.grid.nx, ny = f.grid.ny;
    const int c = nx / 2;
    for (int j = 0; j <= ny; ++j) {
        for (int k = 0; k < nx / 2; ++k)
            if (f.at((c + k) % nx, j) < f.at((c + k + 1) % nx, j) - tol) return false;
        for (int k = 0; k + 1 < nx / 2; ++k)
            if (f.at(c - k, j) < f.at(c - k - 1, j) - tol) return false;
        for (int k = 1; k < nx / 2; ++k) {
            const double plus = f.at((c + k) % nx, j);
            const double minus = f.at(c - k, j);
            bool ok = std::abs(plus - minus) <= tol;
            if (!ok && k == nx / 2 - 1)
                ok = std::abs(minus - f.at((c + k + 1) % nx, j)) <= tol;
            if (!ok) return false;
        }
    }
    return true;
}

RelaxReport symmetrized_relax_path(PathState& ps, const Parameters& p,
                                   const MollifierSpec& ms, const RelaxOptions& opt) {
    const std::function<Field(const Field&)> filter = [](const Field& f) {
        return steiner_rearrange(f).field;
    };
    return detail::relax_path_hooked(ps, p, ms, opt, &filter);
}

} // namespace gravwave
