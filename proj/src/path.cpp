#include "gravwave/minmax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gravwave {

namespace {

double dist(const Field& a, const Field& b) {
    Field d = a;
    for (size_t k = 0; k < d.values.size(); ++k) d.values[k] -= b.values[k];
    return norm(d);
}

// Fritsch-Carlson slopes through (s_i, v_i); shape-preserving, so renoded
// nodes never overshoot the data they interpolate.
void pchip_slopes(const std::vector<double>& h, const std::vector<double>& del,
                  std::vector<double>& d) {
    const size_t m = h.size() + 1;
    d.assign(m, 0.0);
    if (m == 2) {
        d[0] = d[1] = del[0];
        return;
    }
    for (size_t i = 1; i + 1 < m; ++i) {
        if (del[i - 1] * del[i] > 0.0) {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
        }
    }
    auto endpoint = [](double h0, double h1, double d0, double d1) {
        double v = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (v * d0 <= 0.0) v = 0.0;
        else if (d0 * d1 < 0.0 && std::abs(v) > 3.0 * std::abs(d0)) v = 3.0 * d0;
        return v;
    };
    d[0] = endpoint(h[0], h[1], del[0], del[1]);
    d[m - 1] = endpoint(h[m - 2], h[m - 3], del[m - 2], del[m - 3]);
}

// Redistribute the interior of nodes[lo..hi] to uniform arclength, keeping
// both ends bitwise intact. Monotone cubic interpolation coordinatewise.
void renode(std::vector<Field>& nodes, int lo, int hi) {
    const int m = hi - lo + 1;
    if (m < 3) return;
    std::vector<double> s(static_cast<size_t>(m), 0.0);
    for (int k = 1; k < m; ++k)
        s[static_cast<size_t>(k)] =
            s[static_cast<size_t>(k - 1)] + dist(nodes[static_cast<size_t>(lo + k)],
                                                 nodes[static_cast<size_t>(lo + k - 1)]);
    const double total = s[static_cast<size_t>(m - 1)];
    if (!(total > 1e-13)) return; // chain collapsed; nothing to spread

    // target interval and local parameter per interior node
    std::vector<int> idx(static_cast<size_t>(m), 0);
    std::vector<double> th(static_cast<size_t>(m), 0.0);
    for (int r = 1; r + 1 < m; ++r) {
        const double t = total * r / (m - 1);
        int i = 0;
        while (i + 2 < m && s[static_cast<size_t>(i + 1)] <= t) ++i;
        while (s[static_cast<size_t>(i + 1)] - s[static_cast<size_t>(i)] <= 0.0 && i + 2 < m) ++i;
        const double h = s[static_cast<size_t>(i + 1)] - s[static_cast<size_t>(i)];
        idx[static_cast<size_t>(r)] = i;
        th[static_cast<size_t>(r)] = h > 0.0 ? std::clamp((t - s[static_cast<size_t>(i)]) / h, 0.0, 1.0) : 0.0;
    }

    const size_t N = nodes[static_cast<size_t>(lo)].values.size();
    std::vector<double> vt(static_cast<size_t>(m) * N);
    for (int k = 0; k < m; ++k)
        std::copy(nodes[static_cast<size_t>(lo + k)].values.begin(),
                  nodes[static_cast<size_t>(lo + k)].values.end(),
                  vt.begin() + static_cast<size_t>(k) * N);

    std::vector<double> h(static_cast<size_t>(m - 1)), del(static_cast<size_t>(m - 1)),
        v(static_cast<size_t>(m)), dvec;
    for (int k = 0; k + 1 < m; ++k) {
        h[static_cast<size_t>(k)] =
            std::max(s[static_cast<size_t>(k + 1)] - s[static_cast<size_t>(k)], 1e-14 * total);
    }
    std::vector<std::vector<double>> fresh(static_cast<size_t>(m - 2),
                                           std::vector<double>(N));
    for (size_t c = 0; c < N; ++c) {
        for (int k = 0; k < m; ++k) v[static_cast<size_t>(k)] = vt[static_cast<size_t>(k) * N + c];
        bool flat = true;
        for (int k = 1; k < m; ++k) flat = flat && v[static_cast<size_t>(k)] == v[0];
        if (flat) { // constant coordinate reproduced exactly (bottom row stays pinned)
            for (int r = 1; r + 1 < m; ++r) fresh[static_cast<size_t>(r - 1)][c] = v[0];
            continue;
        }
        for (int k = 0; k + 1 < m; ++k)
            del[static_cast<size_t>(k)] =
                (v[static_cast<size_t>(k + 1)] - v[static_cast<size_t>(k)]) / h[static_cast<size_t>(k)];
        pchip_slopes(h, del, dvec);
        for (int r = 1; r + 1 < m; ++r) {
            const int i = idx[static_cast<size_t>(r)];
            const double t = th[static_cast<size_t>(r)];
            const double hi_ = h[static_cast<size_t>(i)];
            const double t2 = t * t, t3 = t2 * t;
            const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
            const double h10 = t3 - 2.0 * t2 + t;
            const double h01 = -2.0 * t3 + 3.0 * t2;
            const double h11 = t3 - t2;
            fresh[static_cast<size_t>(r - 1)][c] =
                h00 * v[static_cast<size_t>(i)] + h10 * hi_ * dvec[static_cast<size_t>(i)] +
                h01 * v[static_cast<size_t>(i + 1)] + h11 * hi_ * dvec[static_cast<size_t>(i + 1)];
        }
    }
    for (int r = 1; r + 1 < m; ++r)
        nodes[static_cast<size_t>(lo + r)].values = std::move(fresh[static_cast<size_t>(r - 1)]);
}

void axpy(Field& y, double a, const Field& x) {
    for (size_t k = 0; k < y.values.size(); ++k) y.values[k] += a * x.values[k];
}

int interior_argmax(const std::vector<double>& e) {
    int mi = 1;
    for (int s = 2; s + 1 < static_cast<int>(e.size()); ++s)
        if (e[static_cast<size_t>(s)] > e[static_cast<size_t>(mi)]) mi = s;
    return mi;
}

} // namespace

PathState init_path(const Field& a, const Field& b, int n, double kickAmp, int kickMode) {
    validate(a.grid);
    if (!(a.grid == b.grid))
        throw ContractViolationError("init_path: endpoint grids differ");
    if (n < 8) throw InvalidParameterError("init_path: need at least 8 nodes");
    if (!has_unit_bottom_trace(a) || !has_unit_bottom_trace(b))
        throw ContractViolationError("init_path: endpoints must carry bottom value 1");

    PathState ps;
    ps.nodes.reserve(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) / (n - 1);
        Field f = a;
        for (size_t c = 0; c < f.values.size(); ++c)
            f.values[c] = (1.0 - t) * a.values[c] + t * b.values[c];
        if (k > 0 && k + 1 < n)
            f = perturb(f, kickMode, kickAmp, 0);
        ps.nodes.push_back(std::move(f));
    }
    ps.energies.assign(static_cast<size_t>(n), 0.0);
    ps.maxIndex = 0;
    return ps;
}

namespace detail {

Field mirror_symmetrize(const Field& f) {
    Field out = f;
    const int nx = f.grid.nx;
    for (int j = 0; j < f.grid.rows(); ++j) {
        for (int i = 0; i <= nx / 2; ++i) {
            const int mir = (nx - i) % nx;
            const double v = 0.5 * (f.at(i, j) + f.at(mir, j));
            out.at(i, j) = v;
            out.at(mir, j) = v;
        }
    }
    return out;
}

RelaxReport relax_path_hooked(PathState& ps, const Parameters& p, const MollifierSpec& ms,
                              const RelaxOptions& opt,
                              const std::function<Field(const Field&)>* nodeFilter) {
    validate(p);
    validate(ms);
    const int n = static_cast<int>(ps.nodes.size());
    if (n < 3) throw ContractViolationError("relax_path: need at least 3 nodes");
    const GridSpec g = ps.nodes[0].grid;
    for (const Field& f : ps.nodes) {
        if (!(f.grid == g)) throw ContractViolationError("relax_path: node grids differ");
        if (!has_unit_bottom_trace(f))
            throw ContractViolationError("relax_path: node bottom trace must be 1");
    }
    for (int e : {0, n - 1}) {
        const double rn = norm(gradient_eps(ps.nodes[static_cast<size_t>(e)], p, ms));
        if (!(rn <= opt.endpointTol))
            throw ContractViolationError("relax_path: endpoint is not a settled minimizer");
    }

    StripPoissonSolver pois(g);
    auto energy_of = [&](const Field& f) { return energy_eps(f, p, ms).total; };

    // A path of x-independent nodes must stay x-independent: the continuous
    // flow preserves that subspace, but transform roundoff would seed the
    // transverse instability and silently break it. Detect the case up front
    // and re-project each update onto column means.
    bool xflat = true;
    for (const Field& f : ps.nodes) xflat = xflat && x_variation(f) <= 1e-12;
    auto xproject = [&](Field& f) {
        const int nx = f.grid.nx;
        for (int j = 0; j < f.grid.rows(); ++j) {
            double sum = 0.0;
            for (int i = 0; i < nx; ++i) sum += f.at(i, j);
            const double mean = sum / nx;
            for (int i = 0; i < nx; ++i) f.at(i, j) = mean;
        }
    };

    std::vector<double>& en = ps.energies;
    en.assign(static_cast<size_t>(n), 0.0);
    for (int s = 0; s < n; ++s) en[static_cast<size_t>(s)] = energy_of(ps.nodes[static_cast<size_t>(s)]);

    std::vector<double> alphas(static_cast<size_t>(n), 1.0);
    double climbAlpha = 0.25;
    double prevClimbRes = std::numeric_limits<double>::infinity();
    bool armed = false;
    int climbNode = -1; // pinned once armed; renode keeps it a sub-chain end
    int climbMisses = 0;

    RelaxReport rep;
    rep.supEnergyHistory.reserve(static_cast<size_t>(std::min(opt.maxIter, 100000)));

    auto tangent_at = [&](int mi) {
        Field tau = ps.nodes[static_cast<size_t>(mi + 1)];
        for (size_t c = 0; c < tau.values.size(); ++c)
            tau.values[c] -= ps.nodes[static_cast<size_t>(mi - 1)].values[c];
        const double tn = norm(tau);
        if (tn > 0.0)
            for (double& v : tau.values) v /= tn;
        return tau;
    };

    for (int sweep = 0; sweep < opt.maxIter; ++sweep) {
        const int mi = armed ? climbNode : interior_argmax(en);
        Field gm = gradient_eps(ps.nodes[static_cast<size_t>(mi)], p, ms);
        Field tau = tangent_at(mi);
        const double gt = inner(gm, tau);
        Field perp = gm;
        axpy(perp, -gt, tau);
        const double rPerp = norm(perp);
        if (opt.climb && !armed) {
            // Arm on a small transverse residual, or once the sup energy has
            // stalled: the capped string settles into a stationary shape with
            // the crossing hidden inside one interval, and only the climbing
            // node can resolve it from there.
            const size_t nh = rep.supEnergyHistory.size();
            const bool stalled =
                nh >= 25 && std::abs(rep.supEnergyHistory[nh - 1] -
                                     rep.supEnergyHistory[nh - 25]) <=
                                1e-4 * (1.0 + std::abs(rep.supEnergyHistory[nh - 1]));
            if (rPerp <= opt.climbStart || stalled) {
                armed = true;
                climbNode = mi;
            }
        }
        rep.projectedResidual = armed ? norm(gm) : rPerp;
        if (rep.projectedResidual <= opt.tol &&
            (!armed || interior_argmax(en) == climbNode)) {
            rep.converged = true;
            break;
        }

        for (int s = 1; s + 1 < n; ++s) {
            Field& node = ps.nodes[static_cast<size_t>(s)];
            if (armed && s == mi) {
                Field z = pois.solve(gradient_eps(node, p, ms));
                // reverse the tangent component: uphill along the path,
                // downhill transverse to it
                Field d = z;
                for (double& v : d.values) v = -v;
                axpy(d, 2.0 * inner(z, tau), tau);
                const double dn = norm(d);
                const double cap =
                    0.5 * std::min(dist(node, ps.nodes[static_cast<size_t>(s - 1)]),
                                   dist(node, ps.nodes[static_cast<size_t>(s + 1)]));
                double a = climbAlpha;
                if (dn > 0.0 && a * dn > cap) a = cap / dn;
                axpy(node, a, d);
            } else {
                // Descent must stay small against the node spacing or the
                // chain tears: free descent drains every node into a well and
                // the barrier slips between neighbors. Within that budget take
                // several steps, since the mollified layer caps each one well
                // below 1.
                constexpr int kInnerSteps = 4;
                const double capDist =
                    0.35 * std::min(dist(node, ps.nodes[static_cast<size_t>(s - 1)]),
                                    dist(node, ps.nodes[static_cast<size_t>(s + 1)]));
                double budget = capDist;
                double e0 = en[static_cast<size_t>(s)];
                for (int ii = 0; ii < kInnerSteps; ++ii) {
                    Field gs = gradient_eps(node, p, ms);
                    if (norm(gs) <= 0.25 * opt.tol) break;
                    Field z = pois.solve(gs);
                    const double gz = inner(gs, z);
                    const double zn = norm(z);
                    if (!(zn > 0.0)) break;
                    double a = std::min(1.0, 2.0 * alphas[static_cast<size_t>(s)]);
                    bool accepted = false;
                    Field trial;
                    double ae = 0.0;
                    for (int bt = 0; bt < 40; ++bt) {
                        ae = std::min(a, budget / zn);
                        trial = node;
                        axpy(trial, -ae, z);
                        const double et = energy_of(trial);
                        if (et <= e0 - 1e-4 * ae * gz) {
                            accepted = true;
                            e0 = et;
                            break;
                        }
                        a *= 0.5;
                    }
                    if (accepted) {
                        node = std::move(trial);
                        alphas[static_cast<size_t>(s)] = a;
                        budget -= ae * zn;
                        if (budget <= 0.05 * capDist) break;
                    } else {
                        alphas[static_cast<size_t>(s)] =
                            std::max(1e-12, 0.5 * alphas[static_cast<size_t>(s)]);
                        break;
                    }
                }
            }
            if (xflat) xproject(node);
            if (nodeFilter) node = (*nodeFilter)(node);
        }

        for (int s = 1; s + 1 < n; ++s)
            en[static_cast<size_t>(s)] = energy_of(ps.nodes[static_cast<size_t>(s)]);
        const int miPost = interior_argmax(en);
        ps.maxIndex = miPost;
        rep.supEnergyHistory.push_back(en[static_cast<size_t>(miPost)]);
        if (!std::isfinite(en[static_cast<size_t>(miPost)]))
            throw ContractViolationError("relax_path: path energy is not finite");

        if (armed) {
            // The crest can migrate away from the pinned node while the chain
            // is still reshaping. Chase it: re-pin after a persistent miss and
            // restart the step-size adaptation.
            const int am = interior_argmax(en);
            if (am != climbNode &&
                en[static_cast<size_t>(am)] >
                    en[static_cast<size_t>(climbNode)] +
                        1e-3 * (1.0 + std::abs(en[static_cast<size_t>(am)]))) {
                ++climbMisses;
            } else {
                climbMisses = 0;
            }
            if (climbMisses >= 10) {
                climbNode = am;
                climbAlpha = 0.25;
                prevClimbRes = std::numeric_limits<double>::infinity();
                climbMisses = 0;
            }
            const double res =
                norm(gradient_eps(ps.nodes[static_cast<size_t>(climbNode)], p, ms));
            climbAlpha = res < prevClimbRes ? std::min(1.0, 1.3 * climbAlpha)
                                            : std::max(1e-6, 0.5 * climbAlpha);
            prevClimbRes = res;
        }

        if (armed) {
            renode(ps.nodes, 0, climbNode);
            renode(ps.nodes, climbNode, n - 1);
        } else {
            renode(ps.nodes, 0, n - 1);
        }
        for (int s = 1; s + 1 < n; ++s)
            en[static_cast<size_t>(s)] = energy_of(ps.nodes[static_cast<size_t>(s)]);
        rep.iterations = sweep + 1;
    }

    if (!rep.converged) { // refresh the residual to match the final nodes
        const int mi = armed ? climbNode : interior_argmax(en);
        Field gm = gradient_eps(ps.nodes[static_cast<size_t>(mi)], p, ms);
        if (armed) {
            rep.projectedResidual = norm(gm);
        } else {
            Field tau = tangent_at(mi);
            axpy(gm, -inner(gm, tau), tau);
            rep.projectedResidual = norm(gm);
        }
    }

    ps.maxIndex = interior_argmax(en);
    double globalMax = en[static_cast<size_t>(ps.maxIndex)];
    for (int s = 0; s < n; ++s)
        if (en[static_cast<size_t>(s)] > globalMax) {
            globalMax = en[static_cast<size_t>(s)];
            ps.maxIndex = s;
        }
    return rep;
}

} // namespace detail

RelaxReport relax_path(PathState& ps, const Parameters& p, const MollifierSpec& ms,
                       const RelaxOptions& opt) {
    return detail::relax_path_hooked(ps, p, ms, opt, nullptr);
}

} // namespace gravwave
