#include "degpar/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "degpar/error.hpp"

namespace degpar {

ExponentFit fit_growth_exponent(std::span<const double> radii, std::span<const double> oscs, double floor) {
    require(radii.size() == oscs.size(), "fit_growth_exponent: radii and oscillations differ in length");
    for (std::size_t i = 1; i < radii.size(); ++i)
        require(radii[i] < radii[i - 1], "fit_growth_exponent: radii must be strictly decreasing");
    ExponentFit fit;
    fit.floor = floor;
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (radii[i] < floor * (1.0 - 1e-12)) {
            ++fit.dropped_below_floor;
            continue;
        }
        if (!(oscs[i] > 0.0)) {
            ++fit.dropped_nonpositive;
            continue;
        }
        fit.radii.push_back(radii[i]);
        lx.push_back(std::log(radii[i]));
        ly.push_back(std::log(oscs[i]));
    }
    if (lx.size() < 3) {
        std::ostringstream os;
        os << "exponent fit needs at least 3 usable radii, got " << lx.size() << " (" << fit.dropped_below_floor
           << " below the 4h floor, " << fit.dropped_nonpositive << " with zero oscillation)";
        fail(ErrorKind::Precondition, os.str());
    }
    const double n = static_cast<double>(lx.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

namespace {

std::vector<NodeRef> domain_nodes(const SpaceTimeGrid& g, const IntrinsicCylinder& cyl) {
    auto nodes = cylinder_nodes(g, cyl);
    std::erase_if(nodes, [&](const NodeRef& n) { return !g.in_domain(n.space); });
    return nodes;
}

// Per spatial node: extreme values over the cylinder's slices.
struct ColumnExtremes {
    std::vector<Vec2> x;
    std::vector<double> hi;
    std::vector<double> lo;
};

double detrended(const ColumnExtremes& c, const Vec2& l) {
    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < c.x.size(); ++i) {
        const double shift = dot(l, c.x[i]);
        hi = std::max(hi, c.hi[i] - shift);
        lo = std::min(lo, c.lo[i] - shift);
    }
    return hi - lo;
}

template <typename F>
std::pair<double, double> golden_min(F&& f, double a, double b, int iters) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - r * (b - a);
    double d = a + r * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int i = 0; i < iters; ++i) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    return fc <= fd ? std::pair{c, fc} : std::pair{d, fd};
}

}  // namespace

double oscillation(const FieldSampler& u, const IntrinsicCylinder& cyl) {
    const auto nodes = domain_nodes(u.grid(), cyl);
    if (nodes.empty()) fail(ErrorKind::Precondition, "oscillation: cylinder contains no grid nodes");
    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    for (const NodeRef& n : nodes) {
        const double v = u(n.space, n.time);
        hi = std::max(hi, v);
        lo = std::min(lo, v);
    }
    return hi - lo;
}

DetrendedOscillation plane_detrended_osc(const FieldSampler& u, const IntrinsicCylinder& cyl) {
    const SpaceTimeGrid& g = u.grid();
    const auto nodes = domain_nodes(g, cyl);
    if (nodes.empty()) fail(ErrorKind::Precondition, "plane_detrended_osc: cylinder contains no grid nodes");

    // One pass: column extremes plus least-squares moments, centred at the
    // cylinder axis to keep the raw sums well conditioned.
    ColumnExtremes cols;
    std::vector<long> slot(g.spatial_size(), -1);
    double mx0 = 0.0, mx1 = 0.0, mu = 0.0;
    double s00 = 0.0, s01 = 0.0, s11 = 0.0, s0u = 0.0, s1u = 0.0;
    for (const NodeRef& n : nodes) {
        const Vec2 x = g.point(n.space) - cyl.center;
        const double v = u(n.space, n.time);
        long& k = slot[n.space];
        if (k < 0) {
            k = static_cast<long>(cols.x.size());
            cols.x.push_back(g.point(n.space));
            cols.hi.push_back(v);
            cols.lo.push_back(v);
        } else {
            const auto kk = static_cast<std::size_t>(k);
            cols.hi[kk] = std::max(cols.hi[kk], v);
            cols.lo[kk] = std::min(cols.lo[kk], v);
        }
        mx0 += x[0];
        mx1 += x[1];
        mu += v;
        s00 += x[0] * x[0];
        s01 += x[0] * x[1];
        s11 += x[1] * x[1];
        s0u += x[0] * v;
        s1u += x[1] * v;
    }
    const double cnt = static_cast<double>(nodes.size());
    mx0 /= cnt;
    mx1 /= cnt;
    mu /= cnt;
    s00 -= cnt * mx0 * mx0;
    s01 -= cnt * mx0 * mx1;
    s11 -= cnt * mx1 * mx1;
    s0u -= cnt * mx0 * mu;
    s1u -= cnt * mx1 * mu;
    DetrendedOscillation out;
    const double base = detrended(cols, Vec2{0.0, 0.0});
    Vec2 ls{0.0, 0.0};
    const double scale = std::max(s00 + s11, std::numeric_limits<double>::min());
    if (g.dim() == 1) {
        if (s00 <= 1e-14 * cnt * g.h() * g.h()) out.rank_deficient = true;
        else ls = {s0u / s00, 0.0};
    } else {
        const double det = s00 * s11 - s01 * s01;
        if (det <= 1e-12 * scale * scale) {
            out.rank_deficient = true;
        } else {
            ls = {(s11 * s0u - s01 * s1u) / det, (s00 * s1u - s01 * s0u) / det};
        }
    }
    if (out.rank_deficient) {
        out.osc = base;
        return out;
    }

    const double at_ls = detrended(cols, ls);
    Vec2 best = at_ls <= base ? ls : Vec2{0.0, 0.0};
    double best_val = std::min(at_ls, base);
    const double width = 2.0 * best_val / cyl.radius + 1e-12;
    constexpr int kIters = 90;
    auto bracket = [&](int j) {
        return std::pair{std::min(0.0, ls[j]) - width, std::max(0.0, ls[j]) + width};
    };
    if (g.dim() == 1) {
        const auto [a, b] = bracket(0);
        const auto [l0, v] = golden_min([&](double l) { return detrended(cols, Vec2{l, 0.0}); }, a, b, kIters);
        if (v < best_val) {
            best_val = v;
            best = {l0, 0.0};
        }
    } else {
        const auto [a0, b0] = bracket(0);
        const auto [a1, b1] = bracket(1);
        double inner_arg = 0.0;
        auto profile = [&](double l0) {
            const auto [l1, v] = golden_min([&](double l) { return detrended(cols, Vec2{l0, l}); }, a1, b1, kIters);
            inner_arg = l1;
            return v;
        };
        const auto [l0, v] = golden_min(profile, a0, b0, kIters);
        profile(l0);
        if (v < best_val) {
            best_val = v;
            best = {l0, inner_arg};
        }
    }
    out.osc = best_val;
    out.plane = best;
    return out;
}

DyadicSequence dyadic_osc_sequence(const FieldSampler& u, const Vec2& center, double t0, double theta, int j_max) {
    const SpaceTimeGrid& g = u.grid();
    const auto cs = g.node_at(center);
    const auto ck = g.slice_at(t0);
    if (!cs || !ck) fail(ErrorKind::Precondition, "dyadic_osc_sequence: center is not a grid node");
    require(j_max >= 0, "dyadic_osc_sequence: j_max must be >= 0");
    DyadicSequence out;
    const double floor = 4.0 * g.h();
    const double uc = u(*cs, *ck);
    double min_all = std::numeric_limits<double>::infinity();
    for (int j = 0; j <= j_max; ++j) {
        const double r = std::ldexp(1.0, -j);
        if (r < floor * (1.0 - 1e-12)) {
            out.truncated = true;
            break;
        }
        const IntrinsicCylinder cyl{center, t0, r, theta};
        double sup = -std::numeric_limits<double>::infinity();
        for (const NodeRef& n : domain_nodes(g, cyl)) {
            const double v = u(n.space, n.time);
            sup = std::max(sup, v - uc);
            if (j == 0) min_all = std::min(min_all, v);
        }
        out.radii.push_back(r);
        out.values.push_back(sup);
    }
    out.center_is_minimum = std::isfinite(min_all) && uc <= min_all;
    return out;
}

namespace {


std::vector<NodeRef> seminorm_nodes(const SpaceTimeGrid& g, const SeminormOptions& opts, bool interior_only) {
    std::vector<NodeRef> nodes;
    auto keep = [&](std::size_t s) { return interior_only ? g.is_interior(s) : g.in_domain(s); };
    if (opts.region) {
        for (const NodeRef& n : cylinder_nodes(g, *opts.region))
            if (keep(n.space) && (!opts.slice || n.time == *opts.slice)) nodes.push_back(n);
    } else {
        for (std::size_t k = 0; k < g.time_slices(); ++k) {
            if (opts.slice && k != *opts.slice) continue;
            for (std::size_t s = 0; s < g.spatial_size(); ++s)
                if (keep(s)) nodes.push_back({s, k});
        }
    }
    return nodes;
}

// Visits node pairs (i, j) by position in `nodes`; full enumeration when affordable,
// otherwise pairs at dyadic lattice offsets in space and time.
template <typename Visit>
void for_each_pair(const SpaceTimeGrid& g, const std::vector<NodeRef>& nodes, std::size_t budget, Visit&& visit) {
    const std::size_t n = nodes.size();
    if (n < 2) return;
    if (n * (n - 1) / 2 <= budget) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) visit(i, j);
        return;
    }
    const std::size_t ns = g.spatial_size();
    std::vector<long> pos(ns * g.time_slices(), -1);
    for (std::size_t i = 0; i < n; ++i) pos[nodes[i].time * ns + nodes[i].space] = static_cast<long>(i);

    struct Offset {
        long di, dj, dk;
    };
    std::vector<Offset> offs;
    std::vector<std::pair<long, long>> dirs = {{1, 0}};
    if (g.dim() == 2) dirs = {{1, 0}, {0, 1}, {1, 1}, {1, -1}};
    std::vector<long> space_shells{0};
    for (long l = 1; l < static_cast<long>(g.nodes_per_axis()); l *= 2) space_shells.push_back(l);
    std::vector<long> time_shells{0};
    for (long l = 1; l < static_cast<long>(g.time_slices()); l *= 2) time_shells.push_back(l);
    for (long sl : space_shells) {
        for (long tl : time_shells) {
            if (sl == 0 && tl == 0) continue;
            if (sl == 0) {
                offs.push_back({0, 0, tl});
                continue;
            }
            for (auto [a, b] : dirs) {
                offs.push_back({a * sl, b * sl, tl});
                if (tl != 0) offs.push_back({-a * sl, -b * sl, tl});
            }
        }
    }
    const std::size_t per_node = std::max<std::size_t>(1, offs.size());
    const std::size_t stride = std::max<std::size_t>(1, (n * per_node + budget - 1) / budget);
    const long na = static_cast<long>(g.nodes_per_axis());
    const long nt = static_cast<long>(g.time_slices());
    for (std::size_t i = 0; i < n; i += stride) {
        const long ii = static_cast<long>(g.axis_index(nodes[i].space, 0));
        const long jj = g.dim() == 2 ? static_cast<long>(g.axis_index(nodes[i].space, 1)) : 0;
        const long kk = static_cast<long>(nodes[i].time);
        for (const Offset& o : offs) {
            const long i2 = ii + o.di;
            const long j2 = jj + o.dj;
            const long k2 = kk + o.dk;
            if (i2 < 0 || i2 >= na || k2 < 0 || k2 >= nt) continue;
            if (g.dim() == 2 && (j2 < 0 || j2 >= na)) continue;
            const std::size_t s2 = g.flat(static_cast<std::size_t>(i2), static_cast<std::size_t>(j2));
            const long p = pos[static_cast<std::size_t>(k2) * ns + s2];
            if (p >= 0) visit(i, static_cast<std::size_t>(p));
        }
    }
}

double parabolic_distance(const SpaceTimeGrid& g, const NodeRef& a, const NodeRef& b, double alpha) {
    const double dx = norm(g.point(a.space) - g.point(b.space));
    const double dt = std::abs(g.time(a.time) - g.time(b.time));
    return std::pow(dx, alpha) + std::pow(dt, 0.5 * alpha);
}

Vec2 central_gradient(const FieldSampler& u, std::size_t s, std::size_t k) {
    const SpaceTimeGrid& g = u.grid();
    Vec2 out{0.0, 0.0};
    for (int axis = 0; axis < g.dim(); ++axis) {
        const std::size_t st = g.stride(axis);
        out[axis] = (u(s + st, k) - u(s - st, k)) / (2.0 * g.h());
    }
    return out;
}

}  // namespace

double holder_seminorm(const FieldSampler& u, double alpha, const SeminormOptions& opts) {
    require(alpha > 0.0 && alpha <= 1.0, "holder_seminorm: alpha must lie in (0, 1]");
    const SpaceTimeGrid& g = u.grid();
    const auto nodes = seminorm_nodes(g, opts, false);
    std::vector<double> vals(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) vals[i] = u(nodes[i].space, nodes[i].time);
    double best = 0.0;
    for_each_pair(g, nodes, opts.budget, [&](std::size_t i, std::size_t j) {
        const double d = parabolic_distance(g, nodes[i], nodes[j], alpha);
        if (d > 0.0) best = std::max(best, std::abs(vals[i] - vals[j]) / d);
    });
    return best;
}

double time_holder_seminorm(const FieldSampler& u, double gamma, const SeminormOptions& opts) {
    require(gamma > 0.0 && gamma <= 1.0, "time_holder_seminorm: exponent must lie in (0, 1]");
    const SpaceTimeGrid& g = u.grid();
    const auto nodes = seminorm_nodes(g, opts, false);
    // group by spatial node; all time pairs within a column
    std::vector<std::vector<std::size_t>> columns(g.spatial_size());
    for (std::size_t i = 0; i < nodes.size(); ++i) columns[nodes[i].space].push_back(nodes[i].time);
    double best = 0.0;
    std::size_t visited = 0;
    for (std::size_t s = 0; s < columns.size(); ++s) {
        const auto& col = columns[s];
        for (std::size_t a = 0; a < col.size() && visited < opts.budget; ++a) {
            const double ua = u(s, col[a]);
            for (std::size_t b = a + 1; b < col.size(); ++b, ++visited) {
                const double dt = std::abs(g.time(col[a]) - g.time(col[b]));
                best = std::max(best, std::abs(ua - u(s, col[b])) / std::pow(dt, gamma));
            }
        }
    }
    return best;
}

double gradient_holder_seminorm(const FieldSampler& u, double alpha, const SeminormOptions& opts) {
    require(alpha > 0.0 && alpha <= 1.0, "gradient_holder_seminorm: alpha must lie in (0, 1]");
    const SpaceTimeGrid& g = u.grid();
    const auto nodes = seminorm_nodes(g, opts, true);
    std::vector<Vec2> grads(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) grads[i] = central_gradient(u, nodes[i].space, nodes[i].time);
    double best = 0.0;
    for_each_pair(g, nodes, opts.budget, [&](std::size_t i, std::size_t j) {
        const double d = parabolic_distance(g, nodes[i], nodes[j], alpha);
        if (d > 0.0) best = std::max(best, norm(grads[i] - grads[j]) / d);
    });
    return best;
}

std::vector<std::size_t> critical_set(const FieldSampler& u, std::size_t slice, double tol) {
    const SpaceTimeGrid& g = u.grid();
    require(slice < g.time_slices(), "critical_set: slice out of range");
    require(tol > 0.0, "critical_set: tol must be positive");
    std::vector<std::size_t> out;
    for (std::size_t s : g.interior_nodes())
        if (norm(central_gradient(u, s, slice)) <= tol) out.push_back(s);
    return out;
}

NondegeneracyProfile nondegeneracy_profile(const FieldSampler& u, const Vec2& center, double t0, double theta,
                                           std::span<const double> radii) {
    const SpaceTimeGrid& g = u.grid();
    const auto cs = g.node_at(center);
    const auto ck = g.slice_at(t0);
    if (!cs || !ck) fail(ErrorKind::Precondition, "nondegeneracy_profile: center is not a grid node");
    const double uc = u(*cs, *ck);

    bool is_min = true;
    bool is_max = true;
    bool strict = false;
    const long jr = g.dim() == 2 ? 1 : 0;
    for (long dj = -jr; dj <= jr; ++dj) {
        for (long di = -1; di <= 1; ++di) {
            if (di == 0 && dj == 0) continue;
            const long i = static_cast<long>(g.axis_index(*cs, 0)) + di;
            const long j = (g.dim() == 2 ? static_cast<long>(g.axis_index(*cs, 1)) : 0) + dj;
            if (i < 0 || j < 0 || i >= static_cast<long>(g.nodes_per_axis()) ||
                j >= static_cast<long>(g.dim() == 2 ? g.nodes_per_axis() : 1)) {
                continue;
            }
            const double v = u(g.flat(static_cast<std::size_t>(i), static_cast<std::size_t>(j)), *ck);
            if (v < uc) is_min = false;
            if (v > uc) is_max = false;
            if (v != uc) strict = true;
        }
    }
    NondegeneracyProfile out;
    out.extremum = !strict ? ExtremumKind::None : is_min ? ExtremumKind::Minimum
                                                 : is_max ? ExtremumKind::Maximum
                                                          : ExtremumKind::None;
    const double sign = out.extremum == ExtremumKind::Maximum ? -1.0 : 1.0;
    if (out.extremum == ExtremumKind::None) out.note = "center is not a strict spatial extremum of its slice";
    if (out.extremum == ExtremumKind::Maximum) out.note = "local maximum: profile uses u(center) - u";

    for (double r : radii) {
        const IntrinsicCylinder cyl{center, t0, r, theta};
        double sup = -std::numeric_limits<double>::infinity();
        for (const NodeRef& n : parabolic_boundary_nodes(g, cyl)) {
            if (!g.in_domain(n.space)) continue;
            sup = std::max(sup, sign * (u(n.space, n.time) - uc));
        }
        out.radii.push_back(r);
        out.boundary_sup.push_back(std::isfinite(sup) ? sup : 0.0);
    }
    try {
        out.fit = fit_growth_exponent(out.radii, out.boundary_sup, 4.0 * g.h());
    } catch (const Error& e) {
        out.degenerate = true;
        if (!out.note.empty()) out.note += "; ";
        out.note += e.what();
    }
    return out;
}

}  // namespace degpar
