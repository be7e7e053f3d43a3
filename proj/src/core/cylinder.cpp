#include "degpar/cylinder.hpp"

#include <algorithm>
#include <cmath>

#include "degpar/error.hpp"

namespace degpar {

namespace {

struct IndexRange {
    long lo = 0;
    long hi = -1;
};

IndexRange axis_range(const SpaceTimeGrid& g, double c, double r) {
    const double tol = 1e-9;
    IndexRange out;
    out.lo = std::max(0L, static_cast<long>(std::ceil((c - r + g.radius()) / g.h() - tol)));
    out.hi = std::min(static_cast<long>(g.nodes_per_axis()) - 1,
                      static_cast<long>(std::floor((c + r + g.radius()) / g.h() + tol)));
    return out;
}

// Slices with t in (t0 - depth, t0], returned as [first, last] (first > last when empty).
std::pair<long, long> slice_range(const SpaceTimeGrid& g, const IntrinsicCylinder& cyl) {
    const double tol = 1e-9 * g.dt();
    const double bottom = cyl.t0 - cyl.depth();
    long last = static_cast<long>(std::floor((cyl.t0 - g.t_begin() + tol) / g.dt()));
    long first = static_cast<long>(std::floor((bottom - g.t_begin() + tol) / g.dt())) + 1;
    first = std::max(first, 0L);
    last = std::min(last, static_cast<long>(g.time_slices()) - 1);
    return {first, last};
}

template <typename Pred>
std::vector<std::size_t> spatial_section(const SpaceTimeGrid& g, const IntrinsicCylinder& cyl, Pred keep) {
    std::vector<std::size_t> out;
    const IndexRange ri = axis_range(g, cyl.center[0], cyl.radius);
    IndexRange rj;
    if (g.dim() == 2) {
        rj = axis_range(g, cyl.center[1], cyl.radius);
    } else {
        rj.lo = 0;
        rj.hi = 0;
    }
    for (long j = rj.lo; j <= rj.hi; ++j) {
        for (long i = ri.lo; i <= ri.hi; ++i) {
            const std::size_t s = g.flat(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
            const double d = norm(g.point(s) - cyl.center);
            if (keep(d)) out.push_back(s);
        }
    }
    return out;
}

}  // namespace

double IntrinsicCylinder::depth() const { return std::pow(radius, theta); }

void IntrinsicCylinder::validate() const {
    require(radius > 0.0 && std::isfinite(radius), "cylinder radius must be positive");
    require(theta > 1.0 && std::isfinite(theta), "cylinder theta must exceed 1");
}

std::vector<NodeRef> cylinder_nodes(const SpaceTimeGrid& g, const IntrinsicCylinder& cyl) {
    cyl.validate();
    const double rtol = cyl.radius * (1.0 + 1e-12) + 1e-12 * g.h();
    const auto section = spatial_section(g, cyl, [&](double d) { return d <= rtol; });
    const auto [first, last] = slice_range(g, cyl);
    std::vector<NodeRef> out;
    if (section.empty() || first > last) return out;
    out.reserve(section.size() * static_cast<std::size_t>(last - first + 1));
    for (long k = first; k <= last; ++k)
        for (std::size_t s : section) out.push_back({s, static_cast<std::size_t>(k)});
    return out;
}

std::vector<NodeRef> parabolic_boundary_nodes(const SpaceTimeGrid& g, const IntrinsicCylinder& cyl) {
    cyl.validate();
    const double rtol = cyl.radius * (1.0 + 1e-12) + 1e-12 * g.h();
    const double inner = cyl.radius - g.h();
    const auto section = spatial_section(g, cyl, [&](double d) { return d <= rtol; });
    const auto [first, last] = slice_range(g, cyl);
    std::vector<NodeRef> out;
    if (section.empty() || first > last) return out;
    std::vector<std::size_t> shell;
    for (std::size_t s : section)
        if (norm(g.point(s) - cyl.center) > inner * (1.0 + 1e-12)) shell.push_back(s);
    for (std::size_t s : section) out.push_back({s, static_cast<std::size_t>(first)});
    for (long k = first + 1; k <= last; ++k)
        for (std::size_t s : shell) out.push_back({s, static_cast<std::size_t>(k)});
    std::sort(out.begin(), out.end(), [](const NodeRef& a, const NodeRef& b) {
        return a.time != b.time ? a.time < b.time : a.space < b.space;
    });
    return out;
}

}  // namespace degpar
