#include "degpar/grid.hpp"

#include <cmath>
#include <sstream>

#include "degpar/error.hpp"

namespace degpar {

namespace {

// Relative slack for "exactly on a node / on the mask boundary" decisions.
constexpr double kSnap = 1e-9;

}  // namespace

SpaceTimeGrid SpaceTimeGrid::make(const GridSpec& spec) { return SpaceTimeGrid(spec); }

SpaceTimeGrid make_grid(int dim, double radius, double h, double dt, double t_begin, double t_end) {
    GridSpec spec;
    spec.dim = dim;
    spec.radius = radius;
    spec.h = h;
    spec.dt = dt;
    spec.t_begin = t_begin;
    spec.t_end = t_end;
    return SpaceTimeGrid::make(spec);
}

SpaceTimeGrid::SpaceTimeGrid(const GridSpec& spec) : spec_(spec) {
    if (spec.dim != 1 && spec.dim != 2) fail(ErrorKind::Precondition, "grid dimension must be 1 or 2");
    if (!(spec.h > 0.0) || !std::isfinite(spec.h)) fail(ErrorKind::Precondition, "grid step h must be positive");
    if (!(spec.dt > 0.0) || !std::isfinite(spec.dt)) fail(ErrorKind::Precondition, "time step dt must be positive");
    if (!(spec.radius > 0.0)) fail(ErrorKind::Precondition, "grid radius must be positive");
    if (!(spec.t_begin < spec.t_end)) fail(ErrorKind::Precondition, "need t_begin < t_end");
    if (!spec_.domain_radius) spec_.domain_radius = spec.radius;
    if (!(*spec_.domain_radius > 0.0)) fail(ErrorKind::Precondition, "domain radius must be positive");

    const double axis_steps = std::floor(2.0 * spec.radius / spec.h + kSnap);
    const double time_steps = std::floor((spec.t_end - spec.t_begin) / spec.dt + kSnap);
    const double n_axis = axis_steps + 1.0;
    const double n_space = spec.dim == 1 ? n_axis : n_axis * n_axis;
    const double n_time = time_steps + 1.0;
    if (n_space * n_time > static_cast<double>(spec.max_values)) {
        std::ostringstream os;
        os << "grid needs " << n_space * n_time << " values, above the configured cap " << spec.max_values;
        fail(ErrorKind::Precondition, os.str());
    }
    n_axis_ = static_cast<std::size_t>(n_axis);
    n_space_ = static_cast<std::size_t>(n_space);
    n_time_ = static_cast<std::size_t>(n_time);

    const double rmask = *spec_.domain_radius * (1.0 + kSnap) + kSnap * spec.h;
    std::vector<std::uint8_t> inside(n_space_, 0);
    for (std::size_t s = 0; s < n_space_; ++s) inside[s] = norm(point(s)) <= rmask ? 1 : 0;

    auto classes = std::make_shared<std::vector<std::uint8_t>>(n_space_, 0);
    auto interior = std::make_shared<std::vector<std::size_t>>();
    auto boundary = std::make_shared<std::vector<std::size_t>>();
    const auto n = static_cast<long>(n_axis_);
    for (std::size_t s = 0; s < n_space_; ++s) {
        if (!inside[s]) continue;
        const long i = static_cast<long>(axis_index(s, 0));
        const long j = spec.dim == 2 ? static_cast<long>(axis_index(s, 1)) : 0;
        bool full = true;
        const long jlo = spec.dim == 2 ? -1 : 0;
        const long jhi = spec.dim == 2 ? 1 : 0;
        for (long dj = jlo; dj <= jhi && full; ++dj) {
            for (long di = -1; di <= 1 && full; ++di) {
                const long ii = i + di;
                const long jj = j + dj;
                if (ii < 0 || ii >= n || jj < 0 || (spec.dim == 2 && jj >= n)) {
                    full = false;
                } else if (!inside[static_cast<std::size_t>(ii + n * jj)]) {
                    full = false;
                }
            }
        }
        (*classes)[s] = static_cast<std::uint8_t>(full ? NodeClass::Interior : NodeClass::Boundary);
        (full ? interior : boundary)->push_back(s);
    }
    classes_ = std::move(classes);
    interior_ = std::move(interior);
    boundary_ = std::move(boundary);
}

Vec2 SpaceTimeGrid::point(std::size_t s) const {
    if (spec_.dim == 1) return {coord(s), 0.0};
    return {coord(s % n_axis_), coord(s / n_axis_)};
}

std::optional<std::size_t> SpaceTimeGrid::neighbor(std::size_t s, int axis, int offset) const {
    if (axis >= spec_.dim) return std::nullopt;
    const long idx = static_cast<long>(axis_index(s, axis)) + offset;
    if (idx < 0 || idx >= static_cast<long>(n_axis_)) return std::nullopt;
    const long step = static_cast<long>(stride(axis));
    return static_cast<std::size_t>(static_cast<long>(s) + offset * step);
}

std::optional<std::size_t> SpaceTimeGrid::node_at(const Vec2& x) const {
    std::size_t idx[2] = {0, 0};
    for (int a = 0; a < spec_.dim; ++a) {
        const double f = (x[a] + spec_.radius) / spec_.h;
        const double r = std::round(f);
        if (std::abs(f - r) > 1e-9 || r < 0.0 || r >= static_cast<double>(n_axis_)) return std::nullopt;
        idx[a] = static_cast<std::size_t>(r);
    }
    if (spec_.dim == 1 && x[1] != 0.0) return std::nullopt;
    return flat(idx[0], idx[1]);
}

std::optional<std::size_t> SpaceTimeGrid::slice_at(double t) const {
    const double f = (t - spec_.t_begin) / spec_.dt;
    const double r = std::round(f);
    if (std::abs(f - r) > 1e-9 || r < 0.0 || r >= static_cast<double>(n_time_)) return std::nullopt;
    return static_cast<std::size_t>(r);
}

bool SpaceTimeGrid::same_layout(const SpaceTimeGrid& o) const {
    return spec_.dim == o.spec_.dim && n_axis_ == o.n_axis_ && n_time_ == o.n_time_ && spec_.h == o.spec_.h &&
           spec_.dt == o.spec_.dt && spec_.radius == o.spec_.radius && spec_.t_begin == o.spec_.t_begin &&
           *spec_.domain_radius == *o.spec_.domain_radius;
}

std::string SpaceTimeGrid::describe() const {
    std::ostringstream os;
    os << "dim=" << spec_.dim << " R=" << spec_.radius << " h=" << spec_.h << " nodes/axis=" << n_axis_
       << " dt=" << spec_.dt << " slices=" << n_time_ << " t=[" << spec_.t_begin << "," << time(n_time_ - 1)
       << "]";
    return os.str();
}

}  // namespace degpar
