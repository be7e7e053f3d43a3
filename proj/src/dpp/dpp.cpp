#include "degpar/dpp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "degpar/error.hpp"

namespace degpar {

DppWeights dpp_weights(double p, int n) {
    require(p > 1.0, "dpp_weights: need p > 1");
    require(n >= 1, "dpp_weights: need n >= 1");
    const double denom = p + static_cast<double>(n);
    return {(p - 2.0) / denom, (2.0 + static_cast<double>(n)) / denom};
}

void DppConfig::validate() const {
    if (!(eps_game > 0.0) || !std::isfinite(eps_game)) fail(ErrorKind::Config, "dpp.eps must be positive");
    if (!(p > 1.0)) fail(ErrorKind::Config, "dpp.p must exceed 1");
    if (n < 1 || n > 2) fail(ErrorKind::Config, "dpp.n must be 1 or 2");
}

BallStencil::BallStencil(const SpaceTimeGrid& grid, double eps) {
    require(eps > 0.0, "ball radius must be positive");
    const double h = grid.h();
    reach_ = static_cast<long>(std::floor(eps / h + 1e-9));
    const double lim = eps * (1.0 + 1e-12);
    const long jr = grid.dim() == 2 ? reach_ : 0;
    const long n = static_cast<long>(grid.nodes_per_axis());
    for (long dj = -jr; dj <= jr; ++dj) {
        for (long di = -reach_; di <= reach_; ++di) {
            if (std::hypot(static_cast<double>(di) * h, static_cast<double>(dj) * h) <= lim) {
                offsets_.emplace_back(di, dj);
                flat_.push_back(di + n * dj);
            }
        }
    }
}

namespace {

void require_collar(const SpaceTimeGrid& grid, double eps) {
    if (grid.radius() + 1e-9 * grid.h() < grid.domain_radius() + eps) {
        std::ostringstream os;
        os << "grid radius " << grid.radius() << " does not contain the eps-collar around the domain (need "
           << grid.domain_radius() + eps << ")";
        fail(ErrorKind::Precondition, os.str());
    }
}

bool in_collar(const SpaceTimeGrid& grid, std::size_t s, double eps) {
    const double r = norm(grid.point(s));
    const double R = grid.domain_radius();
    const double width = std::max(eps, grid.h());
    return !grid.in_domain(s) && r - R <= width * (1.0 + 1e-12);
}

}  // namespace

std::vector<NodeRef> boundary_strip(const SpaceTimeGrid& grid, double eps_game) {
    require(eps_game > 0.0, "boundary_strip: eps must be positive");
    require_collar(grid, eps_game);
    std::vector<NodeRef> out;
    std::vector<std::size_t> collar;
    for (std::size_t s = 0; s < grid.spatial_size(); ++s)
        if (in_collar(grid, s, eps_game)) collar.push_back(s);
    // Initial slab (-ε²/2, 0]: slices with t in that window, which for a grid starting at 0 is slice 0.
    const double slab_bottom = -0.5 * eps_game * eps_game;
    for (std::size_t k = 0; k < grid.time_slices(); ++k) {
        const double t = grid.time(k);
        if (t <= slab_bottom) continue;
        const bool in_slab = t <= 1e-12;
        for (std::size_t s = 0; s < grid.spatial_size(); ++s) {
            if ((in_slab && grid.in_domain(s)) || in_collar(grid, s, eps_game)) out.push_back({s, k});
        }
    }
    return out;
}

double dpp_update(std::span<const double> prev, const SpaceTimeGrid& grid, std::size_t node,
                  const BallStencil& ball, const DppWeights& w) {
    const auto& offs = ball.flat_offsets();
    if (offs.empty()) fail(ErrorKind::Precondition, "dpp_update: empty ball sample");
    // The ball must fit inside the grid.
    const long r = ball.reach();
    for (int axis = 0; axis < grid.dim(); ++axis) {
        const long i = static_cast<long>(grid.axis_index(node, axis));
        if (i - r < 0 || i + r >= static_cast<long>(grid.nodes_per_axis())) {
            fail(ErrorKind::Precondition, "dpp_update: ball leaves the grid");
        }
    }
    double mx = -std::numeric_limits<double>::infinity();
    double mn = std::numeric_limits<double>::infinity();
    double sum = 0.0;
    const long base = static_cast<long>(node);
    for (long o : offs) {
        const double v = prev[static_cast<std::size_t>(base + o)];
        mx = std::max(mx, v);
        mn = std::min(mn, v);
        sum += v;
    }
    return 0.5 * w.alpha * (mx + mn) + w.beta * (sum / static_cast<double>(offs.size()));
}

double dpp_update(const ScalarField& prev, std::size_t node, double eps_game, const DppWeights& w) {
    return dpp_update(prev.values(), prev.grid(), node, BallStencil(prev.grid(), eps_game), w);
}

DppResult dpp_solve(const DataSource& g, const SpaceTimeGrid& grid, const DppConfig& config) {
    config.validate();
    const double clock = config.time_step();
    if (std::abs(grid.dt() - clock) > 1e-9 * clock) {
        std::ostringstream os;
        os << "dpp grid dt=" << grid.dt() << " must equal eps^2/2=" << clock;
        fail(ErrorKind::Precondition, os.str());
    }
    if (config.n != grid.dim()) fail(ErrorKind::Config, "dpp.n must match the grid dimension");
    require_collar(grid, config.eps_game);

    DppResult res{.u = SpaceTimeField::constant(grid, 0.0)};
    if (config.p < 2.0) {
        res.warnings.push_back(
            "p < 2: the tug-of-war weight alpha is negative, the update is not monotone and no convergence is claimed");
    }
    const auto strip = boundary_strip(grid, config.eps_game);
    for (const NodeRef& nd : strip) {
        if (!g.covers(nd.space, nd.time)) {
            const Vec2 x = grid.point(nd.space);
            std::ostringstream os;
            os << "boundary data missing on the strip at x=(" << x[0] << "," << x[1] << "), t=" << grid.time(nd.time);
            fail(ErrorKind::Precondition, os.str());
        }
    }

    const std::size_t ns = grid.spatial_size();
    const std::size_t nt = grid.time_slices();
    const BallStencil ball(grid, config.eps_game);
    res.ball_size = ball.size();
    const DppWeights w = config.weights();

    std::vector<std::size_t> omega;
    std::vector<std::size_t> collar;
    std::vector<std::size_t> far;
    for (std::size_t s = 0; s < ns; ++s) {
        if (grid.in_domain(s)) {
            omega.push_back(s);
        } else if (in_collar(grid, s, config.eps_game)) {
            collar.push_back(s);
        } else {
            far.push_back(s);
        }
    }

    std::vector<double> out(ns * nt, 0.0);
    for (std::size_t s = 0; s < ns; ++s)
        if (g.covers(s, 0)) out[s] = g.at(grid, s, grid.t_begin());
    for (std::size_t k = 1; k < nt; ++k) {
        const double t = grid.time(k);
        std::span<const double> prev(out.data() + (k - 1) * ns, ns);
        double* cur = out.data() + k * ns;
        for (std::size_t s : omega) cur[s] = dpp_update(prev, grid, s, ball, w);
        for (std::size_t s : collar) cur[s] = g.at(grid, s, t);
        for (std::size_t s : far)
            if (g.covers(s, k)) cur[s] = g.at(grid, s, t);
    }
    res.u = SpaceTimeField(grid, std::move(out));
    return res;
}

TimeRemap dpp_time_remap(int n, double p, double diffusion, double offset) {
    require(diffusion > 0.0, "time remap needs a positive diffusion constant");
    return {1.0 / (diffusion * (static_cast<double>(n) + p)), offset};
}

}  // namespace degpar
