#include "degpar/fdsolver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "degpar/error.hpp"
#include "degpar/parallel.hpp"

namespace degpar {

DataSource::DataSource(SpaceTimeFunction fn, bool time_independent)
    : data_(std::move(fn)), time_independent_(time_independent) {}

DataSource::DataSource(MaskedField table) : data_(std::move(table)) {}

bool DataSource::covers(std::size_t s, std::size_t k) const {
    if (const auto* tab = std::get_if<MaskedField>(&data_)) return tab->present(s, k);
    return true;
}

double DataSource::at(const SpaceTimeGrid& grid, std::size_t s, double t) const {
    if (const auto* fn = std::get_if<SpaceTimeFunction>(&data_)) return (*fn)(grid.point(s), t);
    const auto& tab = std::get<MaskedField>(data_);
    const SpaceTimeGrid& tg = tab.grid();
    const double pos = (t - tg.t_begin()) / tg.dt();
    const double last = static_cast<double>(tg.time_slices() - 1);
    auto missing = [&](std::size_t k) {
        std::ostringstream os;
        const Vec2 x = tg.point(s);
        os << "tabulated data missing at x=(" << x[0] << "," << x[1] << "), t=" << tg.time(k);
        fail(ErrorKind::Precondition, os.str());
    };
    if (pos < -1e-9 || pos > last + 1e-9) fail(ErrorKind::Precondition, "tabulated data queried outside its time range");
    const double r = std::round(pos);
    if (std::abs(pos - r) < 1e-9) {
        const auto k = static_cast<std::size_t>(r);
        if (!tab.present(s, k)) missing(k);
        return tab.at(s, k);
    }
    const auto k0 = static_cast<std::size_t>(std::floor(pos));
    const double w = pos - static_cast<double>(k0);
    if (!tab.present(s, k0)) missing(k0);
    if (!tab.present(s, k0 + 1)) missing(k0 + 1);
    return (1.0 - w) * tab.at(s, k0) + w * tab.at(s, k0 + 1);
}

void SolveConfig::validate() const {
    if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) fail(ErrorKind::Config, "cfl_safety must lie in (0, 1]");
    if (grad_cap && !(*grad_cap > 0.0)) fail(ErrorKind::Config, "grad_cap must be positive");
    if (max_steps == 0) fail(ErrorKind::Config, "max_steps must be positive");
    if (!(divergence_cap > 0.0)) fail(ErrorKind::Config, "divergence_cap must be positive");
    if (reg) reg->validate();
}

double degeneracy_bound(const Exponents& exps, double a_plus, double grad_cap, double epsilon) {
    const double m2 = grad_cap * grad_cap + epsilon * epsilon;
    return std::pow(m2, 0.5 * exps.p_tilde()) + a_plus * std::pow(m2, 0.5 * exps.q_tilde());
}

double cfl_dt(int dim, double h, const Exponents& exps, double a_plus, const SolveConfig& config, double grad_cap) {
    require(h > 0.0 && grad_cap > 0.0 && a_plus >= 0.0, "cfl_dt: inputs must be positive");
    const double eps = config.regularization(h).epsilon;
    const double hmax = degeneracy_bound(exps, a_plus, grad_cap, eps);
    return config.cfl_safety * h * h / (2.0 * dim * hmax * std::max(1.0, exps.p() - 1.0));
}

namespace {

// Interior update into `next`; returns the largest effective |∇u|.
double step_into(const SliceOperator& op, const StepInput& in, std::span<double> next, unsigned threads) {
    const SpaceTimeGrid& g = op.grid();
    const auto& nodes = g.interior_nodes();
    const unsigned nchunks = std::max(1u, threads);
    std::vector<double> chunk_max(nchunks, 0.0);
    std::vector<long> chunk_bad(nchunks, -1);
    const std::size_t per = std::max<std::size_t>(1, (nodes.size() + nchunks - 1) / nchunks);
    parallel_for(nodes.size(), threads, [&](std::size_t b, std::size_t e) {
        double mx = 0.0;
        long bad = -1;
        for (std::size_t i = b; i < e; ++i) {
            const std::size_t s = nodes[i];
            const auto smp = op.at(in.u, s, in.t);
            const double v = in.u[s] + in.dt * (smp.value + in.f[s]);
            next[s] = v;
            mx = std::max(mx, smp.magnitude);
            if (!std::isfinite(v) && bad < 0) bad = static_cast<long>(s);
        }
        const std::size_t c = std::min<std::size_t>(b / per, nchunks - 1);
        chunk_max[c] = mx;
        chunk_bad[c] = bad;
    });
    for (long bad : chunk_bad) {
        if (bad < 0) continue;
        const auto s = static_cast<std::size_t>(bad);
        const Vec2 x = g.point(s);
        std::ostringstream os;
        os << "non-finite update at node x=(" << x[0] << "," << x[1] << "), t=" << in.t + in.dt
           << "; local |grad u| = " << op.at(in.u, s, in.t).magnitude;
        fail(ErrorKind::Numerical, os.str());
    }
    return *std::max_element(chunk_max.begin(), chunk_max.end());
}

}  // namespace

std::vector<double> step(const SliceOperator& op, const StepInput& in, unsigned threads, double* max_magnitude) {
    const SpaceTimeGrid& g = op.grid();
    require(in.u.size() == g.spatial_size() && in.f.size() == g.spatial_size() &&
                in.boundary_next.size() == g.spatial_size(),
            "step: slice sizes do not match the grid");
    require(in.dt > 0.0, "step: dt must be positive");
    std::vector<double> next(in.u.begin(), in.u.end());
    const double mx = step_into(op, in, next, threads);
    for (std::size_t s : g.boundary_nodes()) next[s] = in.boundary_next[s];
    if (max_magnitude) *max_magnitude = mx;
    return next;
}

double data_lipschitz(const DataSource& g, const SpaceTimeGrid& grid) {
    const double t = grid.t_begin();
    std::vector<double> v(grid.spatial_size(), 0.0);
    for (std::size_t s = 0; s < grid.spatial_size(); ++s)
        if (grid.in_domain(s)) v[s] = g.at(grid, s, t);
    double lip = 0.0;
    for (std::size_t s = 0; s < grid.spatial_size(); ++s) {
        if (!grid.in_domain(s)) continue;
        for (int axis = 0; axis < grid.dim(); ++axis) {
            auto nb = grid.neighbor(s, axis, 1);
            if (nb && grid.in_domain(*nb)) lip = std::max(lip, std::abs(v[*nb] - v[s]) / grid.h());
        }
    }
    return lip;
}

SolveResult solve_cauchy_dirichlet(const DataSource& g, const DataSource& f, const CoefficientField& coeff,
                                   const Exponents& exps, const SpaceTimeGrid& grid, const SolveConfig& config) {
    config.validate();
    coeff.validate(grid);
    const std::size_t ns = grid.spatial_size();
    const std::size_t nt = grid.time_slices();
    const RegularizationPolicy reg = config.regularization(grid.h());
    const SliceOperator op(grid, coeff, exps, reg);

    // Parabolic boundary coverage for tabulated data.
    if (g.is_table()) {
        for (std::size_t s = 0; s < ns; ++s)
            if (grid.in_domain(s) && !g.covers(s, 0)) g.at(grid, s, grid.t_begin());
        for (std::size_t k = 0; k < nt; ++k)
            for (std::size_t s : grid.boundary_nodes())
                if (!g.covers(s, k)) g.at(grid, s, grid.time(k));
    }

    SolveResult res{.u = SpaceTimeField::constant(grid, 0.0)};
    res.data_lipschitz = data_lipschitz(g, grid);
    double cap = config.grad_cap ? *config.grad_cap : 2.0 * res.data_lipschitz + 1.0;
    res.initial_grad_cap = cap;
    res.min_dt = grid.dt();

    std::vector<double> out(ns * nt, 0.0);
    std::vector<double> cur(ns, 0.0);
    for (std::size_t s = 0; s < ns; ++s) {
        if (grid.in_domain(s) || g.covers(s, 0)) cur[s] = g.at(grid, s, grid.t_begin());
    }
    std::copy(cur.begin(), cur.end(), out.begin());

    std::vector<double> next(ns, 0.0);
    std::vector<double> fbuf(ns, 0.0);
    std::vector<double> bnext(ns, 0.0);
    auto fill_source = [&](double t) {
        for (std::size_t s : grid.interior_nodes()) fbuf[s] = f.at(grid, s, t);
    };
    if (f.time_independent()) fill_source(grid.t_begin());

    auto admissible_dt = [&]() { return cfl_dt(grid.dim(), grid.h(), exps, coeff.a_plus(), config, cap); };
    if (!config.auto_clamp && grid.dt() > admissible_dt() * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "CFL violation: grid dt=" << grid.dt() << " exceeds the stable bound " << admissible_dt()
           << " (grad_cap=" << cap << "); enable auto-clamp or reduce dt";
        fail(ErrorKind::Numerical, os.str());
    }

    for (std::size_t k = 0; k + 1 < nt; ++k) {
        const double t_target = grid.time(k + 1);
        double t = grid.time(k);
        while (t < t_target - 1e-12 * grid.dt()) {
            const double remaining = t_target - t;
            const auto nsub = static_cast<double>(std::ceil(remaining / admissible_dt() - 1e-9));
            const double dt = remaining / std::max(1.0, nsub);
            if (!f.time_independent()) fill_source(t);
            for (std::size_t s : grid.boundary_nodes()) bnext[s] = g.at(grid, s, t + dt);

            const StepInput in{cur, t, dt, fbuf, bnext};
            const double realized = step_into(op, in, next, config.threads);
            res.max_gradient = std::max(res.max_gradient, realized);
            if (realized > cap) {
                if (!config.auto_clamp) {
                    std::ostringstream os;
                    os << "CFL audit failure at t=" << t << ": realized |grad u| = " << realized
                       << " exceeds grad_cap = " << cap;
                    fail(ErrorKind::Numerical, os.str());
                }
                cap = 2.0 * realized + 1.0;
                res.cap_raised = true;
                continue;  // redo this step with the smaller dt
            }
            for (std::size_t s : grid.boundary_nodes()) next[s] = bnext[s];
            for (std::size_t s : grid.interior_nodes()) {
                if (std::abs(next[s]) > config.divergence_cap) {
                    const Vec2 x = grid.point(s);
                    std::ostringstream os;
                    os << "divergence: |u| = " << std::abs(next[s]) << " at x=(" << x[0] << "," << x[1]
                       << "), t=" << t + dt << " exceeds cap " << config.divergence_cap;
                    fail(ErrorKind::Numerical, os.str());
                }
            }
            std::swap(cur, next);
            // exterior nodes are not evolved; keep next consistent for the copy-through
            t = (nsub <= 1.0) ? t_target : t + dt;
            res.min_dt = std::min(res.min_dt, dt);
            res.max_dt = std::max(res.max_dt, dt);
            if (++res.steps > config.max_steps) {
                fail(ErrorKind::Numerical, "step budget exhausted (solver.max_steps)");
            }
        }
        double* slice = out.data() + (k + 1) * ns;
        for (std::size_t s = 0; s < ns; ++s) {
            if (grid.in_domain(s)) {
                slice[s] = cur[s];
            } else if (g.covers(s, k + 1)) {
                slice[s] = g.at(grid, s, t_target);
            }
        }
    }
    res.grad_cap = cap;
    res.u = SpaceTimeField(grid, std::move(out));
    return res;
}

}  // namespace degpar
