#include "degpar/compare.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <future>
#include <limits>
#include <random>
#include <sstream>

#include "degpar/error.hpp"

namespace degpar {

namespace {

std::string where(const SpaceTimeGrid& g, std::size_t s, std::size_t k) {
    std::ostringstream os;
    const Vec2 x = g.point(s);
    os << "x=(" << x[0];
    if (g.dim() == 2) os << "," << x[1];
    os << "), t=" << g.time(k);
    return os.str();
}

bool on_parabolic_boundary(const SpaceTimeGrid& g, std::size_t s, std::size_t k) {
    return k == 0 || !g.is_interior(s);
}

void check_ordered(const DataSource& g1, const DataSource& f1, const DataSource& g2, const DataSource& f2,
                   const SpaceTimeGrid& grid) {
    for (std::size_t k = 0; k < grid.time_slices(); ++k) {
        const double t = grid.time(k);
        for (std::size_t s = 0; s < grid.spatial_size(); ++s) {
            if (on_parabolic_boundary(grid, s, k) && g1.covers(s, k) && g2.covers(s, k)) {
                if (g1.at(grid, s, t) > g2.at(grid, s, t))
                    fail(ErrorKind::Precondition, "comparison_audit: boundary data not ordered (g1 > g2 at " +
                                                      where(grid, s, k) + ")");
            }
            if (grid.is_interior(s) && f1.at(grid, s, t) > f2.at(grid, s, t))
                fail(ErrorKind::Precondition,
                     "comparison_audit: sources not ordered (f1 > f2 at " + where(grid, s, k) + ")");
        }
    }
}

}  // namespace

std::pair<SolveResult, SolveResult> comparison_pair(const DataSource& g1, const DataSource& f1, const DataSource& g2,
                                                    const DataSource& f2, const CoefficientField& coeff,
                                                    const Exponents& exps, const SpaceTimeGrid& grid,
                                                    const SolveConfig& config) {
    check_ordered(g1, f1, g2, f2, grid);
    if (config.threads >= 2) {
        SolveConfig half = config;
        half.threads = std::max(1u, config.threads / 2);
        auto second = std::async(std::launch::async,
                                 [&] { return solve_cauchy_dirichlet(g2, f2, coeff, exps, grid, half); });
        SolveResult r1 = solve_cauchy_dirichlet(g1, f1, coeff, exps, grid, half);
        return {std::move(r1), second.get()};
    }
    SolveResult r1 = solve_cauchy_dirichlet(g1, f1, coeff, exps, grid, config);
    SolveResult r2 = solve_cauchy_dirichlet(g2, f2, coeff, exps, grid, config);
    return {std::move(r1), std::move(r2)};
}

ComparisonReport comparison_audit(const DataSource& g1, const DataSource& f1, const DataSource& g2,
                                  const DataSource& f2, const CoefficientField& coeff, const Exponents& exps,
                                  const SpaceTimeGrid& grid, const SolveConfig& config) {
    const auto [r1, r2] = comparison_pair(g1, f1, g2, f2, coeff, exps, grid, config);
    ComparisonReport rep;
    rep.steps = std::max(r1.steps, r2.steps);
    rep.tol = 10.0 * DBL_EPSILON * static_cast<double>(rep.steps);
    rep.violation = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < grid.time_slices(); ++k) {
        for (std::size_t s = 0; s < grid.spatial_size(); ++s) {
            if (!grid.in_domain(s)) continue;
            const double d = r1.u.at(s, k) - r2.u.at(s, k);
            ++rep.nodes;
            if (d > rep.violation) {
                rep.violation = d;
                rep.witness = {s, k};
            }
        }
    }
    rep.min_margin = -rep.violation;
    rep.pass = rep.violation <= rep.tol;
    return rep;
}

OrderedDataPair random_ordered_pair(std::uint64_t seed, double margin) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    struct Mode {
        double amp, k0, k1, phase;
    };
    auto modes = [&](int count, double amp) {
        std::vector<Mode> m;
        for (int i = 0; i < count; ++i)
            m.push_back({amp * unit(rng), 2.0 * unit(rng), 2.0 * unit(rng), 3.0 * unit(rng)});
        return m;
    };
    auto eval = [](const std::vector<Mode>& m, const Vec2& x) {
        double v = 0.0;
        for (const Mode& md : m) v += md.amp * std::sin(md.k0 * x[0] + md.k1 * x[1] + md.phase);
        return v;
    };
    const auto gm = modes(3, 0.5);
    const auto gbump = modes(2, 0.25);
    const auto fm = modes(2, 1.0);
    const auto fbump = modes(1, 0.5);
    const double trend = 0.5 * unit(rng);
    const double fbase = unit(rng);
    // 1 + sin(.) >= 0 keeps each bump non-negative.
    auto bump = [](const std::vector<Mode>& m, const Vec2& x) {
        double v = 0.0;
        for (const Mode& md : m) v += std::abs(md.amp) * (1.0 + std::sin(md.k0 * x[0] + md.k1 * x[1] + md.phase));
        return v;
    };
    OrderedDataPair out;
    out.g1 = [gm, trend, eval](const Vec2& x, double t) { return eval(gm, x) + trend * t; };
    out.g2 = [g1 = out.g1, gbump, bump, margin](const Vec2& x, double t) { return g1(x, t) + margin + bump(gbump, x); };
    out.f1 = [fm, fbase, eval](const Vec2& x, double) { return fbase + eval(fm, x); };
    out.f2 = [f1 = out.f1, fbump, bump, margin](const Vec2& x, double t) { return f1(x, t) + margin + bump(fbump, x); };
    return out;
}

BracketReport perron_bracket(const SpaceTimeField& sub, const SpaceTimeField& super, const DataSource& g,
                             const SpaceTimeFunction& f, const CoefficientField& coeff, const Exponents& exps,
                             const SpaceTimeGrid& grid, const SolveConfig& config, const PerronOptions& opts) {
    require(sub.grid().same_layout(grid) && super.grid().same_layout(grid),
            "perron_bracket: sub/super fields must live on the solver grid");
    const RegularizationPolicy reg = config.regularization(grid.h());
    BracketReport rep;
    rep.bracket_tol = opts.bracket_tol ? *opts.bracket_tol : grid.h();
    const double rtol = opts.residual_tol ? *opts.residual_tol : 10.0 * (grid.h() + reg.epsilon);

    for (std::size_t k = 0; k < grid.time_slices(); ++k) {
        for (std::size_t s = 0; s < grid.spatial_size(); ++s) {
            if (!grid.in_domain(s) || !on_parabolic_boundary(grid, s, k) || !g.covers(s, k)) continue;
            const double gv = g.at(grid, s, grid.time(k));
            const double slack = 1e-12 * std::max(1.0, std::abs(gv));
            if (sub.at(s, k) > gv + slack)
                fail(ErrorKind::Precondition, "perron_bracket: sub > g on the parabolic boundary at " + where(grid, s, k));
            if (super.at(s, k) < gv - slack)
                fail(ErrorKind::Precondition,
                     "perron_bracket: super < g on the parabolic boundary at " + where(grid, s, k));
        }
    }

    rep.sub_check = check_residual_sign(sub, f, coeff, exps, reg, BarrierKind::Sub, rtol, opts.singular_point);
    rep.super_check = check_residual_sign(super, f, coeff, exps, reg, BarrierKind::Super, rtol, opts.singular_point);

    rep.solution = solve_cauchy_dirichlet(g, DataSource(f), coeff, exps, grid, config);
    const SpaceTimeField& u = rep.solution->u;
    rep.lower_margin = std::numeric_limits<double>::infinity();
    rep.upper_margin = std::numeric_limits<double>::infinity();
    std::optional<NodeRef> low_w;
    std::optional<NodeRef> up_w;
    for (std::size_t k = 0; k < grid.time_slices(); ++k) {
        for (std::size_t s = 0; s < grid.spatial_size(); ++s) {
            if (!grid.in_domain(s)) continue;
            const double lo = u.at(s, k) - sub.at(s, k);
            const double hi = super.at(s, k) - u.at(s, k);
            if (lo < rep.lower_margin) {
                rep.lower_margin = lo;
                low_w = NodeRef{s, k};
            }
            if (hi < rep.upper_margin) {
                rep.upper_margin = hi;
                up_w = NodeRef{s, k};
            }
        }
    }

    std::ostringstream why;
    if (rep.upper_margin < -rep.bracket_tol) {
        rep.witness = up_w;
        why << "solution exceeds super by " << -rep.upper_margin << " at " << where(grid, up_w->space, up_w->time);
    } else if (rep.lower_margin < -rep.bracket_tol) {
        rep.witness = low_w;
        why << "sub exceeds solution by " << -rep.lower_margin << " at " << where(grid, low_w->space, low_w->time);
    } else if (!rep.super_check.pass) {
        rep.witness = rep.super_check.witness;
        why << "super fails the supersolution check (margin " << rep.super_check.min_margin << ") at "
            << where(grid, rep.witness->space, rep.witness->time);
    } else if (!rep.sub_check.pass) {
        rep.witness = rep.sub_check.witness;
        why << "sub fails the subsolution check (margin " << rep.sub_check.max_margin << ") at "
            << where(grid, rep.witness->space, rep.witness->time);
    }
    rep.failure = why.str();
    rep.pass = rep.failure.empty();
    return rep;
}

StabilityReport stability_sweep(const DataSource& g, const SpaceTimeFunction& f, const CoefficientField& coeff,
                                const Exponents& exps, const SpaceTimeGrid& grid, const SolveConfig& config,
                                std::vector<double> deltas, PerturbTarget target) {
    require(!deltas.empty(), "stability_sweep: empty perturbation list");
    for (double d : deltas) {
        require(std::isfinite(d) && d >= 0.0, "stability_sweep: perturbations must be finite and non-negative");
        if (target != PerturbTarget::Source && !(coeff.a_minus() + d > 0.0))
            fail(ErrorKind::Precondition, "stability_sweep: a + delta leaves the positive coefficient range");
    }
    std::sort(deltas.begin(), deltas.end(), std::greater<>());

    StabilityReport rep;
    rep.horizon = grid.t_end() - grid.t_begin();
    const SolveResult base = solve_cauchy_dirichlet(g, DataSource(f), coeff, exps, grid, config);
    for (double d : deltas) {
        const bool pa = target != PerturbTarget::Source;
        const bool pf = target != PerturbTarget::Coefficient;
        const CoefficientField a = pa ? coeff.shifted(d) : coeff;
        const SpaceTimeFunction fd = pf ? SpaceTimeFunction([f, d](const Vec2& x, double t) { return f(x, t) + d; }) : f;
        const SolveResult r = solve_cauchy_dirichlet(g, DataSource(fd), a, exps, grid, config);
        double err = 0.0;
        for (std::size_t k = 0; k < grid.time_slices(); ++k)
            for (std::size_t s = 0; s < grid.spatial_size(); ++s)
                if (grid.in_domain(s)) err = std::max(err, std::abs(r.u.at(s, k) - base.u.at(s, k)));
        StabilityPoint pt{d, err, 0.0};
        if (target == PerturbTarget::Source) {
            pt.bound = rep.horizon * d;
            if (err > pt.bound * (1.0 + 1e-9) + 1e-14) rep.within_bound = false;
        }
        rep.points.push_back(pt);
    }
    rep.monotone = true;
    for (std::size_t i = 1; i < rep.points.size(); ++i)
        if (rep.points[i].error > rep.points[i - 1].error * (1.0 + 1e-12) + 1e-15) rep.monotone = false;
    rep.pass = rep.monotone && rep.within_bound;
    return rep;
}

}  // namespace degpar
