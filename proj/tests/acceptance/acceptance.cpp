// One PASS/FAIL line per acceptance criterion. With arguments, runs only the named ones.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "degpar/analysis.hpp"
#include "degpar/barriers.hpp"
#include "degpar/compare.hpp"
#include "degpar/dpp.hpp"
#include "degpar/exact.hpp"
#include "degpar/fdsolver.hpp"
#include "degpar/operator.hpp"

using namespace degpar;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// sup over in-domain nodes with |x| >= rmin of |u - exact|
double sup_error(const SpaceTimeField& u, const SpaceTimeFunction& exact, double rmin = 0.0) {
    const auto& g = u.grid();
    double e = 0.0;
    for (std::size_t k = 0; k < g.time_slices(); ++k)
        for (std::size_t s = 0; s < g.spatial_size(); ++s)
            if (g.in_domain(s) && norm(g.point(s)) >= rmin - 1e-12)
                e = std::max(e, std::abs(u.at(s, k) - exact(g.point(s), g.time(k))));
    return e;
}

Outcome golden_exact() {
    const auto ref = sharp_example(2, 3.0, 2.0);
    const double span = 1.0 / 64;
    std::vector<double> errs;
    std::string d;
    bool ratios = true;
    for (double h : {1.0 / 32, 1.0 / 64, 1.0 / 128}) {
        const auto grid = make_grid(2, 1.0, h, span / 4, -span, 0.0);
        const auto r = solve_cauchy_dirichlet(DataSource(ref.u), DataSource(ref.f, true), ref.coeff, ref.exps, grid,
                                              SolveConfig{});
        errs.push_back(sup_error(r.u, ref.u, 4 * h));
        d += fmt("h=1/%g err=%.3e ", 1 / h, errs.back());
        if (errs.size() > 1) {
            const double ratio = errs[errs.size() - 2] / errs.back();
            d += fmt("ratio=%.2f ", ratio);
            ratios = ratios && ratio >= 1.5;
        }
    }
    return {ratios && errs.back() <= 5e-2, d};
}

Outcome growth_exponent() {
    const auto ref = sharp_example(2, 3.0, 2.0);
    const double theta = ref.exps.theta_star();
    const std::vector<double> radii{0.5, 0.25, 0.125, 0.0625, 0.03125};
    auto fit_of = [&](const FieldSampler& u) {
        std::vector<double> osc;
        for (double r : radii) osc.push_back(oscillation(u, {{0.0, 0.0}, 0.0, r, theta}));
        return fit_growth_exponent(radii, osc, 4 * u.grid().h());
    };
    const auto fine = make_grid(2, 0.625, 1.0 / 128, 1.0 / 16384, -0.375, 0.0);
    const double analytic = fit_of(FieldSampler(fine, ref.u)).slope;

    const auto grid = make_grid(2, 0.625, 1.0 / 64, 1.0 / 4096, -0.375, 0.0);
    const auto sol = solve_cauchy_dirichlet(DataSource(ref.u), DataSource(ref.f, true), ref.coeff, ref.exps, grid,
                                            SolveConfig{});
    const auto fd = fit_of(FieldSampler(sol.u));
    return {analytic >= 1.45 && analytic <= 1.55 && fd.slope >= 1.35 && fd.slope <= 1.65,
            fmt("analytic slope=%.4f fd slope=%.4f (%zu radii >= 4h)", analytic, fd.slope, fd.radii.size())};
}

Outcome nondegeneracy() {
    const auto exps = Exponents::make(3.0, 1.0, 2.0);
    const auto grid = make_grid(2, 1.0, 1.0 / 32, 1.0 / 64, -1.0, 0.0);
    SolveConfig sc;
    sc.grad_cap = 2.5;
    const auto sol = solve_cauchy_dirichlet(DataSource([](const Vec2& x, double) { return dot(x, x); }, true),
                                            DataSource([](const Vec2&, double) { return -1.0; }, true),
                                            CoefficientField::constant(1.0), exps, grid, sc);
    const double e = 1.0 + 1.0 / (1.0 + exps.p_tilde());
    const std::vector<double> radii{0.5, 0.25, 0.125};
    const auto prof = nondegeneracy_profile(FieldSampler(sol.u), {0.0, 0.0}, 0.0, e, radii);
    bool lower = true;
    double worst = INFINITY;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double q = prof.boundary_sup[i] / std::pow(radii[i], e);
        worst = std::min(worst, q);
        lower = lower && q >= 1e-3;
    }
    const bool ok = prof.fit && prof.extremum == ExtremumKind::Minimum && prof.fit->slope <= e + 0.15 && lower;
    return {ok, fmt("slope=%.4f (limit %.2f) min sup/r^%.1f=%.3e extremum=%s", prof.fit ? prof.fit->slope : NAN,
                    e + 0.15, e, worst, prof.extremum == ExtremumKind::Minimum ? "min" : "other")};
}

Outcome barrier_certification() {
    const auto exps = Exponents::make(3.0, 1.0, 1.0);
    const auto grid = make_grid(2, 1.0, 1.0 / 32, 1.0 / 8, -1.0, 0.0);
    const auto reg = RegularizationPolicy::for_step(grid.h());
    const auto coeff = CoefficientField::constant(1.0);
    const double c = admissible_c(2, exps, 1.0, 1.0);
    auto check = [&](double cc) {
        return verify_supersolution(SpaceTimeField::sample(grid, NonDegBarrier::canonical(exps, cc).as_function()),
                                    -1.0, coeff, exps, reg);
    };
    const auto good = check(c);
    const auto bad = check(1000.0 * c);
    return {std::abs(c - 1.0 / 17.0) < 1e-15 && grid.nodes_per_axis() == 65 && good.pass && !bad.pass,
            fmt("c=%.6f margin=%.4f tol=%.4f; c*1e3 margin=%.3e", c, good.min_margin, good.tol, bad.min_margin)};
}

Outcome comparison() {
    const auto exps = Exponents::make(3.0, 1.0, 2.0);
    const auto grid = make_grid(2, 1.0, 1.0 / 16, 1.0 / 64, -0.125, 0.0);
    double worst = -INFINITY;
    int fails = 0;
    for (std::uint64_t i = 0; i < 20; ++i) {
        const auto d = random_ordered_pair(20240601 + i);
        const auto rep = comparison_audit(DataSource(d.g1), DataSource(d.f1), DataSource(d.g2), DataSource(d.f2),
                                          CoefficientField::constant(1.0), exps, grid, SolveConfig{});
        worst = std::max(worst, rep.violation - rep.tol);
        fails += rep.pass ? 0 : 1;
    }
    return {fails == 0, fmt("20 pairs, failures=%d, max(violation - tol)=%.3e", fails, worst)};
}

SpaceTimeGrid dpp_grid(int n, double eps, double h, double tau_end) {
    const double box = h * (std::ceil((1.0 + std::max(eps, h)) / h - 1e-9) + 1.0);
    const double dt = 0.5 * eps * eps;
    return SpaceTimeGrid::make({n, box, h, dt, 0.0, std::round(tau_end / dt) * dt, 1.0});
}

Outcome dpp_consistency() {
    // p = 2, n = 1 against the heat reference
    const double pi = std::acos(-1.0);
    const auto heat = heat_reference({pi, 0.0}, 1);
    const auto remap = dpp_time_remap(1, 2.0, 2.0);
    std::vector<double> errs;
    std::string d = "p=2:";
    for (double eps : {0.2, 0.1, 0.05}) {
        const auto grid = dpp_grid(1, eps, eps * eps, 0.5);
        const auto r = dpp_solve(DataSource([&](const Vec2& x, double tau) { return heat.u(x, remap(tau)); }), grid,
                                 DppConfig{eps, 2.0, 1});
        double e = 0.0;
        for (std::size_t k = 0; k < grid.time_slices(); ++k)
            for (std::size_t s = 0; s < grid.spatial_size(); ++s)
                if (grid.in_domain(s))
                    e = std::max(e, std::abs(r.u.at(s, k) - heat.u(grid.point(s), remap(grid.time(k)))));
        errs.push_back(e);
        d += fmt(" eps=%g err=%.3e", eps, e);
    }
    const bool heat_ok = errs[0] > errs[1] && errs[1] > errs[2] && errs[2] <= 0.1;

    // p = 4, n = 2, f = 0, H = 1 + a = 2 against the FD solution in remapped time
    const auto exps = Exponents::make(4.0, 0.0, 0.0);
    const SpaceTimeFunction g = [](const Vec2& x, double) {
        return 0.5 * std::cos(1.5 * x[0]) * std::cos(x[1]) + 0.4 * x[0] * x[1] + 0.2 * x[1];
    };
    const double tau_end = 0.24;
    const auto p4 = dpp_time_remap(2, 4.0, 2.0);
    const double T = p4(tau_end);
    const auto fd_grid = make_grid(2, 1.0, 1.0 / 40, T / 4, 0.0, T);
    const auto fd = solve_cauchy_dirichlet(DataSource(g, true), DataSource([](const Vec2&, double) { return 0.0; }, true),
                                           CoefficientField::constant(1.0), exps, fd_grid, SolveConfig{});
    double e4 = 0.0;
    for (double eps : {0.2, 0.1, 0.05}) {
        const auto grid = dpp_grid(2, eps, eps / 5, tau_end);
        const auto r = dpp_solve(DataSource(g, true), grid, DppConfig{eps, 4.0, 2});
        e4 = 0.0;
        for (std::size_t k = 0; k < fd_grid.time_slices(); ++k) {
            const auto kd = static_cast<std::size_t>(std::llround(p4.inverse(fd_grid.time(k)) / grid.dt()));
            for (std::size_t s = 0; s < fd_grid.spatial_size(); ++s) {
                if (!fd_grid.in_domain(s)) continue;
                const auto sd = grid.node_at(fd_grid.point(s));
                if (!sd || !grid.in_domain(*sd)) continue;
                e4 = std::max(e4, std::abs(r.u.at(*sd, kd) - fd.u.at(s, k)));
            }
        }
        d += fmt(" | p=4 eps=%g diff=%.3e", eps, e4);
    }
    return {heat_ok && e4 <= 0.1, d};
}

Outcome properties() {
    std::vector<std::string> failed;
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);

    // (a) p = 2: Δ_2^N u = Δu at every node, any gradient
    {
        double worst = 0.0;
        const auto reg = RegularizationPolicy::for_step(0.01);
        for (int i = 0; i < 1000; ++i) {
            const Sym2 d2{unif(rng), unif(rng), unif(rng)};
            const Vec2 gr{unif(rng), unif(rng)};
            worst = std::max(worst, std::abs(normalized_p_laplacian(d2, gr, 2.0, reg) - d2.trace()));
        }
        if (worst != 0.0) failed.push_back(fmt("a:%.1e", worst));
    }
    // (b) affine fields have zero residual; dyadic data keeps every difference exact
    {
        const auto grid = make_grid(2, 1.0, 1.0 / 16, 1.0 / 64, -0.125, 0.0);
        double worst = 0.0;
        for (double p : {2.0, 3.0, 5.0}) {
            const auto exps = Exponents::make(p, p - 2.0, p);
            const auto u = SpaceTimeField::sample(grid, [](const Vec2& x, double) { return 0.375 * x[0] - 1.75 * x[1] + 2.0; });
            const auto res = residual(u, [](const Vec2&, double) { return 0.0; }, CoefficientField::constant(1.0), exps,
                                      RegularizationPolicy::for_step(grid.h()));
            worst = std::max({worst, std::abs(res.max_present()), std::abs(res.min_present())});
        }
        if (worst != 0.0) failed.push_back(fmt("b:%.1e", worst));
    }
    // (c) DPP monotonicity on 100 random ordered pairs
    {
        const auto grid = dpp_grid(2, 0.2, 1.0 / 20, 0.02);
        const BallStencil ball(grid, 0.2);
        std::uniform_real_distribution<double> gap(0.0, 1.0);
        int bad = 0;
        for (int pair = 0; pair < 100; ++pair) {
            const auto w = dpp_weights(2.0 + 0.1 * pair, 2);
            std::vector<double> u(grid.spatial_size()), v(grid.spatial_size());
            for (std::size_t s = 0; s < u.size(); ++s) {
                u[s] = unif(rng);
                v[s] = u[s] + gap(rng) * (pair % 3 == 0 ? 0.0 : 1.0);
            }
            for (std::size_t s : grid.interior_nodes()) {
                if (!grid.in_domain(s)) continue;
                if (dpp_update(u, grid, s, ball, w) > dpp_update(v, grid, s, ball, w)) ++bad;
            }
        }
        if (bad) failed.push_back(fmt("c:%d", bad));
    }
    // (d) synthetic power laws
    {
        double worst = 0.0;
        const std::vector<double> radii{0.5, 0.25, 0.125, 0.0625, 0.03125};
        for (double e : {0.5, 1.0, 1.5, 2.0, 2.75}) {
            std::vector<double> o;
            for (double r : radii) o.push_back(0.7 * std::pow(r, e));
            worst = std::max(worst, std::abs(fit_growth_exponent(radii, o, 0.0).slope - e));
        }
        if (worst > 1e-9) failed.push_back(fmt("d:%.1e", worst));
    }
    // (e) constant shifts pass through both solvers
    {
        const double c = 0.75;
        const auto ref = sharp_example(2, 3.0, 2.0);
        const auto grid = make_grid(2, 1.0, 1.0 / 16, 1.0 / 256, -1.0 / 64, 0.0);
        SolveConfig sc;
        sc.grad_cap = 4.0;
        const auto a = solve_cauchy_dirichlet(DataSource(ref.u), DataSource(ref.f, true), ref.coeff, ref.exps, grid, sc);
        const auto b = solve_cauchy_dirichlet(DataSource([&](const Vec2& x, double t) { return ref.u(x, t) + c; }),
                                              DataSource(ref.f, true), ref.coeff, ref.exps, grid, sc);
        double fd = 0.0;
        for (std::size_t k = 0; k < grid.time_slices(); ++k)
            for (std::size_t s = 0; s < grid.spatial_size(); ++s)
                if (grid.in_domain(s)) fd = std::max(fd, std::abs(b.u.at(s, k) - a.u.at(s, k) - c));

        const auto dg = dpp_grid(2, 0.2, 0.05, 0.2);
        const SpaceTimeFunction g0 = [](const Vec2& x, double) { return std::sin(2 * x[0]) + x[1] * x[1]; };
        const auto da = dpp_solve(DataSource(g0, true), dg, DppConfig{0.2, 3.0, 2});
        const auto db = dpp_solve(DataSource([&](const Vec2& x, double t) { return g0(x, t) + c; }, true), dg,
                                  DppConfig{0.2, 3.0, 2});
        double dp = 0.0;
        for (std::size_t k = 0; k < dg.time_slices(); ++k)
            for (std::size_t s = 0; s < dg.spatial_size(); ++s)
                if (dg.in_domain(s)) dp = std::max(dp, std::abs(db.u.at(s, k) - da.u.at(s, k) - c));
        if (fd > 1e-12 || dp > 1e-12) failed.push_back(fmt("e:%.1e/%.1e", fd, dp));
    }
    return {failed.empty(), failed.empty() ? "a-e hold" : "failed " + [&] {
        std::string s;
        for (const auto& f : failed) s += f + " ";
        return s;
    }()};
}

// Gradient Hölder seminorm of the sharp example on Q_{1/2} at h and h/2.
std::pair<double, double> gradient_seminorm_pair(double alpha) {
    const auto ref = sharp_example(2, 3.0, 2.0);
    std::pair<double, double> out;
    for (int i = 0; i < 2; ++i) {
        const double h = i == 0 ? 1.0 / 32 : 1.0 / 64;
        const auto grid = make_grid(2, 1.0, h, 1.0, -1.0, 0.0);
        SeminormOptions o;
        o.slice = 1;
        o.region = IntrinsicCylinder{{0.0, 0.0}, 0.0, 0.5, 1.5};
        const double v = gradient_holder_seminorm(FieldSampler(grid, ref.u), alpha, o);
        (i == 0 ? out.first : out.second) = v;
    }
    return out;
}

Outcome holder_stable() {
    const double a = 0.9 * 0.5;
    const auto [c, f] = gradient_seminorm_pair(a);
    const double rel = std::abs(f / c - 1.0);
    const auto props = properties();
    return {props.pass && rel <= 0.2,
            props.detail + fmt("; (f) alpha=%.3f seminorm %.4f -> %.4f (%+.1f%%)", a, c, f, 100 * (f / c - 1))};
}

Outcome holder_growth() {
    const double a = 1.1 * 0.5;
    const auto [c, f] = gradient_seminorm_pair(a);
    return {f >= 1.5 * c, fmt("(f) alpha=%.3f seminorm %.4f -> %.4f (%+.1f%%, need >= +50%%)", a, c, f,
                              100 * (f / c - 1))};
}

struct Criterion {
    std::string id;
    std::string name;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all{
        {"1", "golden exact solution convergence", golden_exact},
        {"2", "sharp growth exponent", growth_exponent},
        {"3", "non-degeneracy at an interior minimum", nondegeneracy},
        {"4", "barrier certification", barrier_certification},
        {"5", "comparison audit", comparison},
        {"6", "DPP consistency", dpp_consistency},
        {"7", "property suites a-e, f stability", holder_stable},
        {"7f-growth", "gradient seminorm growth above alpha*", holder_growth},
    };
    std::vector<std::string> wanted(argv + 1, argv + argc);
    int failures = 0;
    for (const auto& c : all) {
        if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s criterion %s (%s): %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", c.id.c_str(), c.name.c_str(),
                    o.detail.c_str(), secs);
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
