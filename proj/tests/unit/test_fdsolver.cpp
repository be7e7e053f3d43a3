#include <cmath>

#include "doctest.h"
#include "degpar/error.hpp"
#include "degpar/exact.hpp"
#include "degpar/fdsolver.hpp"

using namespace degpar;

namespace {

double sup_error(const SpaceTimeField& u, const SpaceTimeFunction& exact, double min_radius = 0.0) {
    const auto& g = u.grid();
    double e = 0.0;
    for (std::size_t k = 0; k < g.time_slices(); ++k)
        for (std::size_t s = 0; s < g.spatial_size(); ++s)
            if (g.in_domain(s) && norm(g.point(s)) >= min_radius - 1e-12)
                e = std::max(e, std::abs(u.at(s, k) - exact(g.point(s), g.time(k))));
    return e;
}

}  // namespace

TEST_CASE("cfl_dt formula") {
    SolveConfig cfg;
    cfg.cfl_safety = 1.0;
    cfg.reg = RegularizationPolicy{0.0, 0.0};
    const auto e0 = Exponents::make(2.0, 0.0, 0.0);
    CHECK(cfl_dt(1, 0.1, e0, 1.0, cfg, 1.0) == doctest::Approx(0.0025).epsilon(1e-14));

    const auto e2 = Exponents::make(4.0, 2.0, 2.0);
    const double d1 = cfl_dt(2, 0.1, e2, 1.0, cfg, 3.0);
    const double d2 = cfl_dt(2, 0.1, e2, 1.0, cfg, 6.0);
    CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(1e-12));

    const double lim = cfl_dt(2, 0.1, Exponents::make(3.0, 0.0, 0.0), 1e-12, cfg, 1.0);
    CHECK(lim == doctest::Approx(0.01 / (2.0 * 2.0 * 2.0)).epsilon(1e-9));
}

TEST_CASE("solve config validation") {
    SolveConfig cfg;
    cfg.cfl_safety = 1.5;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg.cfl_safety = 0.5;
    cfg.grad_cap = -1.0;
    CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("single step examples") {
    const auto g = make_grid(2, 1.0, 1.0 / 8, 1.0 / 64, 0.0, 1.0 / 64);
    const auto e = Exponents::make(3.0, 1.0, 2.0);
    const SliceOperator op(g, CoefficientField::constant(1.0), e, RegularizationPolicy::for_step(g.h()));
    const std::size_t ns = g.spatial_size();

    std::vector<double> aff(ns);
    for (std::size_t s = 0; s < ns; ++s) aff[s] = 0.3 * g.point(s)[0] - 2.0 * g.point(s)[1] + 1.0;
    const std::vector<double> zero(ns, 0.0);
    const auto next = step(op, {aff, 0.0, 1e-4, zero, aff});
    for (std::size_t s = 0; s < ns; ++s) CHECK(std::abs(next[s] - aff[s]) <= 1e-14);

    const std::vector<double> one(ns, 1.0);
    const double dt = 1e-3;
    const auto grown = step(op, {zero, 0.0, dt, one, zero});
    for (std::size_t s : g.interior_nodes()) CHECK(grown[s] == dt);
    for (std::size_t s : g.boundary_nodes()) CHECK(grown[s] == 0.0);
}

TEST_CASE("step reports non-finite updates with location") {
    const auto g = make_grid(1, 1.0, 0.25, 0.1, 0.0, 0.1);
    const SliceOperator op(g, CoefficientField::constant(1.0), Exponents::make(2.0, 0.0, 0.0), RegularizationPolicy{});
    std::vector<double> u(g.spatial_size(), 0.0);
    std::vector<double> f(g.spatial_size(), 0.0);
    f[4] = 1e308;
    try {
        step(op, {u, 0.0, 10.0, f, u});
        FAIL("expected a numerical failure");
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::Numerical);
        CHECK(std::string(err.what()).find("x=(0") != std::string::npos);
    }
}

TEST_CASE("affine data is reproduced to 1e-12") {
    const auto g = make_grid(2, 1.0, 1.0 / 16, 1.0 / 32, -0.125, 0.0);
    const auto e = Exponents::make(3.0, 1.0, 2.0);
    const auto coeff = CoefficientField::sinusoidal(1.0, 0.25, 1.0);
    const auto ref = affine_solution({0.5, -0.25}, 0.1, 2, e, coeff);
    const auto r = solve_cauchy_dirichlet(DataSource(ref.u), DataSource(ref.f, true), coeff, e, g, SolveConfig{});
    CHECK(sup_error(r.u, ref.u) <= 1e-12);
}

TEST_CASE("constant shift invariance to 1e-12") {
    const auto g = make_grid(2, 1.0, 1.0 / 16, 1.0 / 32, -0.0625, 0.0);
    const auto ref = sharp_example(2, 3.0, 2.0);
    const double c = 2.5;
    SolveConfig cfg;
    cfg.grad_cap = 4.0;  // same CFL for both runs
    const auto a = solve_cauchy_dirichlet(DataSource(ref.u), DataSource(ref.f, true), ref.coeff, ref.exps, g, cfg);
    const auto b = solve_cauchy_dirichlet(DataSource([&](const Vec2& x, double t) { return ref.u(x, t) + c; }),
                                          DataSource(ref.f, true), ref.coeff, ref.exps, g, cfg);
    double d = 0.0;
    for (std::size_t k = 0; k < g.time_slices(); ++k)
        for (std::size_t s = 0; s < g.spatial_size(); ++s)
            if (g.in_domain(s)) d = std::max(d, std::abs(b.u.at(s, k) - a.u.at(s, k) - c));
    CHECK(d <= 1e-12);
}

TEST_CASE("sharp example error decreases under refinement") {
    const auto ref = sharp_example(2, 3.0, 2.0);
    const double T = 1.0 / 128;
    double prev = INFINITY;
    for (int m : {32, 64}) {
        const double h = 1.0 / m;
        const auto g = make_grid(2, 1.0, h, T / 2, -T, 0.0);
        const auto r = solve_cauchy_dirichlet(DataSource(ref.u), DataSource(ref.f, true), ref.coeff, ref.exps, g, {});
        const double e = sup_error(r.u, ref.u, 4.0 * h);
        CHECK(e < prev / 1.5);
        prev = e;
    }
}

TEST_CASE("heat reference error is O(h^2 + dt)") {
    const auto ref = heat_reference({M_PI, 0.0}, 2);
    double prev = INFINITY;
    for (int m : {8, 16, 32}) {
        const double h = 1.0 / m;
        const auto g = make_grid(2, 1.0, h, 1.0 / 64, 0.0, 1.0 / 16);
        const auto r = solve_cauchy_dirichlet(DataSource(ref.u), DataSource(ref.f, true), ref.coeff, ref.exps, g, {});
        const double e = sup_error(r.u, ref.u);
        if (prev < INFINITY) CHECK(e < 0.4 * prev);
        prev = e;
    }
    CHECK(prev < 5e-3);
}

TEST_CASE("CFL violation without auto-clamp is an error") {
    const auto ref = sharp_example(2, 3.0, 2.0);
    const auto g = make_grid(2, 1.0, 1.0 / 16, 1.0 / 16, -0.125, 0.0);
    SolveConfig cfg;
    cfg.auto_clamp = false;
    try {
        solve_cauchy_dirichlet(DataSource(ref.u), DataSource(ref.f, true), ref.coeff, ref.exps, g, cfg);
        FAIL("expected a CFL error");
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::Numerical);
        CHECK(std::string(err.what()).find("CFL") != std::string::npos);
    }
}

TEST_CASE("cap audit: realized gradient above grad_cap") {
    // Steep data, tiny cap: without auto-clamp the audit aborts, with it the cap is raised.
    const DataSource data([](const Vec2& x, double) { return std::sin(6.0 * x[0]); }, true);
    const DataSource zero([](const Vec2&, double) { return 0.0; }, true);
    SolveConfig cfg;
    const auto e2 = Exponents::make(3.0, 1.0, 1.0);
    cfg.auto_clamp = false;
    cfg.grad_cap = 0.5;
    const auto g2 = make_grid(1, 1.0, 1.0 / 32, 1e-5, 0.0, 1e-5);
    CHECK_THROWS_AS(solve_cauchy_dirichlet(data, zero, CoefficientField::constant(1.0), e2, g2, cfg), Error);
    cfg.auto_clamp = true;
    const auto g3 = make_grid(1, 1.0, 1.0 / 32, 1e-3, 0.0, 1e-3);
    const auto r3 = solve_cauchy_dirichlet(data, zero, CoefficientField::constant(1.0), e2, g3, cfg);
    CHECK(r3.cap_raised);
    CHECK(r3.grad_cap > r3.max_gradient);
}

TEST_CASE("divergence cap") {
    const auto g = make_grid(1, 1.0, 1.0 / 16, 0.5, 0.0, 1.0);
    SolveConfig cfg;
    cfg.divergence_cap = 10.0;
    const DataSource data([](const Vec2&, double) { return 0.0; }, true);
    const DataSource big([](const Vec2&, double) { return 100.0; }, true);
    try {
        solve_cauchy_dirichlet(data, big, CoefficientField::constant(1.0), Exponents::make(2.0, 0.0, 0.0), g, cfg);
        FAIL("expected divergence");
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::Numerical);
    }
}

TEST_CASE("tabulated data: interpolation and missing coverage") {
    const auto g = make_grid(1, 1.0, 0.25, 0.5, 0.0, 1.0);
    MaskedField tab(g);
    for (std::size_t k = 0; k < g.time_slices(); ++k)
        for (std::size_t s = 0; s < g.spatial_size(); ++s) tab.set(s, k, g.point(s)[0] + 2.0 * g.time(k));
    const DataSource src(tab);
    CHECK(src.at(g, 1, 0.25) == doctest::Approx(g.point(1)[0] + 0.5));
    CHECK_THROWS_AS(src.at(g, 1, 2.0), Error);

    MaskedField holes(g);
    holes.set(0, 0, 1.0);
    const auto e = Exponents::make(2.0, 0.0, 0.0);
    CHECK_THROWS_AS(solve_cauchy_dirichlet(DataSource(holes), DataSource([](const Vec2&, double) { return 0.0; }),
                                           CoefficientField::constant(1.0), e, g, SolveConfig{}),
                    Error);
}

TEST_CASE("monotone-in-time propagation") {
    // g nondecreasing in t on the lateral boundary, initial slice a subsolution (f = 1 > 0, u0 = |x|^2 / 4)
    const auto g = make_grid(2, 1.0, 1.0 / 16, 1.0 / 64, 0.0, 1.0 / 8);
    const auto e = Exponents::make(3.0, 1.0, 1.0);
    const auto coeff = CoefficientField::constant(1.0);
    const DataSource data([](const Vec2& x, double t) { return 0.25 * dot(x, x) + 2.0 * t; });
    const DataSource f([](const Vec2&, double) { return 1.0; }, true);
    const auto r = solve_cauchy_dirichlet(data, f, coeff, e, g, SolveConfig{});
    double worst = 0.0;
    for (std::size_t k = 1; k < g.time_slices(); ++k)
        for (std::size_t s = 0; s < g.spatial_size(); ++s)
            if (g.in_domain(s)) worst = std::min(worst, r.u.at(s, k) - r.u.at(s, k - 1));
    CHECK(worst >= -1e-12);
}

TEST_CASE("threaded and serial solves agree bitwise") {
    const auto g = make_grid(2, 1.0, 1.0 / 64, 1.0 / 4096, -1.0 / 4096, 0.0);
    const auto ref = sharp_example(2, 3.0, 2.0);
    SolveConfig one;
    SolveConfig four;
    four.threads = 4;
    const auto a = solve_cauchy_dirichlet(DataSource(ref.u), DataSource(ref.f, true), ref.coeff, ref.exps, g, one);
    const auto b = solve_cauchy_dirichlet(DataSource(ref.u), DataSource(ref.f, true), ref.coeff, ref.exps, g, four);
    CHECK(std::equal(a.u.values().begin(), a.u.values().end(), b.u.values().begin()));
    CHECK(a.max_gradient == b.max_gradient);
}
