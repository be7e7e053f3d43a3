#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "degpar/coefficient.hpp"
#include "degpar/cylinder.hpp"
#include "degpar/error.hpp"
#include "degpar/exponents.hpp"
#include "degpar/field.hpp"
#include "degpar/grid.hpp"

using namespace degpar;

TEST_CASE("exponents enforce the admissible range") {
    const auto e = Exponents::make(3.0, 1.0, 2.0);
    CHECK(e.alpha_star() == doctest::Approx(0.5));
    CHECK(e.theta_star() == doctest::Approx(1.5));
    CHECK_THROWS_AS(Exponents::make(3.0, 2.0, 1.0), Error);
    CHECK_THROWS_AS(Exponents::make(1.0, 0.0, 0.0), Error);
    CHECK_THROWS_AS(Exponents::make(3.0, -0.5, 1.0), Error);
    try {
        Exponents::make(3.0, 2.0, 1.0);
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::Config);
        CHECK(std::string(err.what()).find("(H1)") != std::string::npos);
    }
}

TEST_CASE("theta* = 1 + alpha* for a sweep of p_tilde") {
    for (double pt : {0.0, 0.25, 1.0, 2.5, 7.0}) {
        const auto e = Exponents::make(pt + 2.0, pt, pt + 1.0);
        CHECK(e.theta_star() == doctest::Approx(1.0 + e.alpha_star()).epsilon(1e-15));
        CHECK(e.alpha_star() > 0.0);
        CHECK(e.alpha_star() <= 1.0);
    }
}

TEST_CASE("make_grid node counts and exact coordinates") {
    const auto g = make_grid(1, 1.0, 0.5, 0.1, -1.0, 0.0);
    CHECK(g.nodes_per_axis() == 5);
    CHECK(g.time_slices() == 11);
    const double want[] = {-1.0, -0.5, 0.0, 0.5, 1.0};
    for (std::size_t i = 0; i < 5; ++i) CHECK(g.coord(i) == want[i]);

    const auto g2 = make_grid(2, 1.0, 1.0, 1.0, -1.0, 0.0);
    CHECK(g2.nodes_per_axis() == 3);
    CHECK(g2.spatial_size() == 9);
    CHECK(g2.time_slices() == 2);

    CHECK_THROWS_AS(make_grid(1, 1.0, 0.0, 0.1, -1.0, 0.0), Error);
    CHECK_THROWS_AS(make_grid(1, 1.0, 0.1, -0.1, -1.0, 0.0), Error);
    CHECK_THROWS_AS(make_grid(1, 1.0, 0.1, 0.1, 0.0, -1.0), Error);
    CHECK_THROWS_AS(make_grid(3, 1.0, 0.1, 0.1, -1.0, 0.0), Error);
}

TEST_CASE("grid respects the memory cap") {
    GridSpec spec{2, 1.0, 1.0 / 512, 1e-4, -1.0, 0.0};
    spec.max_values = 1'000'000;
    CHECK_THROWS_AS(SpaceTimeGrid::make(spec), Error);
}

TEST_CASE("coordinates do not drift on fine grids") {
    const auto g = make_grid(1, 1.0, 1.0 / 1024, 0.5, -1.0, 0.0);
    CHECK(g.nodes_per_axis() == 2049);
    CHECK(g.coord(2048) == 1.0);
    CHECK(g.coord(1024) == 0.0);
}

TEST_CASE("mask classification") {
    const auto g = make_grid(2, 1.0, 0.25, 1.0, -1.0, 0.0);
    // corners are outside the unit ball
    CHECK(g.node_class(g.flat(0, 0)) == NodeClass::Exterior);
    CHECK(g.is_interior(*g.node_at({0.0, 0.0})));
    CHECK(g.is_boundary(*g.node_at({1.0, 0.0})));
    for (std::size_t s : g.interior_nodes())
        for (int axis = 0; axis < 2; ++axis)
            for (int off : {-1, 1}) CHECK(g.in_domain(*g.neighbor(s, axis, off)));
}

TEST_CASE("fields reject non-finite values") {
    const auto g = make_grid(1, 1.0, 0.5, 0.5, -1.0, 0.0);
    std::vector<double> v(g.spatial_size(), 0.0);
    v[2] = std::nan("");
    CHECK_THROWS_AS(ScalarField(g, v), Error);
    std::vector<double> w(g.spatial_size() * g.time_slices(), 1.0);
    w.back() = INFINITY;
    CHECK_THROWS_AS(SpaceTimeField(g, w), Error);
    CHECK_THROWS_AS(SpaceTimeField(g, std::vector<double>(3, 0.0)), Error);
}

TEST_CASE("space-time field lookup is exact array access") {
    const auto g = make_grid(1, 1.0, 0.5, 0.5, -1.0, 0.0);
    const auto f = SpaceTimeField::sample(g, [](const Vec2& x, double t) { return 10.0 * x[0] + t; });
    CHECK(f.at(4, 2) == 10.0);
    CHECK(f.at(0, 0) == -11.0);
    const FieldSampler lazy(g, [](const Vec2& x, double t) { return 10.0 * x[0] + t; });
    CHECK(lazy(4, 2) == f.at(4, 2));
}

namespace {

std::set<std::pair<double, double>> coords(const SpaceTimeGrid& g, const std::vector<NodeRef>& nodes) {
    std::set<std::pair<double, double>> out;
    for (const auto& n : nodes) out.insert({g.point(n.space)[0], g.time(n.time)});
    return out;
}

}  // namespace

TEST_CASE("cylinder_nodes on the 1-D example grid") {
    const auto g = make_grid(1, 1.0, 0.5, 0.1, -1.0, 0.0);
    const IntrinsicCylinder cyl{{0.0, 0.0}, 0.0, 0.5, 2.0};
    const auto nodes = cylinder_nodes(g, cyl);
    CHECK(nodes.size() == 9);
    std::set<double> xs;
    std::set<double> ts;
    for (const auto& n : nodes) {
        xs.insert(g.point(n.space)[0]);
        ts.insert(g.time(n.time));
    }
    CHECK(xs == std::set<double>{-0.5, 0.0, 0.5});
    REQUIRE(ts.size() == 3);
    CHECK(*ts.begin() == doctest::Approx(-0.2));
    CHECK(*ts.rbegin() == doctest::Approx(0.0));
    CHECK(std::is_sorted(nodes.begin(), nodes.end()));
}

TEST_CASE("cylinder depth rho^theta with theta = 1.5") {
    const auto g = make_grid(1, 1.0, 0.25, 0.1, -1.0, 0.0);
    const IntrinsicCylinder cyl{{0.0, 0.0}, 0.0, 0.25, 1.5};
    CHECK(cyl.depth() == doctest::Approx(0.125));
    std::set<double> ts;
    for (const auto& n : cylinder_nodes(g, cyl)) ts.insert(g.time(n.time));
    REQUIRE(ts.size() == 2);
    CHECK(*ts.begin() == doctest::Approx(-0.1));
}

TEST_CASE("small off-node cylinders") {
    const auto g = make_grid(1, 1.0, 0.5, 0.1, -1.0, 0.0);
    CHECK(cylinder_nodes(g, {{0.2, 0.0}, 0.0, 0.1, 2.0}).empty());
    const auto hit = cylinder_nodes(g, {{0.45, 0.0}, 0.0, 0.1, 2.0});
    REQUIRE(!hit.empty());
    for (const auto& n : hit) CHECK(g.point(n.space)[0] == 0.5);
    // entirely after the grid's time window
    CHECK(cylinder_nodes(g, {{0.0, 0.0}, 5.0, 0.5, 2.0}).empty());
}

TEST_CASE("cylinder validation") {
    CHECK_THROWS_AS((IntrinsicCylinder{{0.0, 0.0}, 0.0, 0.0, 2.0}.validate()), Error);
    CHECK_THROWS_AS((IntrinsicCylinder{{0.0, 0.0}, 0.0, 0.5, 1.0}.validate()), Error);
}

TEST_CASE("parabolic boundary on the 1-D example") {
    const auto g = make_grid(1, 1.0, 0.5, 0.1, -1.0, 0.0);
    const IntrinsicCylinder cyl{{0.0, 0.0}, 0.0, 0.5, 2.0};
    const auto pb = parabolic_boundary_nodes(g, cyl);
    const auto c = coords(g, pb);
    CHECK(pb.size() == 7);  // 3 bottom + 2 lateral at each of the two upper slices
    CHECK(c.count({0.0, g.time(8)}) == 1);
    CHECK(c.count({0.0, g.time(9)}) == 0);
    CHECK(c.count({0.5, 0.0}) == 1);
    CHECK(c.count({-0.5, 0.0}) == 1);
}

TEST_CASE("one-slice cylinder: boundary equals the whole cylinder") {
    const auto g = make_grid(1, 1.0, 0.5, 0.1, -1.0, 0.0);
    const IntrinsicCylinder cyl{{0.0, 0.0}, 0.0, 0.5, 5.0};  // depth 0.03 < dt
    CHECK(cylinder_nodes(g, cyl) == parabolic_boundary_nodes(g, cyl));
}

TEST_CASE("2-D unit cylinder with h = 1") {
    // Closed unit ball on the 3x3 grid: centre plus the four axis nodes.
    const auto g = make_grid(2, 1.0, 1.0, 1.0, -1.0, 0.0);
    const IntrinsicCylinder cyl{{0.0, 0.0}, 0.0, 1.0, 2.0};
    const auto all = cylinder_nodes(g, cyl);
    CHECK(all.size() == 5);
    const auto pb = parabolic_boundary_nodes(g, cyl);
    CHECK(pb.size() == 5);
    for (const auto& n : pb) CHECK(norm(g.point(n.space)) <= 1.0);
}

TEST_CASE("boundary is a subset of the cylinder, and cylinders nest") {
    const auto g = make_grid(2, 1.0, 1.0 / 16, 1.0 / 32, -1.0, 0.0);
    for (double r : {0.1, 0.25, 0.5}) {
        const IntrinsicCylinder small{{0.125, -0.25}, -0.0625, r, 1.5};
        IntrinsicCylinder big = small;
        big.radius = 2 * r;
        const auto inner = cylinder_nodes(g, small);
        const auto outer = cylinder_nodes(g, big);
        const auto pb = parabolic_boundary_nodes(g, small);
        CHECK(std::includes(inner.begin(), inner.end(), pb.begin(), pb.end()));
        CHECK(std::includes(outer.begin(), outer.end(), inner.begin(), inner.end()));
    }
}

TEST_CASE("coefficient fields") {
    const auto g = make_grid(2, 1.0, 1.0 / 16, 1.0 / 16, -1.0, 0.0);
    const auto c = CoefficientField::constant(2.0);
    CHECK(c({0.3, 0.1}, -0.5) == 2.0);
    CHECK_NOTHROW(c.validate(g));
    CHECK_THROWS_AS(CoefficientField::constant(0.0), Error);

    const auto s = CoefficientField::sinusoidal(1.0, 0.5, 2.0);
    CHECK(s.a_minus() == doctest::Approx(0.5));
    CHECK(s.a_plus() == doctest::Approx(1.5));
    CHECK_NOTHROW(s.validate(g));
    const auto shifted = s.shifted(0.25);
    CHECK(shifted({0.1, 0.0}, 0.0) == doctest::Approx(s({0.1, 0.0}, 0.0) + 0.25));
    CHECK(shifted.a_minus() == doctest::Approx(0.75));

    // claims a Lipschitz bound far below the truth
    const auto liar = CoefficientField::custom([](const Vec2& x, double) { return 2.0 + std::sin(10.0 * x[0]); }, 1.0,
                                               3.0, 0.1);
    CHECK_THROWS_AS(liar.validate(g), Error);
    const auto out_of_bounds = CoefficientField::custom([](const Vec2& x, double) { return 1.0 + x[0]; }, 0.5, 3.0, 1.0);
    CHECK_THROWS_AS(out_of_bounds.validate(g), Error);
}
