#include "degpar/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "degpar/error.hpp"

namespace degpar {

NonDegBarrier NonDegBarrier::canonical(const Exponents& exps, double c, const Vec2& center, double t0) {
    require(c > 0.0, "barrier constant c must be positive");
    const double alpha = exps.alpha_star();
    return NonDegBarrier{c, alpha, 1.0 + alpha, center, t0};
}

double NonDegBarrier::operator()(const Vec2& x, double t) const {
    const double space = std::pow(norm(x - center), 1.0 + alpha);
    const double time = std::pow(std::max(0.0, t0 - t), (1.0 + alpha) / theta);
    return c * (space + time);
}

SpaceTimeFunction NonDegBarrier::as_function() const {
    return [b = *this](const Vec2& x, double t) { return b(x, t); };
}

double NonDegBarrier::boundary_minimum(double r) const {
    // lateral: c (r^{1+α} + (t₀-t)^{...}) >= c r^{1+α}; bottom: c (|x|^{1+α} + r^{1+α}) >= c r^{1+α}
    const double lateral = c * std::pow(r, 1.0 + alpha);
    const double bottom = c * std::pow(std::pow(r, theta), (1.0 + alpha) / theta);
    return std::min(lateral, bottom);
}

SpaceTimeFunction TimeHolderBarrier::as_function() const {
    return [b = *this](const Vec2& x, double t) { return b(x, t); };
}

double admissible_c(int n, const Exponents& exps, double a_plus, double c0_mag) {
    require(n >= 1, "admissible_c: n must be >= 1");
    require(c0_mag > 0.0, "admissible_c: |c0| must be positive");
    const double alpha = exps.alpha_star();
    const double k = 1.0 + std::pow(2.0, 1.0 + exps.q_tilde()) * (1.0 + a_plus) *
                               (static_cast<double>(n) - 1.0 + alpha * (exps.p() - 1.0));
    return std::min(1.0, c0_mag / k);
}

double time_barrier_operator_constant(int n, const Exponents& exps, double a_plus) {
    return std::max(1.0, exps.p() - 1.0) * static_cast<double>(n) * std::pow(2.0, 1.0 + exps.q_tilde()) *
           (1.0 + a_plus);
}

TimeBarrierConstants time_barrier_constants(double lip, double sup_u, double eta, const Exponents& exps,
                                            double a_plus, int n, double sup_f) {
    require(eta > 0.0, "time barrier needs eta > 0");
    TimeBarrierConstants out;
    out.M2 = lip * lip + (8.0 / 3.0) * (8.0 / 3.0) * sup_u * sup_u;
    out.C = time_barrier_operator_constant(n, exps, a_plus);
    const double ratio = out.M2 / eta;
    out.M1 = out.C * (std::pow(ratio, 1.0 + exps.p_tilde()) + std::pow(ratio, 1.0 + exps.q_tilde())) + sup_f;
    return out;
}

namespace {

template <typename SourceAt>
ResidualSignReport residual_sign(const SpaceTimeField& field, SourceAt source, const CoefficientField& coeff,
                                 const Exponents& exps, const RegularizationPolicy& reg, BarrierKind kind, double tol,
                                 std::optional<Vec2> singular_point) {
    const SpaceTimeGrid& g = field.grid();
    require(g.time_slices() >= 2, "residual sign check needs at least two slices");
    const double exclusion = 2.0 * g.h();
    if (singular_point && exclusion >= 0.5 * g.domain_radius()) {
        fail(ErrorKind::Precondition, "grid too coarse to exclude the 2h neighbourhood of the singular point");
    }
    SliceOperator op(g, coeff, exps, reg);
    ResidualSignReport rep;
    rep.tol = tol;
    rep.min_margin = std::numeric_limits<double>::infinity();
    rep.max_margin = -std::numeric_limits<double>::infinity();
    NodeRef at_min{};
    NodeRef at_max{};
    for (std::size_t k = 1; k < g.time_slices(); ++k) {
        const auto cur = field.slice(k);
        const auto prev = field.slice(k - 1);
        for (std::size_t s : g.interior_nodes()) {
            if (singular_point && norm(g.point(s) - *singular_point) <= exclusion * (1.0 + 1e-12)) continue;
            const double margin = (cur[s] - prev[s]) / g.dt() - op.at(cur, s, g.time(k)).value - source(s, k);
            if (margin < rep.min_margin) {
                rep.min_margin = margin;
                at_min = {s, k};
            }
            if (margin > rep.max_margin) {
                rep.max_margin = margin;
                at_max = {s, k};
            }
            ++rep.checked;
        }
    }
    if (rep.checked == 0) fail(ErrorKind::Precondition, "no nodes left to check after excluding the singular point");
    if (kind == BarrierKind::Super) {
        rep.pass = rep.min_margin >= -tol;
        rep.witness = at_min;
    } else {
        rep.pass = rep.max_margin <= tol;
        rep.witness = at_max;
    }
    return rep;
}

}  // namespace

ResidualSignReport verify_supersolution(const SpaceTimeField& phi, double f_bound, const CoefficientField& coeff,
                                        const Exponents& exps, const RegularizationPolicy& reg,
                                        std::optional<Vec2> singular_point) {
    const double tol = 10.0 * (phi.grid().h() + reg.epsilon);
    return residual_sign(phi, [f_bound](std::size_t, std::size_t) { return f_bound; }, coeff, exps, reg,
                         BarrierKind::Super, tol, singular_point);
}

ResidualSignReport check_residual_sign(const SpaceTimeField& field, const SpaceTimeFunction& f,
                                       const CoefficientField& coeff, const Exponents& exps,
                                       const RegularizationPolicy& reg, BarrierKind kind, double tol,
                                       std::optional<Vec2> singular_point) {
    const SpaceTimeGrid& g = field.grid();
    return residual_sign(field, [&](std::size_t s, std::size_t k) { return f(g.point(s), g.time(k)); }, coeff, exps,
                         reg, kind, tol, singular_point);
}

}  // namespace degpar
