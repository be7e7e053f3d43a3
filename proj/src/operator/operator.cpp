#include "degpar/operator.hpp"

#include <algorithm>
#include <sstream>

#include "degpar/error.hpp"
#include "degpar/parallel.hpp"

namespace degpar {

RegularizationPolicy RegularizationPolicy::for_step(double h) {
    RegularizationPolicy r;
    r.epsilon = std::max(1e-6, h * h);
    return r;
}

void RegularizationPolicy::validate() const {
    require(epsilon >= 0.0 && std::isfinite(epsilon), "regularisation epsilon must be >= 0");
    require(curvature_weight >= 0.0 && std::isfinite(curvature_weight), "curvature weight must be >= 0");
}

Vec2 gradient(const ScalarField& field, std::size_t node) {
    const SpaceTimeGrid& g = field.grid();
    require(node < g.spatial_size() && g.in_domain(node), "gradient requested outside the mask");
    Vec2 out{0.0, 0.0};
    for (int axis = 0; axis < g.dim(); ++axis) {
        auto fwd = g.neighbor(node, axis, +1);
        auto bwd = g.neighbor(node, axis, -1);
        const bool has_f = fwd && g.in_domain(*fwd);
        const bool has_b = bwd && g.in_domain(*bwd);
        if (has_f && has_b) {
            out[axis] = (field[*fwd] - field[*bwd]) / (2.0 * g.h());
        } else if (has_f) {
            out[axis] = (field[*fwd] - field[node]) / g.h();
        } else if (has_b) {
            out[axis] = (field[node] - field[*bwd]) / g.h();
        } else {
            fail(ErrorKind::Precondition, "gradient: node has no neighbour along an axis");
        }
    }
    return out;
}

Sym2 hessian(const ScalarField& field, std::size_t node) {
    const SpaceTimeGrid& g = field.grid();
    require(node < g.spatial_size() && g.is_interior(node), "hessian needs an interior node");
    const double h2 = g.h() * g.h();
    const auto u = field.values();
    Sym2 d2;
    d2.xx = (u[node + 1] - 2.0 * u[node] + u[node - 1]) / h2;
    if (g.dim() == 2) {
        const std::size_t n = g.nodes_per_axis();
        d2.yy = (u[node + n] - 2.0 * u[node] + u[node - n]) / h2;
        d2.xy = (u[node + 1 + n] - u[node + 1 - n] - u[node - 1 + n] + u[node - 1 - n]) / (4.0 * h2);
    }
    return d2;
}

double regularized_magnitude(const Vec2& grad, const RegularizationPolicy& reg) {
    return std::sqrt(dot(grad, grad) + reg.epsilon * reg.epsilon);
}

double effective_magnitude(const Vec2& grad, const Sym2& d2, double h, const RegularizationPolicy& reg) {
    const double kh = reg.curvature_weight * h;
    return std::sqrt(dot(grad, grad) + reg.epsilon * reg.epsilon + kh * kh * (d2.xx * d2.xx + d2.yy * d2.yy));
}

double normalized_p_laplacian(const Sym2& d2, const Vec2& grad, double p, const RegularizationPolicy& reg) {
    const double m = regularized_magnitude(grad, reg);
    if (m == 0.0) fail(ErrorKind::Numerical, "normalized p-Laplacian is undefined at a critical point with epsilon = 0");
    return normalized_p_laplacian_with(d2, grad, p, m);
}

DegeneracyLaw::Kind DegeneracyLaw::classify(double e) {
    if (e == 0.0) return Kind::Zero;
    if (e == 1.0) return Kind::One;
    if (e == 2.0) return Kind::Two;
    if (e == 0.5) return Kind::Half;
    return Kind::General;
}

DegeneracyLaw::DegeneracyLaw(const Exponents& exps)
    : pt_(exps.p_tilde()), qt_(exps.q_tilde()), pt_kind_(classify(pt_)), qt_kind_(classify(qt_)) {}

double degeneracy_H(const Vec2& x, double t, const Vec2& grad, const CoefficientField& coeff, const Exponents& exps,
                    const RegularizationPolicy& reg) {
    return DegeneracyLaw(exps)(regularized_magnitude(grad, reg), coeff(x, t));
}

SliceOperator::SliceOperator(SpaceTimeGrid grid, CoefficientField coeff, Exponents exps, RegularizationPolicy reg)
    : grid_(std::move(grid)), coeff_(std::move(coeff)), exps_(exps), reg_(reg), law_(exps) {
    reg_.validate();
}

SliceOperator::Sample SliceOperator::at(std::span<const double> u, std::size_t s, double t) const {
    const double h = grid_.h();
    const double inv2h = 0.5 / h;
    const double invh2 = 1.0 / (h * h);
    Sample out;
    Sym2 d2;
    d2.xx = (u[s + 1] - 2.0 * u[s] + u[s - 1]) * invh2;
    out.grad[0] = (u[s + 1] - u[s - 1]) * inv2h;
    if (grid_.dim() == 2) {
        const std::size_t n = grid_.nodes_per_axis();
        d2.yy = (u[s + n] - 2.0 * u[s] + u[s - n]) * invh2;
        d2.xy = (u[s + 1 + n] - u[s + 1 - n] - u[s - 1 + n] + u[s - 1 - n]) * (0.25 * invh2);
        out.grad[1] = (u[s + n] - u[s - n]) * inv2h;
    }
    const double m = effective_magnitude(out.grad, d2, h, reg_);
    const double a = coeff_.is_constant() ? coeff_(Vec2{}, t) : coeff_(grid_.point(s), t);
    out.magnitude = m;
    out.value = law_(m, a) * normalized_p_laplacian_with(d2, out.grad, exps_.p(), m);
    return out;
}

double SliceOperator::apply(std::span<const double> u, double t, std::span<double> out, unsigned threads) const {
    const auto& nodes = grid_.interior_nodes();
    const unsigned nchunks = std::max(1u, threads);
    std::vector<double> chunk_max(nchunks, 0.0);
    const std::size_t per = (nodes.size() + nchunks - 1) / nchunks;
    parallel_for(nodes.size(), threads, [&](std::size_t b, std::size_t e) {
        double mx = 0.0;
        for (std::size_t i = b; i < e; ++i) {
            const Sample smp = at(u, nodes[i], t);
            out[nodes[i]] = smp.value;
            mx = std::max(mx, smp.magnitude);
        }
        chunk_max[per == 0 ? 0 : std::min<std::size_t>(b / std::max<std::size_t>(per, 1), nchunks - 1)] = mx;
    });
    return *std::max_element(chunk_max.begin(), chunk_max.end());
}

namespace {

template <typename SourceAt>
MaskedField residual_impl(const SpaceTimeField& u, SourceAt source, const CoefficientField& coeff,
                          const Exponents& exps, const RegularizationPolicy& reg) {
    const SpaceTimeGrid& g = u.grid();
    require(g.time_slices() >= 2, "residual needs at least two time slices");
    SliceOperator op(g, coeff, exps, reg);
    MaskedField r(g);
    for (std::size_t k = 1; k < g.time_slices(); ++k) {
        const auto cur = u.slice(k);
        const auto prev = u.slice(k - 1);
        const double t = g.time(k);
        for (std::size_t s : g.interior_nodes()) {
            const double dudt = (cur[s] - prev[s]) / g.dt();
            r.set(s, k, dudt - op.at(cur, s, t).value - source(s, k));
        }
    }
    return r;
}

}  // namespace

MaskedField residual(const SpaceTimeField& u, const SpaceTimeField& f, const CoefficientField& coeff,
                     const Exponents& exps, const RegularizationPolicy& reg) {
    if (!u.grid().same_layout(f.grid())) fail(ErrorKind::Precondition, "residual: u and f live on different grids");
    return residual_impl(u, [&](std::size_t s, std::size_t k) { return f.at(s, k); }, coeff, exps, reg);
}

MaskedField residual(const SpaceTimeField& u, const SpaceTimeFunction& f, const CoefficientField& coeff,
                     const Exponents& exps, const RegularizationPolicy& reg) {
    const SpaceTimeGrid& g = u.grid();
    return residual_impl(u, [&](std::size_t s, std::size_t k) { return f(g.point(s), g.time(k)); }, coeff, exps, reg);
}

}  // namespace degpar
