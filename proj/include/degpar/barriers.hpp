#pragma once

#include <cstddef>
#include <optional>

#include "degpar/coefficient.hpp"
#include "degpar/cylinder.hpp"
#include "degpar/exponents.hpp"
#include "degpar/field.hpp"
#include "degpar/operator.hpp"

namespace degpar {

/// Φ(x,t) = c (|x - x₀|^{1+α} + (t₀ - t)^{(1+α)/θ}) for t <= t₀.
struct NonDegBarrier {
    double c = 1.0;
    double alpha = 1.0;
    double theta = 2.0;
    Vec2 center{0.0, 0.0};
    double t0 = 0.0;

    /// α = 1/(1+p̃), θ = 1 + α (so ∂ₜΦ = -c).
    static NonDegBarrier canonical(const Exponents& exps, double c, const Vec2& center = {0.0, 0.0}, double t0 = 0.0);

    double operator()(const Vec2& x, double t) const;
    SpaceTimeFunction as_function() const;
    /// min of Φ over the parabolic boundary of Q_{r,θ}(x₀,t₀): c r^{1+α} when θ = 1+α.
    double boundary_minimum(double r) const;
};

/// v̄(x,t) = η + M₁ (t - t₀) + (M₂/η) |x|² (plus an optional constant lift).
struct TimeHolderBarrier {
    double eta = 1.0;
    double M1 = 0.0;
    double M2 = 0.0;
    double t0 = 0.0;
    double lift = 0.0;

    double operator()(const Vec2& x, double t) const { return lift + eta + M1 * (t - t0) + (M2 / eta) * dot(x, x); }
    SpaceTimeFunction as_function() const;
};

/// c = min(1, |c₀| / (1 + 2^{1+q̃}(1+a⁺)(n-1+α(p-1)))), α = 1/(1+p̃).
double admissible_c(int n, const Exponents& exps, double a_plus, double c0_mag);

/// Constant C in M₁ = C (M₂^{1+p̃}/η^{1+p̃} + M₂^{1+q̃}/η^{1+q̃}) + sup f.
/// Fixed as max{1, p-1} · n · 2^{1+q̃} · (1 + a⁺).
double time_barrier_operator_constant(int n, const Exponents& exps, double a_plus);

struct TimeBarrierConstants {
    double M1 = 0.0;
    double M2 = 0.0;
    double C = 0.0;
};

/// M₂ = lip² + (8/3)² sup_u², M₁ as above.
TimeBarrierConstants time_barrier_constants(double lip, double sup_u, double eta, const Exponents& exps,
                                            double a_plus, int n, double sup_f);

struct ResidualSignReport {
    double min_margin = 0.0;  ///< min over checked nodes of ∂ₜΦ - HΔΦ - f_bound (supersolution)
    double max_margin = 0.0;  ///< max over checked nodes of the same expression
    double tol = 0.0;
    bool pass = false;
    NodeRef witness{};        ///< node attaining the deciding extreme
    std::size_t checked = 0;
};

/// Checks ∂ₜΦ − H(x,t,∇Φ) Δ_p^N Φ >= f_bound − tol at interior nodes of slices k >= 1,
/// skipping nodes within 2h of `singular_point`. tol = 10 (h + ε).
/// Throws when the grid is too coarse for the exclusion to leave anything checked.
ResidualSignReport verify_supersolution(const SpaceTimeField& phi, double f_bound, const CoefficientField& coeff,
                                        const Exponents& exps, const RegularizationPolicy& reg,
                                        std::optional<Vec2> singular_point = Vec2{0.0, 0.0});

/// Sub/super residual check against a source closure. For kind == Super the
/// pass condition is min_margin >= -tol, for Sub it is max_margin <= tol.
enum class BarrierKind { Super, Sub };
ResidualSignReport check_residual_sign(const SpaceTimeField& field, const SpaceTimeFunction& f,
                                       const CoefficientField& coeff, const Exponents& exps,
                                       const RegularizationPolicy& reg, BarrierKind kind, double tol,
                                       std::optional<Vec2> singular_point = std::nullopt);

}  // namespace degpar
