#pragma once

#include <cmath>
#include <cstddef>
#include <span>

#include "degpar/coefficient.hpp"
#include "degpar/exponents.hpp"
#include "degpar/field.hpp"
#include "degpar/types.hpp"

namespace degpar {

/// How |∇u| is regularised wherever it enters H or the normalisation ∇u/|∇u|.
///
/// The magnitude used by the discrete operator is
///   m² = |∇u|² + ε² + (κh)² Σ_j (∂²_jj u)²
/// with central differences for ∇u and D²u. For κ = 1/2 this equals the mean of
/// the squared one-sided differences, which keeps H from collapsing to ε^p̃ at a
/// symmetric critical point where the central gradient is exactly zero.
/// κ = 0 gives the plain sqrt(|∇u|² + ε²).
struct RegularizationPolicy {
    double epsilon = 1e-6;
    double curvature_weight = 0.5;

    /// ε = max(1e-6, h²), κ = 1/2.
    static RegularizationPolicy for_step(double h);
    void validate() const;
};

/// Central differences; one-sided at the edge of the mask.
Vec2 gradient(const ScalarField& field, std::size_t node);

/// Second central differences, 4-corner cross term. Needs an interior node.
Sym2 hessian(const ScalarField& field, std::size_t node);

/// sqrt(|grad|² + ε²)
double regularized_magnitude(const Vec2& grad, const RegularizationPolicy& reg);

/// The magnitude the discrete operator uses (see RegularizationPolicy).
double effective_magnitude(const Vec2& grad, const Sym2& d2, double h, const RegularizationPolicy& reg);

/// tr(D²u) + (p-2)<D²u q, q> with q = grad / sqrt(|grad|² + ε²).
/// Throws when ε = 0 and grad = 0.
double normalized_p_laplacian(const Sym2& d2, const Vec2& grad, double p, const RegularizationPolicy& reg);

/// Same with q = grad / magnitude.
inline double normalized_p_laplacian_with(const Sym2& d2, const Vec2& grad, double p, double magnitude) {
    if (magnitude <= 0.0) return d2.trace();
    const Vec2 q{grad[0] / magnitude, grad[1] / magnitude};
    return d2.trace() + (p - 2.0) * d2.quad(q);
}

/// m ↦ m^p̃ + a m^q̃ with cheap paths for the common integer and half-integer exponents.
class DegeneracyLaw {
public:
    explicit DegeneracyLaw(const Exponents& exps);
    double operator()(double m, double a) const { return power(m, pt_kind_, pt_) + a * power(m, qt_kind_, qt_); }

private:
    enum class Kind { Zero, One, Two, Half, General };
    static Kind classify(double e);
    static double power(double m, Kind k, double e) {
        switch (k) {
            case Kind::Zero: return 1.0;
            case Kind::One: return m;
            case Kind::Two: return m * m;
            case Kind::Half: return std::sqrt(m);
            default: return std::pow(m, e);
        }
    }
    double pt_;
    double qt_;
    Kind pt_kind_;
    Kind qt_kind_;
};

/// H(x,t,grad) = m^p̃ + a(x,t) m^q̃ with m = sqrt(|grad|² + ε²).
double degeneracy_H(const Vec2& x, double t, const Vec2& grad, const CoefficientField& coeff, const Exponents& exps,
                    const RegularizationPolicy& reg);

/// Evaluates the diffusion term H·Δ_p^N u at interior nodes of one slice.
class SliceOperator {
public:
    SliceOperator(SpaceTimeGrid grid, CoefficientField coeff, Exponents exps, RegularizationPolicy reg);

    struct Sample {
        double value = 0.0;      ///< H·Δ_p^N u
        double magnitude = 0.0;  ///< effective |∇u|
        Vec2 grad{0.0, 0.0};
    };

    /// Requires an interior node.
    Sample at(std::span<const double> u, std::size_t s, double t) const;

    /// Writes H·Δ_p^N u into out[s] for every interior s (other entries untouched).
    /// Returns the largest effective gradient magnitude seen.
    double apply(std::span<const double> u, double t, std::span<double> out, unsigned threads = 1) const;

    const SpaceTimeGrid& grid() const { return grid_; }
    const RegularizationPolicy& regularization() const { return reg_; }

private:
    SpaceTimeGrid grid_;
    CoefficientField coeff_;
    Exponents exps_;
    RegularizationPolicy reg_;
    DegeneracyLaw law_;
};

/// r = ∂ₜu (backward difference) − H·Δ_p^N u − f at interior nodes of slices k >= 1.
/// Edge nodes and slice 0 are absent.
MaskedField residual(const SpaceTimeField& u, const SpaceTimeField& f, const CoefficientField& coeff,
                     const Exponents& exps, const RegularizationPolicy& reg);
MaskedField residual(const SpaceTimeField& u, const SpaceTimeFunction& f, const CoefficientField& coeff,
                     const Exponents& exps, const RegularizationPolicy& reg);

}  // namespace degpar
