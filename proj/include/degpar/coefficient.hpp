#pragma once

#include <string>

#include "degpar/grid.hpp"
#include "degpar/types.hpp"

namespace degpar {

/// The modulating coefficient a(x,t) with bounds 0 < a⁻ <= a <= a⁺ and a
/// Lipschitz budget for D_{x,t} a.
class CoefficientField {
public:
    static CoefficientField constant(double a);
    /// a(x,t) = base + amplitude * sin(frequency * (x₁ + t)).
    static CoefficientField sinusoidal(double base, double amplitude, double frequency);
    static CoefficientField custom(SpaceTimeFunction fn, double a_minus, double a_plus, double lip_bound);

    double operator()(const Vec2& x, double t) const { return is_constant_ ? value_ : fn_(x, t); }
    bool is_constant() const { return is_constant_; }
    double a_minus() const { return a_minus_; }
    double a_plus() const { return a_plus_; }
    double lip_bound() const { return lip_bound_; }

    /// Same field shifted by a constant; bounds move with it.
    CoefficientField shifted(double delta) const;

    /// Checks the bounds at every grid sample and the finite-difference
    /// Lipschitz estimate against lip_bound + 2(h + dt) (first-order slack).
    void validate(const SpaceTimeGrid& grid) const;

private:
    CoefficientField() = default;
    SpaceTimeFunction fn_;
    bool is_constant_ = false;
    double value_ = 0.0;
    double a_minus_ = 0.0;
    double a_plus_ = 0.0;
    double lip_bound_ = 0.0;
};

}  // namespace degpar
