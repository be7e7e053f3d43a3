#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "degpar/cylinder.hpp"
#include "degpar/field.hpp"

namespace degpar {

/// Log-log regression of oscillation against radius.
struct ExponentFit {
    double slope = 0.0;  ///< reported growth exponent
    double intercept = 0.0;
    double r_squared = 0.0;
    std::vector<double> radii;  ///< radii actually used
    double floor = 0.0;         ///< resolution floor (4h)
    std::size_t dropped_nonpositive = 0;
    std::size_t dropped_below_floor = 0;
};

/// Least squares of log(osc) on log(r) over radii >= floor. Radii must be strictly
/// decreasing; non-positive oscillations are dropped and counted. Throws with fewer
/// than three usable points.
ExponentFit fit_growth_exponent(std::span<const double> radii, std::span<const double> oscs, double floor);

/// max - min of u over the cylinder's in-domain nodes. Throws on an empty cylinder.
double oscillation(const FieldSampler& u, const IntrinsicCylinder& cyl);

struct DetrendedOscillation {
    double osc = 0.0;
    Vec2 plane{0.0, 0.0};  ///< ℓ in u - ℓ·x
    bool rank_deficient = false;
};

/// osc(u - ℓ·x) minimised over planes ℓ. Starts from the least-squares plane and
/// refines the (convex) oscillation with nested golden-section searches, so the
/// result never exceeds osc(u) nor osc(u - ℓ_LS·x). Collinear node sets fall
/// back to ℓ = 0 and are flagged.
DetrendedOscillation plane_detrended_osc(const FieldSampler& u, const IntrinsicCylinder& cyl);

struct DyadicSequence {
    std::vector<double> radii;   ///< 2^{-j}
    std::vector<double> values;  ///< S_j = sup_{Q_{2^{-j},θ}} (u - u(center))
    bool center_is_minimum = false;
    bool truncated = false;      ///< j_max was reduced to respect 2^{-j} >= 4h
};

/// S_j over the dyadic cylinders Q_{2^{-j},θ}(center), j = 0..j_max.
/// Throws when the center is not a grid node.
DyadicSequence dyadic_osc_sequence(const FieldSampler& u, const Vec2& center, double t0, double theta, int j_max);

struct SeminormOptions {
    /// Full pair enumeration up to this many pairs, otherwise a deterministic
    /// subsample stratified by dyadic distance shells.
    std::size_t budget = 1'000'000;
    /// Restrict to nodes of this cylinder; by default every in-domain node.
    std::optional<IntrinsicCylinder> region;
    /// Only this slice (default: all slices).
    std::optional<std::size_t> slice;
};

/// sup |u(y,s) - u(x,t)| / (|x-y|^α + |t-s|^{α/2}).
double holder_seminorm(const FieldSampler& u, double alpha, const SeminormOptions& opts = {});
/// sup over equal-x pairs of |u(x,t) - u(x,s)| / |t-s|^γ.
double time_holder_seminorm(const FieldSampler& u, double gamma, const SeminormOptions& opts = {});
/// Same quotient as holder_seminorm applied to the central-difference gradient at interior nodes.
double gradient_holder_seminorm(const FieldSampler& u, double alpha, const SeminormOptions& opts = {});

/// Interior nodes of `slice` with |∇u| <= tol.
std::vector<std::size_t> critical_set(const FieldSampler& u, std::size_t slice, double tol);

enum class ExtremumKind { Minimum, Maximum, None };

struct NondegeneracyProfile {
    std::vector<double> radii;
    std::vector<double> boundary_sup;  ///< sup over ∂_par Q_{r,θ} of (u - u(center))
    ExtremumKind extremum = ExtremumKind::None;
    std::optional<ExponentFit> fit;
    bool degenerate = false;  ///< no fit possible (e.g. all suprema zero)
    std::string note;
};

/// The center must be a node; whether it is a spatial extremum of its slice is
/// checked against the 3^dim neighbourhood and reported, computation proceeds either way.
NondegeneracyProfile nondegeneracy_profile(const FieldSampler& u, const Vec2& center, double t0, double theta,
                                           std::span<const double> radii);

}  // namespace degpar
