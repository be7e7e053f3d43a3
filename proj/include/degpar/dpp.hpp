#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "degpar/cylinder.hpp"
#include "degpar/fdsolver.hpp"
#include "degpar/field.hpp"
#include "degpar/grid.hpp"

namespace degpar {

/// Game weights: alpha = (p-2)/(p+n) for the tug-of-war turn, beta = (2+n)/(p+n) for noise.
struct DppWeights {
    double alpha = 0.0;
    double beta = 1.0;
};

DppWeights dpp_weights(double p, int n);

struct DppConfig {
    double eps_game = 0.1;  ///< step size ε of the game
    double p = 2.0;
    int n = 2;

    void validate() const;
    DppWeights weights() const { return dpp_weights(p, n); }
    /// The DPP clock: one slice per ε²/2.
    double time_step() const { return 0.5 * eps_game * eps_game; }
};

/// Grid offsets (di, dj) with |(di, dj)| h <= ε; the discrete ball B_ε(0).
class BallStencil {
public:
    BallStencil(const SpaceTimeGrid& grid, double eps);
    std::size_t size() const { return offsets_.size(); }
    /// Spatial index of the k-th ball node around s; requires the ball to fit in the grid.
    const std::vector<long>& flat_offsets() const { return flat_; }
    long reach() const { return reach_; }

private:
    std::vector<std::pair<long, long>> offsets_;
    std::vector<long> flat_;
    long reach_ = 0;
};

/// Γ_ε^par on the grid: nodes outside Ω within distance max(ε, h) of Ω at every
/// slice, plus every Ω node at the initial slice (the slab (-ε²/2, 0]).
/// Ω is the ball |x| <= grid.domain_radius(); the grid clock must start at 0.
std::vector<NodeRef> boundary_strip(const SpaceTimeGrid& grid, double eps_game);

/// (α/2)(max_B u + min_B u) + β · mean_B u over the discrete ball around `node`,
/// all read from the previous slice.
double dpp_update(std::span<const double> prev, const SpaceTimeGrid& grid, std::size_t node,
                  const BallStencil& ball, const DppWeights& w);
double dpp_update(const ScalarField& prev, std::size_t node, double eps_game, const DppWeights& w);

struct DppResult {
    SpaceTimeField u;
    std::vector<std::string> warnings;
    std::size_t ball_size = 0;
};

/// Value iteration forward in the DPP clock. Slice k holds u_ε(·, k ε²/2).
DppResult dpp_solve(const DataSource& g, const SpaceTimeGrid& grid, const DppConfig& config);

/// Affine map from DPP time τ to the time of ∂ₜu = c Δ_p^N u.
/// The homogeneous DPP limit solves (n+p) ∂_τ u = Δ_p^N u, so t = offset + τ / (c (n+p)).
struct TimeRemap {
    double scale = 1.0;
    double offset = 0.0;
    double operator()(double tau) const { return offset + scale * tau; }
    double inverse(double t) const { return (t - offset) / scale; }
};

TimeRemap dpp_time_remap(int n, double p, double diffusion, double offset = 0.0);

}  // namespace degpar
