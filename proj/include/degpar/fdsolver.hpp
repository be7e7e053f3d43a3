#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "degpar/coefficient.hpp"
#include "degpar/exponents.hpp"
#include "degpar/field.hpp"
#include "degpar/operator.hpp"

namespace degpar {

/// Boundary/initial data or a source term: either a closure or tabulated
/// values (linearly interpolated in time between slices).
class DataSource {
public:
    DataSource(SpaceTimeFunction fn, bool time_independent = false);  // NOLINT(google-explicit-constructor)
    DataSource(MaskedField table);                                      // NOLINT(google-explicit-constructor)

    /// Throws if tabulated data is missing at (s, t).
    double at(const SpaceTimeGrid& grid, std::size_t s, double t) const;
    bool time_independent() const { return time_independent_; }
    bool is_table() const { return std::holds_alternative<MaskedField>(data_); }
    /// True when a value can be produced at node s, slice k.
    bool covers(std::size_t s, std::size_t k) const;

private:
    std::variant<SpaceTimeFunction, MaskedField> data_;
    bool time_independent_ = false;
};

struct SolveConfig {
    /// Defaults to RegularizationPolicy::for_step(h) when unset.
    std::optional<RegularizationPolicy> reg;
    double cfl_safety = 0.9;
    std::size_t max_steps = 50'000'000;
    /// A-priori bound on the effective |∇u|; defaults to 2 Lip(g) + 1.
    std::optional<double> grad_cap;
    /// When false, a grid dt above the CFL bound or a realized |∇u| above
    /// grad_cap aborts; when true the solver sub-steps / raises the cap.
    bool auto_clamp = true;
    double divergence_cap = 1e8;
    unsigned threads = 1;

    void validate() const;
    RegularizationPolicy regularization(double h) const { return reg ? *reg : RegularizationPolicy::for_step(h); }
};

/// Largest H over |∇u| <= grad_cap: (cap²+ε²)^{p̃/2} + a⁺(cap²+ε²)^{q̃/2}.
double degeneracy_bound(const Exponents& exps, double a_plus, double grad_cap, double epsilon);

/// safety · h² / (2 · dim · H_max · max{1, p-1}).
double cfl_dt(int dim, double h, const Exponents& exps, double a_plus, const SolveConfig& config, double grad_cap);

struct StepInput {
    std::span<const double> u;              ///< current slice, all nodes
    double t = 0.0;
    double dt = 0.0;
    std::span<const double> f;              ///< source at time t, all nodes
    std::span<const double> boundary_next;  ///< Dirichlet data at t + dt, read at boundary nodes
};

/// One forward-Euler step u⁺ = u + dt (H Δ_p^N u + f) at interior nodes;
/// boundary nodes take boundary_next, exterior nodes are copied.
/// Throws ErrorKind::Numerical on a non-finite update.
std::vector<double> step(const SliceOperator& op, const StepInput& in, unsigned threads = 1,
                         double* max_magnitude = nullptr);

struct SolveResult {
    SpaceTimeField u;
    double max_gradient = 0.0;   ///< largest effective |∇u| met during the run
    double grad_cap = 0.0;       ///< cap in force at the end
    double initial_grad_cap = 0.0;
    double data_lipschitz = 0.0; ///< finite-difference Lipschitz estimate of the initial data
    double min_dt = 0.0;
    double max_dt = 0.0;
    std::size_t steps = 0;
    bool cap_raised = false;
};

/// Explicit time marching for u = g on the parabolic boundary of the masked domain.
SolveResult solve_cauchy_dirichlet(const DataSource& g, const DataSource& f, const CoefficientField& coeff,
                                   const Exponents& exps, const SpaceTimeGrid& grid, const SolveConfig& config);

/// Spatial Lipschitz estimate of g on the first slice (forward differences inside the mask).
double data_lipschitz(const DataSource& g, const SpaceTimeGrid& grid);

}  // namespace degpar
