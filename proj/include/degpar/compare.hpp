#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "degpar/barriers.hpp"
#include "degpar/fdsolver.hpp"

namespace degpar {

struct ComparisonReport {
    double violation = 0.0;   ///< max over nodes of u1 - u2
    double min_margin = 0.0;  ///< min over nodes of u2 - u1 (= -violation)
    double tol = 0.0;         ///< 10 · DBL_EPSILON · steps
    bool pass = false;
    NodeRef witness{};        ///< node attaining the violation
    std::size_t steps = 0;
    std::size_t nodes = 0;
};

/// Solves with (g1, f1) and (g2, f2) on the same grid and reports max(u1 - u2).
/// Throws ErrorKind::Precondition unless g1 <= g2 on the parabolic boundary and
/// f1 <= f2 at every in-domain node of every slice.
ComparisonReport comparison_audit(const DataSource& g1, const DataSource& f1, const DataSource& g2,
                                  const DataSource& f2, const CoefficientField& coeff, const Exponents& exps,
                                  const SpaceTimeGrid& grid, const SolveConfig& config);

/// Both solutions, for callers that want the violation field itself.
std::pair<SolveResult, SolveResult> comparison_pair(const DataSource& g1, const DataSource& f1, const DataSource& g2,
                                                    const DataSource& f2, const CoefficientField& coeff,
                                                    const Exponents& exps, const SpaceTimeGrid& grid,
                                                    const SolveConfig& config);

struct OrderedDataPair {
    SpaceTimeFunction g1, g2, f1, f2;
};

/// Smooth seeded data (a few sine modes plus a time trend) with
/// g2 - g1 >= margin and f2 - f1 >= margin everywhere. Gradients stay below about 4.
OrderedDataPair random_ordered_pair(std::uint64_t seed, double margin = 1e-3);

struct PerronOptions {
    /// Allowed sub - u and u - super excess; defaults to h.
    std::optional<double> bracket_tol;
    /// Residual slack for the sub/super checks; defaults to 10 (h + ε).
    std::optional<double> residual_tol;
    /// Nodes within 2h of this point are skipped by the residual checks.
    std::optional<Vec2> singular_point;
};

struct BracketReport {
    bool pass = false;
    double lower_margin = 0.0;  ///< min over in-domain nodes of u - sub
    double upper_margin = 0.0;  ///< min over in-domain nodes of super - u
    double bracket_tol = 0.0;
    std::optional<NodeRef> witness;  ///< first failing node, if any
    std::string failure;             ///< empty on PASS
    ResidualSignReport sub_check;
    ResidualSignReport super_check;
    std::optional<SolveResult> solution;
};

/// Checks sub <= u <= super for u = solve(g, f). Boundary ordering
/// sub <= g <= super is an input hypothesis (throws if it fails); residual sign
/// failures and bracket violations are reported as FAIL with a witness.
BracketReport perron_bracket(const SpaceTimeField& sub, const SpaceTimeField& super, const DataSource& g,
                             const SpaceTimeFunction& f, const CoefficientField& coeff, const Exponents& exps,
                             const SpaceTimeGrid& grid, const SolveConfig& config, const PerronOptions& opts = {});

enum class PerturbTarget { Coefficient, Source, Both };

struct StabilityPoint {
    double delta = 0.0;
    double error = 0.0;  ///< sup-norm difference to the unperturbed solve
    double bound = 0.0;  ///< T·δ for source-only sweeps, otherwise 0 (unused)
};

struct StabilityReport {
    std::vector<StabilityPoint> points;  ///< in the order of decreasing δ
    double horizon = 0.0;                ///< T = t_end - t_begin
    bool monotone = false;               ///< error non-increasing as δ decreases
    bool within_bound = true;            ///< source-only: every error <= T·δ
    bool pass = false;
};

/// ‖solve(a+δ, f+δ) − solve(a, f)‖_∞ for each δ (perturbing only the selected
/// ingredient). Throws ErrorKind::Precondition if a+δ leaves the positive range.
StabilityReport stability_sweep(const DataSource& g, const SpaceTimeFunction& f, const CoefficientField& coeff,
                                const Exponents& exps, const SpaceTimeGrid& grid, const SolveConfig& config,
                                std::vector<double> deltas, PerturbTarget target = PerturbTarget::Both);

}  // namespace degpar
