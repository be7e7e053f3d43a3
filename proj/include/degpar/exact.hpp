#pragma once

#include <functional>
#include <string>

#include "degpar/coefficient.hpp"
#include "degpar/exponents.hpp"
#include "degpar/types.hpp"

namespace degpar {

/// A closed-form solution u together with the source f that makes it exact.
struct ReferenceSolution {
    std::string name;
    SpaceTimeFunction u;
    SpaceTimeFunction f;
    std::function<Vec2(const Vec2&, double)> grad;  ///< analytic ∇u
    CoefficientField coeff;
    Exponents exps;
    int dim = 2;
    bool f_time_independent = false;
    std::string validity;
};

/// u = |x|^{1+1/(1+p̃)} + t with p̃ = p - 2, a ≡ 1 and the matching source
///   f = 1 - [n-1+(p-1)/(1+p̃)] [((2+p̃)/(1+p̃))^{1+p̃} + |x|^{(q̃-p̃)/(1+p̃)} ((2+p̃)/(1+p̃))^{1+q̃}].
/// Requires p >= 2 and q̃ >= p - 2.
ReferenceSolution sharp_example(int n, double p, double q_tilde);

/// u = b·x + c, f ≡ 0.
ReferenceSolution affine_solution(const Vec2& b, double c, int dim, const Exponents& exps,
                                  const CoefficientField& coeff);

/// u = exp(-2|k|²t) cos(k·x) solving ∂ₜu = 2Δu, i.e. p = 2, p̃ = q̃ = 0, a ≡ 1.
ReferenceSolution heat_reference(const Vec2& k, int dim);

}  // namespace degpar
