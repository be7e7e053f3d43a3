#pragma once

namespace degpar {

/// The exponent triple (p, p̃, q̃) of the equation
///   ∂ₜu = (|∇u|^p̃ + a(x,t)|∇u|^q̃) Δ_p^N u + f.
/// Construction enforces p > 1 and 0 ≤ p̃ ≤ q̃ < ∞.
class Exponents {
public:
    /// Throws degpar::Error(Config) when the triple is inadmissible.
    static Exponents make(double p, double p_tilde, double q_tilde);

    double p() const { return p_; }
    double p_tilde() const { return p_tilde_; }
    double q_tilde() const { return q_tilde_; }

    /// Sharp Hölder exponent of the gradient at critical points, 1/(1+p̃).
    double alpha_star() const { return 1.0 / (1.0 + p_tilde_); }
    /// Intrinsic time scaling (2+p̃)/(1+p̃) = 1 + alpha_star.
    double theta_star() const { return (2.0 + p_tilde_) / (1.0 + p_tilde_); }
    /// Growth exponent at extremum points, 1 + alpha_star.
    double growth_exponent() const { return 1.0 + alpha_star(); }

private:
    Exponents(double p, double pt, double qt) : p_(p), p_tilde_(pt), q_tilde_(qt) {}
    double p_;
    double p_tilde_;
    double q_tilde_;
};

}  // namespace degpar
