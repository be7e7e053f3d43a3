#include "degpar/exact.hpp"

#include <cmath>
#include <sstream>

#include "degpar/error.hpp"

namespace degpar {

ReferenceSolution sharp_example(int n, double p, double q_tilde) {
    require(n == 1 || n == 2, "sharp example: dimension must be 1 or 2");
    if (p < 2.0) fail(ErrorKind::Config, "sharp example needs p >= 2 so that p_tilde = p - 2 >= 0");
    const double pt = p - 2.0;
    const Exponents exps = Exponents::make(p, pt, q_tilde);
    const double alpha = exps.alpha_star();
    const double growth = 1.0 + alpha;  // (2+p̃)/(1+p̃)
    const double radial = static_cast<double>(n) - 1.0 + (p - 1.0) / (1.0 + pt);
    const double c_p = std::pow(growth, 1.0 + pt);
    const double c_q = std::pow(growth, 1.0 + q_tilde);
    const double f_exp = (q_tilde - pt) / (1.0 + pt);

    ReferenceSolution ref{
        .name = "sharp",
        .u = [growth](const Vec2& x, double t) { return std::pow(norm(x), growth) + t; },
        .f =
            [=](const Vec2& x, double) {
                const double r = norm(x);
                const double rq = f_exp == 0.0 ? 1.0 : std::pow(r, f_exp);
                return 1.0 - radial * (c_p + rq * c_q);
            },
        .grad =
            [=](const Vec2& x, double) {
                const double r = norm(x);
                if (r == 0.0) return Vec2{0.0, 0.0};
                return (growth * std::pow(r, alpha - 1.0)) * x;
            },
        .coeff = CoefficientField::constant(1.0),
        .exps = exps,
        .dim = n,
        .f_time_independent = true,
        .validity = "classical away from x = 0; C^{1,alpha*} at the critical point x = 0",
    };
    return ref;
}

ReferenceSolution affine_solution(const Vec2& b, double c, int dim, const Exponents& exps,
                                  const CoefficientField& coeff) {
    require(dim == 1 || dim == 2, "affine solution: dimension must be 1 or 2");
    const Vec2 slope{b[0], dim == 2 ? b[1] : 0.0};
    return ReferenceSolution{
        .name = "affine",
        .u = [slope, c](const Vec2& x, double) { return dot(slope, x) + c; },
        .f = [](const Vec2&, double) { return 0.0; },
        .grad = [slope](const Vec2&, double) { return slope; },
        .coeff = coeff,
        .exps = exps,
        .dim = dim,
        .f_time_independent = true,
        .validity = "everywhere",
    };
}

ReferenceSolution heat_reference(const Vec2& k, int dim) {
    require(dim == 1 || dim == 2, "heat reference: dimension must be 1 or 2");
    const Vec2 wave{k[0], dim == 2 ? k[1] : 0.0};
    const double decay = 2.0 * dot(wave, wave);
    return ReferenceSolution{
        .name = "heat",
        .u = [wave, decay](const Vec2& x, double t) { return std::exp(-decay * t) * std::cos(dot(wave, x)); },
        .f = [](const Vec2&, double) { return 0.0; },
        .grad =
            [wave, decay](const Vec2& x, double t) {
                return (-std::exp(-decay * t) * std::sin(dot(wave, x))) * wave;
            },
        .coeff = CoefficientField::constant(1.0),
        .exps = Exponents::make(2.0, 0.0, 0.0),
        .dim = dim,
        .f_time_independent = true,
        .validity = "everywhere",
    };
}

}  // namespace degpar
