#include "degpar/coefficient.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "degpar/error.hpp"

namespace degpar {

CoefficientField CoefficientField::constant(double a) {
    if (!(a > 0.0) || !std::isfinite(a)) fail(ErrorKind::Config, "coefficient a must be positive and finite");
    CoefficientField c;
    c.is_constant_ = true;
    c.value_ = a;
    c.a_minus_ = a;
    c.a_plus_ = a;
    c.lip_bound_ = 0.0;
    return c;
}

CoefficientField CoefficientField::sinusoidal(double base, double amplitude, double frequency) {
    if (!(base - std::abs(amplitude) > 0.0)) {
        fail(ErrorKind::Config, "sinusoidal coefficient must stay positive: need base > |amplitude|");
    }
    CoefficientField c;
    c.fn_ = [=](const Vec2& x, double t) { return base + amplitude * std::sin(frequency * (x[0] + t)); };
    c.a_minus_ = base - std::abs(amplitude);
    c.a_plus_ = base + std::abs(amplitude);
    // |D_x a| and |D_t a| are each |amplitude*frequency|.
    c.lip_bound_ = std::abs(amplitude * frequency) * std::sqrt(2.0);
    return c;
}

CoefficientField CoefficientField::custom(SpaceTimeFunction fn, double a_minus, double a_plus, double lip_bound) {
    if (!(a_minus > 0.0 && a_minus <= a_plus)) fail(ErrorKind::Config, "need 0 < a_minus <= a_plus");
    CoefficientField c;
    c.fn_ = std::move(fn);
    c.a_minus_ = a_minus;
    c.a_plus_ = a_plus;
    c.lip_bound_ = lip_bound;
    return c;
}

CoefficientField CoefficientField::shifted(double delta) const {
    if (!(a_minus_ + delta > 0.0)) fail(ErrorKind::Precondition, "shifted coefficient leaves the positive range");
    CoefficientField c = *this;
    if (is_constant_) {
        c.value_ += delta;
    } else {
        auto base = fn_;
        c.fn_ = [base, delta](const Vec2& x, double t) { return base(x, t) + delta; };
    }
    c.a_minus_ += delta;
    c.a_plus_ += delta;
    return c;
}

void CoefficientField::validate(const SpaceTimeGrid& g) const {
    const double slack = 1e-12 * std::max(1.0, a_plus_);
    double lip = 0.0;
    const std::size_t ns = g.spatial_size();
    for (std::size_t k = 0; k < g.time_slices(); ++k) {
        const double t = g.time(k);
        for (std::size_t s = 0; s < ns; ++s) {
            const Vec2 x = g.point(s);
            const double a = (*this)(x, t);
            if (!(a >= a_minus_ - slack && a <= a_plus_ + slack)) {
                std::ostringstream os;
                os << "coefficient a=" << a << " at (" << x[0] << "," << x[1] << "," << t << ") outside [" << a_minus_
                   << "," << a_plus_ << "]";
                fail(ErrorKind::Config, os.str());
            }
            if (is_constant_) continue;
            for (int axis = 0; axis < g.dim(); ++axis) {
                if (auto nb = g.neighbor(s, axis, 1)) lip = std::max(lip, std::abs((*this)(g.point(*nb), t) - a) / g.h());
            }
            if (k + 1 < g.time_slices()) lip = std::max(lip, std::abs((*this)(x, g.time(k + 1)) - a) / g.dt());
        }
    }
    if (lip > lip_bound_ + 2.0 * (g.h() + g.dt()) + slack) {
        std::ostringstream os;
        os << "finite-difference Lipschitz estimate " << lip << " of the coefficient exceeds its budget " << lip_bound_;
        fail(ErrorKind::Config, os.str());
    }
}

}  // namespace degpar
