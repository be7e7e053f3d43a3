#include "degpar/exponents.hpp"

#include <cmath>
#include <sstream>

#include "degpar/error.hpp"

namespace degpar {

Exponents Exponents::make(double p, double p_tilde, double q_tilde) {
    if (!std::isfinite(p) || !std::isfinite(p_tilde) || !std::isfinite(q_tilde)) {
        fail(ErrorKind::Config, "exponents must be finite");
    }
    if (!(p > 1.0)) {
        std::ostringstream os;
        os << "ellipticity exponent p must exceed 1 (got " << p << ")";
        fail(ErrorKind::Config, os.str());
    }
    if (!(p_tilde >= 0.0 && p_tilde <= q_tilde)) {
        std::ostringstream os;
        os << "hypothesis (H1) violated: need 0 <= p_tilde <= q_tilde (got p_tilde=" << p_tilde
           << ", q_tilde=" << q_tilde << ")";
        fail(ErrorKind::Config, os.str());
    }
    return Exponents(p, p_tilde, q_tilde);
}

}  // namespace degpar
