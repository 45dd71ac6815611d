#pragma once

#include <complex>

#include "nblab/numeric.hpp"

namespace nblab {

struct ZetaValue {
    Complex value;
    double abs_error_estimate = 0.0; // upper bound from the truncation-error rule
};

// Riemann zeta by Euler-Maclaurin summation, valid for Re(s) > -1, s != 1.
// Truncation length starts at max(20, ceil|Im s| + 10) and doubles until the
// first omitted Bernoulli term (with its rigorous prefactor) is below tol.
ZetaValue zeta(Complex s, double tol = 1e-12);

// log|zeta(1/2 + it)|.  Unbounded below near zero ordinates; callers must
// panel-split around tabulated zeros.  Throws ZeroProximityError if |zeta|
// falls under the underflow guard.
double log_abs_zeta_on_line(double t, double tol = 1e-12);

} // namespace nblab
