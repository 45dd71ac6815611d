#pragma once

#include <cmath>
#include <complex>

namespace nblab {

using Complex = std::complex<double>;

// Neumaier-compensated accumulator.  Sweeps add up to ~1e10 terms; plain
// summation would lose several digits against the 1e-8..1e-12 tolerances.
struct Kahan {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

struct KahanComplex {
    Kahan re, im;
    void add(const Complex& z) { re.add(z.real()); im.add(z.imag()); }
    Complex value() const { return {re.value(), im.value()}; }
};

inline bool is_finite(const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// a*b as an exact double-double pair (hi + lo == a*b exactly).
inline void two_prod(double a, double b, double& hi, double& lo) {
    hi = a * b;
    lo = std::fma(a, b, -hi);
}

} // namespace nblab
