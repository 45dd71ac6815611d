#include "nblab/zeta.hpp"

#include <cmath>
#include <cstdint>

#include "nblab/errors.hpp"

namespace nblab {

namespace {

// B_{2j} / (2j)!  for j = 1..13 (13th drives the error estimate)
constexpr double kBernoulliRatio[] = {
    0.0,
    0.08333333333333333333,
    -0.001388888888888888889,
    0.00003306878306878306878,
    -8.267195767195767196e-7,
    2.087675698786809898e-8,
    -5.284190138687493185e-10,
    1.338253653068467883e-11,
    -3.389680296322582867e-13,
    8.586062056277844564e-15,
    -2.174868698558061873e-16,
    5.509002828360229515e-18,
    -1.395446468581252334e-19,
    3.534707039629467472e-21,
};
constexpr int kDepth = 12; // Bernoulli correction terms actually summed

// zeta(s) via Euler-Maclaurin with truncation length N:
//   sum_{k=1}^{N-1} k^{-s} + N^{1-s}/(s-1) + N^{-s}/2
//     + sum_{j=1}^{q} B_{2j}/(2j)! * s(s+1)...(s+2j-2) * N^{1-s-2j}
// The remainder is bounded by the first omitted term times
// |s+2q+1| / (Re(s)+2q+1).
ZetaValue euler_maclaurin(Complex s, long N) {
    KahanComplex acc;
    for (long k = 1; k < N; ++k) {
        const double lk = std::log(static_cast<double>(k));
        const double mag = std::exp(-s.real() * lk);
        const double ph = -s.imag() * lk;
        acc.add(Complex(mag * std::cos(ph), mag * std::sin(ph)));
    }
    const double lnN = std::log(static_cast<double>(N));
    const Complex n_pow_minus_s = std::exp(-s * lnN);

    acc.add(n_pow_minus_s * (static_cast<double>(N) / (s - 1.0)));
    acc.add(0.5 * n_pow_minus_s);

    // Bernoulli corrections; "poch" accumulates s(s+1)...(s+2j-2)
    Complex poch = s;
    double n_scale = 1.0 / static_cast<double>(N); // N^{1-2j} relative to N^{-s}... built incrementally
    // term_j = ratio_j * poch_j * N^{1-s-2j} = ratio_j * poch_j * n_pow_minus_s * N^{1-2j}
    Complex term{};
    for (int j = 1; j <= kDepth; ++j) {
        term = kBernoulliRatio[j] * poch * n_pow_minus_s * n_scale;
        acc.add(term);
        // extend the rising factorial to s(s+1)...(s+2j)
        poch *= (s + Complex(2.0 * j - 1.0, 0.0));
        poch *= (s + Complex(2.0 * j, 0.0));
        n_scale /= static_cast<double>(N) * static_cast<double>(N);
    }
    const double omitted =
        std::abs(kBernoulliRatio[kDepth + 1] * poch * n_pow_minus_s * n_scale);
    const double safety =
        std::abs(s + Complex(2.0 * kDepth + 1.0, 0.0)) / (s.real() + 2.0 * kDepth + 1.0);
    return {acc.value(), omitted * std::max(1.0, safety)};
}

} // namespace

ZetaValue zeta(Complex s, double tol) {
    if (!is_finite(s))
        throw PreconditionError("zeta: non-finite argument");
    if (s == Complex(1.0, 0.0))
        throw PreconditionError("zeta: pole at s = 1");
    if (!(s.real() > -1.0))
        throw PreconditionError("zeta: Re(s) > -1 required");
    if (!(tol > 0.0))
        throw PreconditionError("zeta: tol must be positive");

    constexpr long kMaxN = 1L << 23;
    long N = std::max<long>(20, static_cast<long>(std::ceil(std::abs(s.imag()))) + 10);
    for (;;) {
        ZetaValue zv = euler_maclaurin(s, N);
        if (zv.abs_error_estimate <= tol) return zv;
        if (N >= kMaxN)
            throw ConvergenceError("zeta: tolerance unreachable at maximum truncation length");
        N *= 2;
    }
}

double log_abs_zeta_on_line(double t, double tol) {
    const ZetaValue zv = zeta(Complex(0.5, t), tol);
    const double mod = std::abs(zv.value);
    if (mod < 1e-280)
        throw ZeroProximityError("log_abs_zeta_on_line: |zeta| under underflow guard at t = " +
                                 std::to_string(t));
    return std::log(mod);
}

} // namespace nblab
