#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "nblab/numeric.hpp"
#include "nblab/rational.hpp"
#include "nblab/step_function.hpp"

namespace nblab {

// Kernel parameter alpha in (0,1).  Rational parameters keep the breakpoint
// and value algebra exact; irrational ones use a floating fallback.
struct KernelSpec {
    double alpha = 0.0;
    Rational alpha_rat{0, 1};
    bool exact = false;

    static KernelSpec from_rational(const Rational& a);
    static KernelSpec from_double(double a);
    // "p/q" or a decimal literal (decimals are parsed exactly).
    static KernelSpec parse(const std::string& text);

    std::string str() const { return exact ? alpha_rat.str() : std::to_string(alpha); }
};

// rho_alpha(t) = {alpha/t} - alpha {1/t} = alpha floor(1/t) - floor(alpha/t),
// 0 for t > 1.
double eval_rho(const KernelSpec& spec, double t);
Rational eval_rho_exact(const Rational& alpha, const Rational& t);

// Explicit step representation on (cutoff, 1]; breakpoints are the points
// {1/n} and {alpha/m} above the cutoff.  Requires cutoff < alpha/2.
StepFunction rho_as_step(const KernelSpec& spec, const Rational& cutoff,
                         std::size_t max_breakpoints = 4'000'000);
StepFunction rho_as_step(const KernelSpec& spec, double cutoff,
                         std::size_t max_breakpoints = 4'000'000);

// (alpha - alpha^s) zeta(s) / s for Re(s) > 1/2; near s = 1 the zeta pole
// cancels the zero of alpha - alpha^s and the limit is -alpha log alpha.
Complex mellin_rho_closed(const KernelSpec& spec, Complex s, double zeta_tol = 1e-12);

// | int_cutoff^1 {1/t} t^{s-1} dt  -  (1/(s-1) - zeta(s)/s) |, the integral
// done by exact piecewise-analytic integration over (1/(n+1), 1/n].
double mellin_frac_identity_residual(Complex s, double cutoff = 1e-5,
                                     double zeta_tol = 1e-12);

// ---------------------------------------------------------------------------
// Lazy merged sweep over the interval structure of a kernel family.
//
// A family of J kernels induces breakpoints {1/n} and {alpha_j/m}.  The sweep
// enumerates the merged intervals of (cutoff, 1] in ascending order without
// materializing them (the default cutoff 1e-8 would need ~1e8 breakpoints per
// kernel) and hands each interval's exact kernel values to a visitor.
//
// The range is pre-split into kChunks fixed subranges (uniform in 1/t, so
// chunks carry equal numbers of intervals); chunks may run in parallel and
// are reduced in ascending-t order, which keeps results independent of the
// thread count.
// ---------------------------------------------------------------------------

inline constexpr std::size_t kSweepChunks = 4096;

class SweepPlan {
public:
    SweepPlan(const std::vector<KernelSpec>& kernels, double cutoff);

    std::size_t kernel_count() const { return p_.size(); }
    double cutoff() const { return cutoff_; }

    // chunk k covers (lower_bound(k+1), lower_bound(k)], k in [0, kSweepChunks)
    double chunk_edge(std::size_t k) const;

    // Visitor: void(const double* rho_values, double dt)
    //
    // Kernel values are maintained incrementally (a reciprocal-family event
    // shifts every rho_j by -alpha_j, an alpha_j event shifts rho_j by +1)
    // and resynchronized from the exact counter form every 2^16 events, so
    // accumulated drift stays below 1.5e-11 while the hot loop carries one
    // division and a handful of adds per interval.
    template <class Visitor>
    void sweep_chunk(std::size_t k, Visitor&& visit) const {
        const double lo = chunk_edge(k + 1);
        const double hi = chunk_edge(k);
        if (!(lo < hi)) return;
        const std::size_t nj = p_.size();
        // counter 0 tracks floor(1/t); counter j+1 tracks floor(alpha_j/t)
        std::int64_t cnt[kMaxKernels + 1];
        double pos[kMaxKernels + 1];
        double rho[kMaxKernels];
        const std::size_t nf = nj + 1;
        for (std::size_t i = 0; i < nf; ++i) {
            const double c = i == 0 ? 1.0 : alpha_[i - 1];
            std::int64_t n = static_cast<std::int64_t>(std::ceil(c / lo)) - 1;
            if (n < 0) n = 0;
            cnt[i] = n;
            pos[i] = n > 0 ? c / static_cast<double>(n)
                           : std::numeric_limits<double>::infinity();
        }
        auto resync = [&] {
            const std::int64_t n = cnt[0];
            for (std::size_t j = 0; j < nj; ++j) {
                if (exact_[j]) {
                    const std::int64_t num = static_cast<std::int64_t>(
                        (__int128)p_[j] * n - (__int128)q_[j] * cnt[j + 1]);
                    rho[j] = static_cast<double>(num) * inv_q_[j];
                } else {
                    // alpha*n exactly via fma; the big parts cancel exactly
                    double hi_p, lo_p;
                    two_prod(alpha_[j], static_cast<double>(n), hi_p, lo_p);
                    rho[j] = (hi_p - static_cast<double>(cnt[j + 1])) + lo_p;
                }
            }
        };
        resync();
        std::uint32_t until_resync = 1u << 16;
        double prev = lo;
        for (;;) {
            double e = pos[0];
            for (std::size_t i = 1; i < nf; ++i) e = std::min(e, pos[i]);
            const double right = std::min(e, hi);
            const double dt = right - prev;
            if (dt > 0.0) visit(rho, dt);
            if (e >= hi) break;
            prev = e;
            if (pos[0] == e) {
                if (--cnt[0] > 0)
                    pos[0] = 1.0 / static_cast<double>(cnt[0]);
                else
                    pos[0] = std::numeric_limits<double>::infinity();
                for (std::size_t j = 0; j < nj; ++j) rho[j] -= alpha_[j];
            }
            for (std::size_t i = 1; i < nf; ++i) {
                if (pos[i] == e) {
                    if (--cnt[i] > 0)
                        pos[i] = alpha_[i - 1] / static_cast<double>(cnt[i]);
                    else
                        pos[i] = std::numeric_limits<double>::infinity();
                    rho[i - 1] += 1.0;
                }
            }
            if (--until_resync == 0) {
                resync();
                until_resync = 1u << 16;
            }
        }
    }

    static constexpr std::size_t kMaxKernels = 64;

private:
    double cutoff_;
    double span_u_; // 1/cutoff - 1
    std::vector<double> alpha_;
    std::vector<std::int64_t> p_, q_;
    std::vector<double> inv_q_;
    std::vector<char> exact_;
};

// <rho_a, rho_b> over (cutoff, 1] by the lazy sweep; bound = cutoff (tail
// bounds of kernel functions are 1).
InnerProductResult kernel_inner_product(const KernelSpec& a, const KernelSpec& b,
                                        double cutoff);

// <1, rho_a>; equals -alpha log alpha up to the cutoff tail.
InnerProductResult kernel_one_inner_product(const KernelSpec& a, double cutoff);

// ||1 - sum_j coeff_j rho_{alpha_j}||^2 over (cutoff, 1].
InnerProductResult residual_norm_sq(const std::vector<KernelSpec>& kernels,
                                    const std::vector<double>& coeffs,
                                    double cutoff);

} // namespace nblab
