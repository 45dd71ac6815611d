#include "nblab/kernels.hpp"

#include <algorithm>
#include <cctype>

#include "nblab/errors.hpp"
#include "nblab/parallel.hpp"
#include "nblab/zeta.hpp"

namespace nblab {

// --------------------------------------------------------------------------
// KernelSpec
// --------------------------------------------------------------------------

KernelSpec KernelSpec::from_rational(const Rational& a) {
    if (!(Rational(0) < a && a < Rational(1)))
        throw PreconditionError("kernel alpha must lie in (0, 1)");
    KernelSpec k;
    k.alpha_rat = a;
    k.alpha = a.to_double();
    k.exact = true;
    return k;
}

KernelSpec KernelSpec::from_double(double a) {
    if (!(a > 0.0 && a < 1.0))
        throw PreconditionError("kernel alpha must lie in (0, 1)");
    KernelSpec k;
    k.alpha = a;
    k.exact = false;
    return k;
}

KernelSpec KernelSpec::parse(const std::string& text) {
    return from_rational(Rational::parse(text));
}

// Rational::parse lives here to keep rational.hpp header-only-light.
Rational Rational::parse(const std::string& text) {
    auto bad = [&] { throw ParseError("not a rational or decimal literal: '" + text + "'"); };
    std::string s = text;
    s.erase(std::remove_if(s.begin(), s.end(),
                           [](unsigned char c) { return std::isspace(c); }),
            s.end());
    if (s.empty()) bad();
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
        std::int64_t p = 0, q = 0;
        try {
            p = std::stoll(s.substr(0, slash));
            q = std::stoll(s.substr(slash + 1));
        } catch (const std::logic_error&) {
            bad();
        }
        return Rational::make(p, q);
    }
    // decimal with optional exponent: sign, digits, '.', digits, e[+-]digits
    std::size_t i = 0;
    bool neg = false;
    if (s[i] == '+' || s[i] == '-') { neg = s[i] == '-'; ++i; }
    __int128 mant = 0;
    int frac_digits = 0;
    bool seen_digit = false, seen_dot = false;
    for (; i < s.size(); ++i) {
        const char c = s[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            mant = mant * 10 + (c - '0');
            if (mant > (__int128)INT64_MAX * 100) bad(); // keep things sane
            if (seen_dot) ++frac_digits;
            seen_digit = true;
        } else if (c == '.' && !seen_dot) {
            seen_dot = true;
        } else if ((c == 'e' || c == 'E') && seen_digit) {
            break;
        } else {
            bad();
        }
    }
    int expo = 0;
    if (i < s.size()) {
        try {
            expo = std::stoi(s.substr(i + 1));
        } catch (const std::logic_error&) {
            bad();
        }
    }
    if (!seen_digit) bad();
    int net = expo - frac_digits;
    __int128 num = neg ? -mant : mant;
    __int128 den = 1;
    while (net > 0) { num *= 10; --net; if (num > (__int128)INT64_MAX || num < -(__int128)INT64_MAX) bad(); }
    while (net < 0) { den *= 10; ++net; if (den > (__int128)INT64_MAX) bad(); }
    return Rational::make(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

// --------------------------------------------------------------------------
// Pointwise kernel
// --------------------------------------------------------------------------

double eval_rho(const KernelSpec& spec, double t) {
    if (!(t > 0.0))
        throw PreconditionError("eval_rho: t > 0 required");
    if (t > 1.0) return 0.0;
    const double n = std::floor(1.0 / t);
    const double m = std::floor(spec.alpha / t);
    return spec.alpha * n - m;
}

Rational eval_rho_exact(const Rational& alpha, const Rational& t) {
    if (!(Rational(0) < t))
        throw PreconditionError("eval_rho_exact: t > 0 required");
    if (Rational(1) < t) return Rational(0);
    const Rational inv_t = Rational(1) / t;
    const Rational a_over_t = alpha / t;
    return alpha * Rational(inv_t.floor()) - Rational(a_over_t.floor());
}

// --------------------------------------------------------------------------
// Explicit step representation
// --------------------------------------------------------------------------

namespace {

// Largest n with n*c < bound, i.e. c/n > bound for breakpoints c/n.
std::int64_t last_index_above(const Rational& c, const Rational& bound) {
    const Rational x = c / bound;
    std::int64_t n = x.floor();
    if (Rational(n) == x) --n; // c/n == bound is excluded (breakpoints > cutoff)
    return n;
}

} // namespace

StepFunction rho_as_step(const KernelSpec& spec, const Rational& cutoff,
                         std::size_t max_breakpoints) {
    if (!spec.exact)
        return rho_as_step(spec, cutoff.to_double(), max_breakpoints);
    const Rational& a = spec.alpha_rat;
    if (!(Rational(0) < cutoff && cutoff + cutoff < a))
        throw PreconditionError("rho_as_step: cutoff must satisfy 0 < cutoff < alpha/2");
    const std::int64_t n_max = last_index_above(Rational(1), cutoff);
    const std::int64_t m_max = last_index_above(a, cutoff);
    if (static_cast<std::size_t>(n_max) + static_cast<std::size_t>(m_max) >
        max_breakpoints)
        throw PreconditionError(
            "rho_as_step: cutoff too small for an explicit representation; "
            "use the sweep-based inner products instead");
    std::vector<Rational> bp, val;
    bp.reserve(static_cast<std::size_t>(n_max + m_max));
    val.reserve(bp.capacity());
    std::int64_t n = n_max, m = m_max;
    while (n >= 1 || m >= 1) {
        // next breakpoint ascending: min(1/n, a/m)
        Rational b{0, 1};
        bool take_n = false, take_m = false;
        if (n >= 1 && m >= 1) {
            const Rational bn{1, n};
            const Rational bm = a / Rational(m);
            if (bn < bm) { b = bn; take_n = true; }
            else if (bm < bn) { b = bm; take_m = true; }
            else { b = bn; take_n = take_m = true; }
        } else if (n >= 1) {
            b = Rational{1, n};
            take_n = true;
        } else {
            b = a / Rational(m);
            take_m = true;
        }
        // value on the interval ending at b: floor counts at t = b
        val.push_back(a * Rational(n) - Rational(m));
        bp.push_back(b);
        if (take_n) --n;
        if (take_m) --m;
    }
    return StepFunction::from_rational(std::move(bp), std::move(val), cutoff, 1.0);
}

StepFunction rho_as_step(const KernelSpec& spec, double cutoff,
                         std::size_t max_breakpoints) {
    const double a = spec.alpha;
    if (!(cutoff > 0.0 && 2.0 * cutoff < a))
        throw PreconditionError("rho_as_step: cutoff must satisfy 0 < cutoff < alpha/2");
    const auto n_max = static_cast<std::int64_t>(std::ceil(1.0 / cutoff)) - 1;
    const auto m_max = static_cast<std::int64_t>(std::ceil(a / cutoff)) - 1;
    if (static_cast<std::size_t>(n_max) + static_cast<std::size_t>(m_max) >
        max_breakpoints)
        throw PreconditionError(
            "rho_as_step: cutoff too small for an explicit representation; "
            "use the sweep-based inner products instead");
    std::vector<double> bp, val;
    bp.reserve(static_cast<std::size_t>(n_max + m_max));
    val.reserve(bp.capacity());
    std::int64_t n = n_max, m = m_max;
    while (n >= 1 || m >= 1) {
        double b;
        bool take_n = false, take_m = false;
        const double bn = n >= 1 ? 1.0 / static_cast<double>(n) : 2.0;
        const double bm = m >= 1 ? a / static_cast<double>(m) : 2.0;
        if (bn <= bm) take_n = true;
        if (bm <= bn) take_m = true;
        b = std::min(bn, bm);
        double hi_p, lo_p;
        two_prod(a, static_cast<double>(n), hi_p, lo_p);
        val.push_back((hi_p - static_cast<double>(m)) + lo_p);
        bp.push_back(b);
        if (take_n) --n;
        if (take_m) --m;
    }
    if (bp.empty() || bp.back() != 1.0) {
        bp.push_back(1.0);
        val.push_back(a);
    }
    return StepFunction::from_double(std::move(bp), std::move(val), cutoff, 1.0);
}

// --------------------------------------------------------------------------
// Mellin closed forms
// --------------------------------------------------------------------------

Complex mellin_rho_closed(const KernelSpec& spec, Complex s, double zeta_tol) {
    if (!is_finite(s) || !(s.real() > 0.5))
        throw PreconditionError("mellin_rho_closed: Re(s) > 1/2 required");
    const double a = spec.alpha;
    if (std::abs(s - Complex(1.0, 0.0)) < 1e-8)
        return Complex(-a * std::log(a), 0.0);
    const Complex a_pow_s = std::exp(s * std::log(a));
    return (a - a_pow_s) * zeta(s, zeta_tol).value / s;
}

double mellin_frac_identity_residual(Complex s, double cutoff, double zeta_tol) {
    if (!is_finite(s) || !(s.real() > 1.0))
        throw PreconditionError("mellin_frac_identity_residual: Re(s) > 1 required");
    if (!(cutoff > 0.0 && cutoff < 0.5))
        throw PreconditionError("mellin_frac_identity_residual: bad cutoff");
    // int {1/t} t^{s-1} dt over (1/(n+1), 1/n] = [t^{s-1}/(s-1) - n t^s/s]
    KahanComplex acc;
    const Complex sm1 = s - 1.0;
    auto antideriv = [&](double t, double n) {
        const double lt = std::log(t);
        return std::exp(sm1 * lt) / sm1 - n * std::exp(s * lt) / s;
    };
    for (std::int64_t n = 1;; ++n) {
        const double hi = 1.0 / static_cast<double>(n);
        const double lo = 1.0 / static_cast<double>(n + 1);
        const double nn = static_cast<double>(n);
        acc.add(antideriv(hi, nn) - antideriv(std::max(lo, cutoff), nn));
        if (lo <= cutoff) break;
    }
    const Complex lhs = acc.value();
    const Complex rhs = 1.0 / sm1 - zeta(s, zeta_tol).value / s;
    return std::abs(lhs - rhs);
}

// --------------------------------------------------------------------------
// Lazy sweeps
// --------------------------------------------------------------------------

SweepPlan::SweepPlan(const std::vector<KernelSpec>& kernels, double cutoff) {
    if (!(cutoff > 0.0 && cutoff < 1.0))
        throw PreconditionError("sweep: cutoff must lie in (0, 1)");
    if (cutoff < 1e-12)
        throw PreconditionError("sweep: cutoff below 1e-12 not supported");
    if (kernels.size() > kMaxKernels)
        throw PreconditionError("sweep: too many kernels in one family");
    cutoff_ = cutoff;
    span_u_ = 1.0 / cutoff - 1.0;
    for (const auto& k : kernels) {
        alpha_.push_back(k.alpha);
        exact_.push_back(k.exact ? 1 : 0);
        if (k.exact) {
            if (k.alpha_rat.den > 2'000'000'000LL)
                throw PreconditionError("sweep: kernel denominator too large");
            p_.push_back(k.alpha_rat.num);
            q_.push_back(k.alpha_rat.den);
            inv_q_.push_back(1.0 / static_cast<double>(k.alpha_rat.den));
        } else {
            p_.push_back(0);
            q_.push_back(1);
            inv_q_.push_back(1.0);
        }
    }
}

double SweepPlan::chunk_edge(std::size_t k) const {
    if (k == 0) return 1.0;
    if (k >= kSweepChunks) return cutoff_;
    const double u = 1.0 + span_u_ * (static_cast<double>(k) /
                                      static_cast<double>(kSweepChunks));
    return 1.0 / u;
}

namespace {

// Shared chunk-parallel driver.  Within a chunk the running partial stays
// around 1/kSweepChunks of the final value, so plain accumulation loses at
// most ~1e-9 in the worst case even over 1e10 intervals; the cross-chunk
// reduction is compensated and runs in ascending-t order (highest chunk
// index first), independent of the thread count.
template <class MakeVisit>
double run_chunked(const SweepPlan& plan, MakeVisit&& make_visit) {
    std::vector<double> slots(kSweepChunks, 0.0);
    parallel_for(kSweepChunks, [&](std::size_t k) {
        double acc = 0.0;
        plan.sweep_chunk(k, make_visit(acc));
        slots[k] = acc;
    });
    Kahan total;
    for (std::size_t k = kSweepChunks; k-- > 0;) total.add(slots[k]);
    return total.value();
}

} // namespace

InnerProductResult kernel_inner_product(const KernelSpec& a, const KernelSpec& b,
                                        double cutoff) {
    const bool same = a.exact && b.exact ? a.alpha_rat == b.alpha_rat
                                         : (a.exact == b.exact && a.alpha == b.alpha);
    std::vector<KernelSpec> fam = same ? std::vector<KernelSpec>{a}
                                       : std::vector<KernelSpec>{a, b};
    SweepPlan plan(fam, cutoff);
    double value;
    if (same) {
        value = run_chunked(plan, [](double& acc) {
            return [&acc](const double* rho, double dt) {
                acc += rho[0] * rho[0] * dt;
            };
        });
    } else {
        value = run_chunked(plan, [](double& acc) {
            return [&acc](const double* rho, double dt) {
                acc += rho[0] * rho[1] * dt;
            };
        });
    }
    return {value, cutoff};
}

InnerProductResult kernel_one_inner_product(const KernelSpec& a, double cutoff) {
    SweepPlan plan({a}, cutoff);
    const double value = run_chunked(plan, [](double& acc) {
        return [&acc](const double* rho, double dt) { acc += rho[0] * dt; };
    });
    return {value, cutoff};
}

InnerProductResult residual_norm_sq(const std::vector<KernelSpec>& kernels,
                                    const std::vector<double>& coeffs,
                                    double cutoff) {
    if (kernels.size() != coeffs.size())
        throw PreconditionError("residual_norm_sq: kernel/coefficient size mismatch");
    SweepPlan plan(kernels, cutoff);
    const std::size_t nj = kernels.size();
    const double* c = coeffs.data();
    const double value = run_chunked(plan, [&](double& acc) {
        return [&acc, c, nj](const double* rho, double dt) {
            double r = 1.0;
            for (std::size_t j = 0; j < nj; ++j) r -= c[j] * rho[j];
            acc += r * r * dt;
        };
    });
    double amp = 1.0;
    for (double cj : coeffs) amp += std::abs(cj);
    return {value, cutoff * amp * amp};
}

} // namespace nblab
