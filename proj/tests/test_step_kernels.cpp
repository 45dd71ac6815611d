#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nblab/errors.hpp"
#include "nblab/kernels.hpp"
#include "nblab/step_function.hpp"
#include "oracles.hpp"

using nblab::Complex;
using nblab::KernelSpec;
using nblab::Rational;
using nblab::StepFunction;

TEST_CASE("pointwise kernel values") {
    const auto half = KernelSpec::parse("1/2");
    CHECK(nblab::eval_rho(half, 1.5) == 0.0);
    CHECK(nblab::eval_rho(KernelSpec::from_double(0.777), 1.0001) == 0.0);
    CHECK(nblab::eval_rho(half, 0.7) == 0.5); // {5/7} - (1/2){10/7} = 1/2
    CHECK_THROWS_AS((void)nblab::eval_rho(half, 0.0), nblab::PreconditionError);

    // on (max(alpha, 1/2), 1] the value is exactly alpha
    std::mt19937 rng(11);
    for (int k = 0; k < 50; ++k) {
        const auto a = oracles::random_rational(rng, 40, true);
        const auto spec = KernelSpec::from_rational(a);
        std::uniform_real_distribution<double> t(std::max(a.to_double(), 0.5) + 1e-6, 1.0);
        CHECK(nblab::eval_rho(spec, t(rng)) == spec.alpha);
    }
}

TEST_CASE("fractional-part identity, exact rational arithmetic") {
    std::mt19937 rng(20240812);
    for (int k = 0; k < 1000; ++k) {
        const Rational alpha = oracles::random_rational(rng, 60, true);
        const Rational t = oracles::random_rational(rng, 60, false); // in (0, 2]
        // {alpha/t} - alpha {1/t}
        const Rational lhs =
            (alpha / t).frac() - alpha * (Rational(1) / t).frac();
        CHECK(lhs == nblab::eval_rho_exact(alpha, t));
    }
}

TEST_CASE("kernel bounds on random samples") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> ad(0.01, 0.99), td(1e-4, 1.0);
    for (int k = 0; k < 2000; ++k) {
        const double a = ad(rng);
        const double v = nblab::eval_rho(KernelSpec::from_double(a), td(rng));
        CHECK(std::abs(v) <= 1.0);
        CHECK(v > -a - 1e-15);
        CHECK(v < 1.0);
    }
}

TEST_CASE("step representation of rho_{1/2} at cutoff 1/5") {
    const auto f = nblab::rho_as_step(KernelSpec::parse("1/2"), Rational(1, 5));
    REQUIRE(f.size() == 4);
    CHECK(f.breakpoint_rational(0) == Rational(1, 4));
    CHECK(f.breakpoint_rational(1) == Rational(1, 3));
    CHECK(f.breakpoint_rational(2) == Rational(1, 2));
    CHECK(f.breakpoint_rational(3) == Rational(1));
    CHECK(f.value_rational(0) == Rational(0));
    CHECK(f.value_rational(1) == Rational(1, 2));
    CHECK(f.value_rational(2) == Rational(0));
    CHECK(f.value_rational(3) == Rational(1, 2)); // equals alpha on (1/2, 1]
}

TEST_CASE("step values match eval_rho at interval midpoints") {
    std::mt19937 rng(17);
    for (int k = 0; k < 10; ++k) {
        const Rational a = oracles::random_rational(rng, 30, true);
        const Rational cutoff{1, 97};
        if (!(cutoff + cutoff < a)) continue;
        const auto spec = KernelSpec::from_rational(a);
        const auto f = nblab::rho_as_step(spec, cutoff);
        double prev = f.cutoff();
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double mid = 0.5 * (prev + f.breakpoint(i));
            CHECK(f.value(i) == doctest::Approx(nblab::eval_rho(spec, mid)).epsilon(1e-13));
            prev = f.breakpoint(i);
        }
        // canonical: no two adjacent equal values
        for (std::size_t i = 0; i + 1 < f.size(); ++i)
            CHECK(f.value_rational(i) != f.value_rational(i + 1));
    }
    CHECK_THROWS_AS((void)nblab::rho_as_step(KernelSpec::parse("1/2"), Rational(1, 3)),
                    nblab::PreconditionError);
}

TEST_CASE("pairing <1, rho_alpha> against -alpha log alpha") {
    for (const char* text : {"1/2", "1/3", "2/3", "1/10"}) {
        const auto spec = KernelSpec::parse(text);
        const auto ip = nblab::kernel_one_inner_product(spec, 1e-6);
        const double a = spec.alpha;
        CHECK(std::abs(ip.value - (-a * std::log(a))) <= ip.abs_error_bound + 1e-9);
    }
}

TEST_CASE("lazy sweep and explicit sweep agree at a common cutoff") {
    const auto a = KernelSpec::parse("1/2");
    const auto b = KernelSpec::parse("1/3");
    const Rational cutoff{1, 10000};
    const auto fa = nblab::rho_as_step(a, cutoff);
    const auto fb = nblab::rho_as_step(b, cutoff);
    const auto explicit_ip = nblab::inner_product(fa, fb);
    const auto lazy_ip = nblab::kernel_inner_product(a, b, cutoff.to_double());
    CHECK(std::abs(explicit_ip.value - lazy_ip.value) < 1e-12);
}

TEST_CASE("inner product basics") {
    const auto fa = nblab::rho_as_step(KernelSpec::parse("2/5"), Rational(1, 1000));
    const auto fb = nblab::rho_as_step(KernelSpec::parse("1/3"), Rational(1, 1000));
    const auto ab = nblab::inner_product(fa, fb);
    const auto ba = nblab::inner_product(fb, fa);
    CHECK(ab.value == ba.value); // bit-exact commutative sweep
    CHECK(nblab::inner_product(fa, fa).value >= 0.0);

    // re-truncation to the larger cutoff
    const auto fc = nblab::rho_as_step(KernelSpec::parse("2/5"), Rational(1, 100));
    const auto mixed = nblab::inner_product(fc, fb);
    CHECK(mixed.abs_error_bound == doctest::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("Cauchy-Schwarz within error bounds for random kernel pairs") {
    std::mt19937 rng(23);
    for (int k = 0; k < 100; ++k) {
        const auto a = KernelSpec::from_rational(oracles::random_rational(rng, 50, true));
        const auto b = KernelSpec::from_rational(oracles::random_rational(rng, 50, true));
        const double eps = 1e-5;
        const auto gab = nblab::kernel_inner_product(a, b, eps);
        const auto gaa = nblab::kernel_inner_product(a, a, eps);
        const auto gbb = nblab::kernel_inner_product(b, b, eps);
        const double lhs = gab.value * gab.value;
        const double rhs = (gaa.value + gaa.abs_error_bound) *
                           (gbb.value + gbb.abs_error_bound);
        CHECK(lhs <= rhs + 2.0 * gab.abs_error_bound + 1e-12);
    }
}

TEST_CASE("Mellin transform of step functions") {
    const auto one = StepFunction::constant_one(1e-6);
    const auto m = nblab::mellin_step(one, Complex(2, 0));
    CHECK(std::abs(m.value - Complex(0.5, 0)) <= m.abs_error_bound + 1e-15);

    // spot value: rho-hat_{1/2}(2) = pi^2/48
    const double pi2_48 = 0.205616758356028305;
    const auto half = KernelSpec::parse("1/2");
    const auto f = nblab::rho_as_step(half, Rational(1, 100000));
    const auto mf = nblab::mellin_step(f, Complex(2, 0));
    CHECK(std::abs(mf.value - Complex(pi2_48, 0)) <= mf.abs_error_bound + 1e-10);

    // closed form against the step sweep at complex s
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> res(0.6, 3.0), ims(-3.0, 3.0);
    for (int k = 0; k < 10; ++k) {
        const Complex s(res(rng), ims(rng));
        const auto sweep = nblab::mellin_step(f, s);
        const auto closed = nblab::mellin_rho_closed(half, s);
        CHECK(std::abs(sweep.value - closed) <= sweep.abs_error_bound + 1e-9);
    }

    // linearity under exact pointwise sum
    const auto fa = nblab::rho_as_step(KernelSpec::parse("1/2"), Rational(1, 500));
    const auto fb = nblab::rho_as_step(KernelSpec::parse("2/7"), Rational(1, 500));
    const auto sum = StepFunction::linear_combination(
        {{Rational(1), &fa}, {Rational(1), &fb}});
    const Complex s(1.5, 0.7);
    const auto lhs = nblab::mellin_step(sum, s).value;
    const auto rhs = nblab::mellin_step(fa, s).value + nblab::mellin_step(fb, s).value;
    CHECK(std::abs(lhs - rhs) < 1e-13);

    CHECK_THROWS_AS((void)nblab::mellin_step(one, Complex(-1, 0)),
                    nblab::PreconditionError);
}

TEST_CASE("Mellin closed form: limits and reference points") {
    const auto half = KernelSpec::parse("1/2");
    // s -> 1 limit is <1, rho_alpha> = -alpha log alpha
    const Complex at_limit = nblab::mellin_rho_closed(half, Complex(1.0 + 1e-9, 0));
    CHECK(std::abs(at_limit - Complex(0.5 * std::log(2.0), 0)) < 1e-12);
    // near-limit continuity
    const Complex near = nblab::mellin_rho_closed(half, Complex(1.0 + 1e-7, 0));
    CHECK(std::abs(near - at_limit) < 1e-6);
    // s = 4: (1/2 - 1/16) zeta(4) / 4
    const auto o4 = oracles::zeta_series_tail(4.0, 20'000);
    const Complex at4 = nblab::mellin_rho_closed(half, Complex(4, 0));
    CHECK(std::abs(at4.real() - (0.5 - 1.0 / 16.0) * o4.value / 4.0) < 1e-11);
    CHECK_THROWS_AS((void)nblab::mellin_rho_closed(half, Complex(0.4, 0)),
                    nblab::PreconditionError);
}

TEST_CASE("Dirichlet identity residual") {
    CHECK(nblab::mellin_frac_identity_residual(Complex(2, 0)) <= 1e-8);
    CHECK(nblab::mellin_frac_identity_residual(Complex(3, 0)) <= 1e-8);
    const double rp = nblab::mellin_frac_identity_residual(Complex(2.5, 1.0));
    const double rm = nblab::mellin_frac_identity_residual(Complex(2.5, -1.0));
    CHECK(rp <= 1e-8);
    CHECK(std::abs(rp - rm) < 1e-12); // conjugate reflection
    CHECK_THROWS_AS((void)nblab::mellin_frac_identity_residual(Complex(0.9, 0)),
                    nblab::PreconditionError);
}

namespace {

// U(lambda) rho_alpha == lambda^{-1/2} (rho_{alpha lambda} - alpha rho_lambda)
bool semigroup_identity_exact(const Rational& alpha, const Rational& lambda,
                              const Rational& eps) {
    const auto rho_a = nblab::rho_as_step(KernelSpec::from_rational(alpha), eps);
    const auto lhs = nblab::semigroup_apply(lambda, rho_a);
    const Rational cut = lambda * eps;
    const auto rho_al =
        nblab::rho_as_step(KernelSpec::from_rational(alpha * lambda), cut);
    const auto rho_l = nblab::rho_as_step(KernelSpec::from_rational(lambda), cut);
    const auto combo = StepFunction::linear_combination(
        {{Rational(1), &rho_al}, {Rational(0) - alpha, &rho_l}});
    const auto rhs = combo.scaled(1.0 / std::sqrt(lambda.to_double()));
    return lhs == rhs;
}

} // namespace

TEST_CASE("dilation semigroup") {
    const auto f = nblab::rho_as_step(KernelSpec::parse("1/2"), Rational(1, 100));
    CHECK(nblab::semigroup_apply(Rational(1), f) == f); // unit dilation

    CHECK(semigroup_identity_exact({1, 2}, {1, 2}, {1, 1000}));
    CHECK(semigroup_identity_exact({3, 10}, {4, 5}, {1, 1000}));
    std::mt19937 rng(41);
    for (int k = 0; k < 5; ++k) {
        const auto a = oracles::random_rational(rng, 20, true);
        const auto l = oracles::random_rational(rng, 20, true);
        const Rational eps = Rational(1, 400) * a; // < alpha/2 and < alpha*lambda/2
        CHECK(semigroup_identity_exact(a, l, eps));
    }

    // contraction on the represented domain
    const auto uf = nblab::semigroup_apply(Rational(2, 5), f);
    const double norm_f = nblab::inner_product(f, f).value;
    const double norm_uf = nblab::inner_product(uf, uf).value;
    CHECK(norm_uf <= norm_f + 1e-12);

    // floating fallback: pointwise dilation law at sample points
    const auto g = nblab::rho_as_step(KernelSpec::from_double(0.6180339887498949), 1e-3);
    const double lam = 0.73;
    const auto ug = nblab::semigroup_apply(lam, g);
    for (double t : {0.02, 0.11, 0.4, 0.72}) {
        CHECK(ug.eval(t) ==
              doctest::Approx(g.eval(t / lam) / std::sqrt(lam)).epsilon(1e-12));
    }
    CHECK(ug.eval(0.9) == 0.0); // vanishes beyond lambda
}

TEST_CASE("residual norm sweep") {
    // ||1 - c rho_alpha||^2 expands to 1 - 2c<1,rho> + c^2 ||rho||^2
    const auto spec = KernelSpec::parse("1/2");
    const double eps = 1e-6;
    const double c = 1.7;
    const auto r = nblab::residual_norm_sq({spec}, {c}, eps);
    const double v = nblab::kernel_one_inner_product(spec, eps).value;
    const double g = nblab::kernel_inner_product(spec, spec, eps).value;
    CHECK(std::abs(r.value - (1.0 - eps - 2.0 * c * v + c * c * g)) < 1e-10);
}
