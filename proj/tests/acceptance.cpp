// Acceptance suite: one pass/fail line per criterion.
//
// Every criterion is executed twice, at 8 worker threads and at 1, and must
// produce byte-identical payloads (criterion 12).  Thresholds are fixed here,
// in code; nothing is calibrated at run time.

#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nblab/blaschke.hpp"
#include "nblab/gram.hpp"
#include "nblab/kernels.hpp"
#include "nblab/line_integrals.hpp"
#include "nblab/parallel.hpp"
#include "nblab/step_function.hpp"
#include "nblab/zero_table.hpp"
#include "nblab/zeta.hpp"
#include "oracles.hpp"

using nblab::Complex;
using nblab::KernelSpec;
using nblab::LineFunction;
using nblab::LineQuadratureSpec;
using nblab::Rational;
using nblab::StepFunction;
using nblab::ZeroMultiset;

namespace {

const std::string kDataDir = NBLAB_DATA_DIR;

struct Report {
    bool pass = true;
    std::string payload; // deterministic digest of every computed value
    std::string detail;

    void value(double x) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        payload += buf;
        payload += ';';
    }
    void value(Complex z) {
        value(z.real());
        value(z.imag());
    }
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

LineQuadratureSpec quad(double T) {
    LineQuadratureSpec q;
    q.truncation_height = T;
    return q;
}

// ---- criterion bodies ------------------------------------------------------

void criterion_1_zeta(Report& r) {
    const auto z2 = nblab::zeta(Complex(2, 0), 1e-12);
    const auto z4 = nblab::zeta(Complex(4, 0), 1e-12);
    r.value(z2.value);
    r.value(z4.value);
    r.require(std::abs(z2.value.real() - 1.6449340668482264) < 1e-10 &&
                  std::abs(z2.value.imag()) < 1e-12,
              "zeta(2) vs pi^2/6: " + fmt(std::abs(z2.value.real() - 1.6449340668482264)));
    r.require(std::abs(z4.value.real() - 1.0823232337111382) < 1e-10,
              "zeta(4) vs pi^4/90: " + fmt(std::abs(z4.value.real() - 1.0823232337111382)));

    // cross-check the pinned constants against the series-plus-tail oracle
    const auto o2 = oracles::zeta_series_tail(2.0, 2'000'000);
    const auto o4 = oracles::zeta_series_tail(4.0, 40'000);
    r.require(std::abs(o2.value - 1.6449340668482264) <= o2.halfwidth + 1e-12,
              "series oracle disagrees at s=2");
    r.require(std::abs(o4.value - 1.0823232337111382) <= o4.halfwidth + 1e-12,
              "series oracle disagrees at s=4");

    const auto table = nblab::ZeroTable::load(kDataDir + "/zeros100.txt");
    for (int i = 0; i < 10; ++i) {
        const double g = table.ordinates()[static_cast<std::size_t>(i)];
        const double mod = std::abs(nblab::zeta(Complex(0.5, g), 1e-10).value);
        r.value(mod);
        r.require(mod < 1e-5, "|zeta(1/2+i g_" + std::to_string(i + 1) +
                                  ")| = " + fmt(mod));
    }
}

void criterion_2_kernel_identities(Report& r) {
    std::mt19937 rng(240812);
    long ok = 0;
    for (int k = 0; k < 10000; ++k) {
        const Rational alpha = oracles::random_rational(rng, 80, true);
        const Rational t = oracles::random_rational(rng, 80, false);
        const Rational lhs = (alpha / t).frac() - alpha * (Rational(1) / t).frac();
        const Rational rhs = nblab::eval_rho_exact(alpha, t);
        if (lhs == rhs) ++ok;
    }
    r.value(static_cast<double>(ok));
    r.require(ok == 10000, "fractional-part identity failed on " +
                               std::to_string(10000 - ok) + " samples");

    std::uniform_real_distribution<double> above(1.0000001, 50.0);
    bool vanish = true;
    for (int k = 0; k < 100; ++k)
        vanish = vanish &&
                 nblab::eval_rho(KernelSpec::from_double(0.37), above(rng)) == 0.0;
    r.require(vanish, "rho_alpha must vanish identically beyond t = 1");

    long sg_ok = 0;
    for (int k = 0; k < 20; ++k) {
        const Rational a = oracles::random_rational(rng, 25, true);
        const Rational l = oracles::random_rational(rng, 25, true);
        const Rational eps = Rational(1, 500) * a;
        const auto rho_a = nblab::rho_as_step(KernelSpec::from_rational(a), eps);
        const auto lhs = nblab::semigroup_apply(l, rho_a);
        const Rational cut = l * eps;
        const auto rho_al =
            nblab::rho_as_step(KernelSpec::from_rational(a * l), cut);
        const auto rho_l = nblab::rho_as_step(KernelSpec::from_rational(l), cut);
        const auto combo = StepFunction::linear_combination(
            {{Rational(1), &rho_al}, {Rational(0) - a, &rho_l}});
        if (lhs == combo.scaled(1.0 / std::sqrt(l.to_double()))) ++sg_ok;
    }
    r.value(static_cast<double>(sg_ok));
    r.require(sg_ok == 20, "semigroup identity failed on " +
                               std::to_string(20 - sg_ok) + " of 20 pairs");
}

void criterion_3_pairing(Report& r) {
    const char* alphas[] = {"1/10", "1/4", "1/3", "1/2", "9/10"};
    for (const char* text : alphas) {
        const auto spec = KernelSpec::parse(text);
        const auto ip = nblab::kernel_one_inner_product(spec, 1e-10);
        const double target = -spec.alpha * std::log(spec.alpha);
        r.value(ip.value);
        r.require(std::abs(ip.value - target) < 1e-8,
                  std::string("<1, rho_") + text +
                      "> off by " + fmt(std::abs(ip.value - target)));
    }
}

void criterion_4_mellin_consistency(Report& r) {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> res(0.6, 3.0), ims(-4.0, 4.0);
    const Rational cutoff(1, 100000);
    long ok = 0;
    for (int k = 0; k < 50; ++k) {
        const Rational a = oracles::random_rational(rng, 60, true);
        if (!(cutoff + cutoff < a)) { ++ok; continue; } // alpha too small for this cutoff
        const Complex s(res(rng), ims(rng));
        const auto spec = KernelSpec::from_rational(a);
        const auto f = nblab::rho_as_step(spec, cutoff);
        const auto sweep = nblab::mellin_step(f, s);
        const Complex closed = nblab::mellin_rho_closed(spec, s, 1e-13);
        // |alpha - alpha^s| <= alpha + alpha^Re(s), scaling the zeta error
        const double ad = a.to_double();
        const double coeff = (ad + std::pow(ad, s.real())) / std::abs(s);
        const double bound = sweep.abs_error_bound + coeff * 1e-13 + 1e-12;
        if (std::abs(sweep.value - closed) <= bound) ++ok;
    }
    r.value(static_cast<double>(ok));
    r.require(ok == 50, "Mellin sweep/closed-form mismatch on " +
                            std::to_string(50 - ok) + " of 50 samples");

    const auto f = nblab::rho_as_step(KernelSpec::parse("1/2"), cutoff);
    const auto spot = nblab::mellin_step(f, Complex(2, 0));
    r.value(spot.value);
    const double pi2_48 = 0.205616758356028305;
    r.require(std::abs(spot.value - Complex(pi2_48, 0)) < 1e-8,
              "rho-hat_{1/2}(2) vs pi^2/48: " +
                  fmt(std::abs(spot.value - Complex(pi2_48, 0))));
}

void criterion_5_cauchy(Report& r) {
    const auto inv = nblab::cauchy_eval(LineFunction::one_over_w(), Complex(2, 0),
                                        quad(10000));
    r.value(inv.value);
    r.require(std::abs(inv.value - Complex(0.5, 0)) < 1e-3,
              "Cauchy(1/w at 2) off by " + fmt(std::abs(inv.value - Complex(0.5, 0))));

    const auto rho = nblab::cauchy_eval(LineFunction::rho_hat(KernelSpec::parse("1/2")),
                                        Complex(2, 0), quad(10000));
    r.value(rho.value);
    const double pi2_48 = 0.205616758356028305;
    r.require(std::abs(rho.value - Complex(pi2_48, 0)) < 1e-3,
              "Cauchy(rho-hat at 2) off by " +
                  fmt(std::abs(rho.value - Complex(pi2_48, 0))));
}

void criterion_6_dirichlet_identity(Report& r) {
    for (const Complex s : {Complex(2, 0), Complex(3, 0), Complex(2.5, 1)}) {
        const double res = nblab::mellin_frac_identity_residual(s);
        r.value(res);
        r.require(res <= 1e-8, "identity residual " + fmt(res));
    }
}

void criterion_7_bsy(Report& r) {
    const auto table = nblab::ZeroTable::load(kDataDir + "/zeros_h620.txt");
    const auto at200 = nblab::bsy_integral(quad(200), table);
    const auto at400 = nblab::bsy_integral(quad(400), table);
    r.value(at200.value);
    r.value(at200.truncation_tail_estimate);
    r.value(at400.value);
    r.require(std::abs(at200.value) <= 0.05,
              "|bsy(200)| = " + fmt(std::abs(at200.value)));
    r.require(std::abs(at400.value) <=
                  std::abs(at200.value) + at200.truncation_tail_estimate,
              "|bsy(400)| not within bsy(200) plus its tail estimate");

    ZeroMultiset ms;
    ms.insert(Complex(0.75, 0.0));
    const double sum = nblab::bsy_sum(ms);
    r.value(sum);
    r.require(std::abs(sum - std::log(3.0)) < 1e-12,
              "bsy_sum({0.75}) vs log 3: " + fmt(std::abs(sum - std::log(3.0))));
}

void criterion_8_factorization(Report& r) {
    const auto table = nblab::ZeroTable::load(kDataDir + "/zeros_h620.txt");
    const ZeroMultiset empty;
    for (const double sre : {0.75, 1.5, 2.0}) {
        const auto fine =
            nblab::factorization_residual(Complex(sre, 0), empty, quad(500), table);
        const auto coarse =
            nblab::factorization_residual(Complex(sre, 0), empty, quad(250), table);
        r.value(fine.residual);
        r.value(coarse.residual);
        r.require(fine.residual <= 0.02, "residual at s=" + fmt(sre) + ": " +
                                             fmt(fine.residual));
        r.require(fine.residual <= coarse.residual,
                  "residual at s=" + fmt(sre) + " fails to shrink under T doubling");
    }
    const auto outer = nblab::outer_integral(LineFunction::neg_log_abs_w(),
                                             Complex(2, 0), quad(10000));
    r.value(outer.value);
    r.require(std::abs(outer.value - Complex(std::log(0.5), 0)) < 1e-3,
              "outer(-log|w|, 2) vs log(1/2): " +
                  fmt(std::abs(outer.value - Complex(std::log(0.5), 0))));
}

void criterion_9_lemma(Report& r) {
    ZeroMultiset ms;
    ms.insert(Complex(0.75, 0.0));
    const auto with = nblab::lemma_orthogonality(
        ms, LineFunction::one_over_w_plus(1.0), quad(10000));
    r.value(with.value);
    r.require(std::abs(with.value) <= 1e-3,
              "|lemma({0.75})| = " + fmt(std::abs(with.value)));

    const auto without = nblab::lemma_orthogonality(
        ZeroMultiset{}, LineFunction::one_over_w_plus(1.0), quad(10000));
    r.value(without.value);
    r.require(without.value == Complex(0, 0), "empty multiset must give exactly 0");
}

void criterion_10_projection_model(Report& r) {
    ZeroMultiset ms75;
    ms75.insert(Complex(0.75, 0.0));
    const auto c75 = nblab::synthetic_projection_residual(ms75, quad(10000));
    r.value(c75.norm_sq);
    r.require(c75.discrepancy <= 1e-3,
              "projection residual {0.75} vs 8/9: " + fmt(c75.discrepancy));

    ZeroMultiset ms60;
    ms60.insert(Complex(0.6, 0.0));
    const auto c60 = nblab::synthetic_projection_residual(ms60, quad(10000));
    r.value(c60.norm_sq);
    r.require(c60.discrepancy <= 1e-3,
              "projection residual {0.6} vs 5/9: " + fmt(c60.discrepancy));

    ZeroMultiset dbl;
    dbl.insert(Complex(0.6, 0.0), 2);
    const double b1 = nblab::b_at_one(dbl);
    r.value(b1);
    r.require(std::abs(b1 - 4.0 / 9.0) < 1e-12,
              "b_at_one({0.6 x2}) vs 4/9: " + fmt(std::abs(b1 - 4.0 / 9.0)));
}

void criterion_11_projection_solver(Report& r) {
    const double eps = 1e-8;

    const auto empty = nblab::distance_to_one(nblab::build_gram({}, eps));
    r.require(empty.distance == 1.0 && empty.projection_norm == 0.0,
              "empty family must give d = 1 exactly");

    const auto sys2 =
        nblab::build_gram({KernelSpec::parse("1/2"), KernelSpec::parse("1/3")}, eps);
    const auto pr2 = nblab::distance_to_one(sys2);
    const auto bf = oracles::brute_force_two(sys2);
    r.value(pr2.distance);
    r.value(bf.distance);
    r.require(std::abs(pr2.distance - bf.distance) < 1e-10,
              "two-element family vs brute force: " +
                  fmt(std::abs(pr2.distance - bf.distance)));

    const auto rows = nblab::distance_sequence(20, nblab::FamilyRule::reciprocal, eps);
    double prev = 1.0;
    bool monotone = true, positive = true;
    for (const auto& row : rows) {
        r.value(row.distance);
        monotone = monotone && row.distance <= prev + 1e-10;
        positive = positive && row.distance > 0.0;
        prev = row.distance;
    }
    r.require(monotone, "d_N must be nonincreasing for N <= 20");
    r.require(positive, "d_N must stay positive for N <= 20");

    for (const int n : {8, 20}) {
        const auto fam = nblab::reciprocal_family(n);
        const auto pr = nblab::distance_to_one(nblab::build_gram(fam, eps));
        const auto recheck = nblab::residual_norm_sq(fam, pr.coefficients, eps);
        const double diff = std::abs(recheck.value - pr.distance * pr.distance);
        r.value(recheck.value);
        r.require(diff <= 10.0 * n * eps,
                  "Pythagoras recheck at N=" + std::to_string(n) + ": " + fmt(diff));
    }
}

struct Criterion {
    const char* name;
    std::function<void(Report&)> body;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"1. zeta engine reference values and bundled ordinates", criterion_1_zeta},
        {"2. kernel identity suite (fractional parts, support, semigroup)",
         criterion_2_kernel_identities},
        {"3. closed-form pairing <1, rho_alpha> at cutoff 1e-10", criterion_3_pairing},
        {"4. Mellin transform consistency (sweep vs closed form)",
         criterion_4_mellin_consistency},
        {"5. Cauchy reproduction on the half-plane", criterion_5_cauchy},
        {"6. Dirichlet fractional-part identity", criterion_6_dirichlet_identity},
        {"7. critical-line integral of log|zeta|/|w|^2", criterion_7_bsy},
        {"8. inner/outer factorization residuals", criterion_8_factorization},
        {"9. projection-lemma orthogonality", criterion_9_lemma},
        {"10. synthetic projection-norm model", criterion_10_projection_model},
        {"11. finite-section projection solver", criterion_11_projection_solver},
    };

    int failures = 0;
    std::vector<std::string> payload8(criteria.size()), payload1(criteria.size());
    std::vector<Report> reports(criteria.size());

    for (std::size_t i = 0; i < criteria.size(); ++i) {
        nblab::set_thread_count(8);
        Report rep;
        try {
            criteria[i].body(rep);
        } catch (const std::exception& e) {
            rep.pass = false;
            rep.detail = std::string("exception: ") + e.what();
        }
        payload8[i] = rep.payload;
        reports[i] = rep;

        nblab::set_thread_count(1);
        Report rep1;
        try {
            criteria[i].body(rep1);
        } catch (const std::exception& e) {
            rep1.pass = false;
        }
        payload1[i] = rep1.payload;

        std::printf("[%s] %s%s%s\n", rep.pass ? "PASS" : "FAIL", criteria[i].name,
                    rep.detail.empty() ? "" : " -- ", rep.detail.c_str());
        std::fflush(stdout);
        if (!rep.pass) ++failures;
    }

    bool identical = true;
    std::string mismatch;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (payload8[i] != payload1[i]) {
            identical = false;
            mismatch += std::string(mismatch.empty() ? "" : ", ") + criteria[i].name;
        }
    }
    std::printf("[%s] 12. byte-identical outputs at thread counts 1 and 8%s%s\n",
                identical ? "PASS" : "FAIL", identical ? "" : " -- mismatch in: ",
                mismatch.c_str());
    if (!identical) ++failures;

    if (failures == 0)
        std::printf("acceptance: all criteria passed\n");
    else
        std::printf("acceptance: %d criterion/criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
