#pragma once

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "nblab/numeric.hpp"
#include "nblab/rational.hpp"

namespace nblab {

struct InnerProductResult {
    double value = 0.0;
    double abs_error_bound = 0.0; // covers the untruncated tail (0, cutoff]
};

// Piecewise-constant function on (cutoff, 1]: value[i] is held on
// (breakpoint[i-1], breakpoint[i]], with breakpoint[-1] := cutoff and the
// last breakpoint always 1.  The representation is canonical (no adjacent
// equal values).  Two storage paths:
//   exact: rational breakpoints/values plus a shared double prefactor, so
//          dilation by an irrational scalar keeps value algebra exact;
//   float: plain doubles for irrational kernel parameters.
class StepFunction {
public:
    StepFunction() = default;

    static StepFunction from_rational(std::vector<Rational> breakpoints,
                                      std::vector<Rational> values,
                                      Rational cutoff, double tail_bound);
    static StepFunction from_double(std::vector<double> breakpoints,
                                    std::vector<double> values,
                                    double cutoff, double tail_bound);

    static StepFunction constant_one(double cutoff);

    bool exact() const { return exact_; }
    std::size_t size() const { return bp_.size(); }
    double cutoff() const { return cutoff_; }
    const Rational& cutoff_rational() const { return cutoff_rat_; }
    double tail_bound() const { return tail_bound_; }
    double prefactor() const { return prefactor_; }

    double breakpoint(std::size_t i) const { return bp_[i]; }
    double raw_value(std::size_t i) const { return val_[i]; }
    double value(std::size_t i) const { return prefactor_ * val_[i]; }
    const Rational& breakpoint_rational(std::size_t i) const { return bp_rat_[i]; }
    const Rational& value_rational(std::size_t i) const { return val_rat_[i]; }

    // 0 for t > 1; throws for t <= cutoff (unrepresented tail region).
    double eval(double t) const;

    // Multiplies all values (through the prefactor) without touching the
    // exact rational data.
    StepFunction scaled(double c) const;

    // Raises the cutoff and drops breakpoints at or below it.
    StepFunction retruncated(double new_cutoff) const;

    // Exact linear combination sum_i coeff_i * f_i of exact step functions
    // sharing cutoff and prefactor.
    static StepFunction linear_combination(
        const std::vector<std::pair<Rational, const StepFunction*>>& terms);

    // Representation equality: same path, same prefactor bits, same cutoff,
    // same breakpoint/value sequences (exact comparison in the rational path).
    friend bool operator==(const StepFunction& a, const StepFunction& b);
    friend bool operator!=(const StepFunction& a, const StepFunction& b) { return !(a == b); }

private:
    void canonicalize();
    void rebuild_mirrors();
    static StepFunction dilate(const StepFunction& f, double lambda_d,
                               const Rational* lambda_rat);
    friend StepFunction semigroup_apply(const Rational& lambda, const StepFunction& f);
    friend StepFunction semigroup_apply(double lambda, const StepFunction& f);

    bool exact_ = false;
    double prefactor_ = 1.0;
    std::vector<Rational> bp_rat_, val_rat_;
    std::vector<double> bp_, val_;
    Rational cutoff_rat_{0, 1};
    double cutoff_ = 0.0;
    double tail_bound_ = 0.0;
};

// Exact merged-breakpoint sweep of integral f*g over (cutoff, 1], cutoff the
// larger of the two; abs_error_bound = cutoff * tail_f * tail_g.
InnerProductResult inner_product(const StepFunction& f, const StepFunction& g);

// Mellin transform of a step function at s (Re s > 0, s != 0):
// sum_i v_i (b_i^s - b_{i-1}^s)/s, with tail bound cutoff^{Re s} * tail / Re s.
struct MellinStepResult {
    Complex value;
    double abs_error_bound = 0.0;
};
MellinStepResult mellin_step(const StepFunction& f, Complex s);

// Dilation U(lambda): f(t) -> lambda^{-1/2} f(t/lambda) for 0 < lambda <= 1,
// represented on (lambda*cutoff, 1] with value 0 on (lambda, 1].
StepFunction semigroup_apply(const Rational& lambda, const StepFunction& f);
StepFunction semigroup_apply(double lambda, const StepFunction& f);

} // namespace nblab
