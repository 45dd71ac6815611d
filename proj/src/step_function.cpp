#include "nblab/step_function.hpp"

#include <algorithm>
#include <cmath>

#include "nblab/errors.hpp"

namespace nblab {

namespace {
const Rational kOne{1, 1};
}

StepFunction StepFunction::from_rational(std::vector<Rational> breakpoints,
                                         std::vector<Rational> values,
                                         Rational cutoff, double tail_bound) {
    if (breakpoints.size() != values.size())
        throw PreconditionError("step function: breakpoint/value size mismatch");
    if (breakpoints.empty() || !(breakpoints.back() == kOne))
        throw PreconditionError("step function: last breakpoint must be 1");
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
        if (!(breakpoints[i] < breakpoints[i + 1]))
            throw PreconditionError("step function: breakpoints must be strictly increasing");
    if (!(Rational(0) < cutoff && cutoff < breakpoints.front()))
        throw PreconditionError("step function: cutoff must lie below the first breakpoint");
    StepFunction f;
    f.exact_ = true;
    f.bp_rat_ = std::move(breakpoints);
    f.val_rat_ = std::move(values);
    f.cutoff_rat_ = cutoff;
    f.tail_bound_ = tail_bound;
    f.canonicalize();
    f.rebuild_mirrors();
    return f;
}

StepFunction StepFunction::from_double(std::vector<double> breakpoints,
                                       std::vector<double> values,
                                       double cutoff, double tail_bound) {
    if (breakpoints.size() != values.size())
        throw PreconditionError("step function: breakpoint/value size mismatch");
    if (breakpoints.empty() || breakpoints.back() != 1.0)
        throw PreconditionError("step function: last breakpoint must be 1");
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
        if (!(breakpoints[i] < breakpoints[i + 1]))
            throw PreconditionError("step function: breakpoints must be strictly increasing");
    if (!(cutoff > 0.0 && cutoff < breakpoints.front()))
        throw PreconditionError("step function: cutoff must lie below the first breakpoint");
    StepFunction f;
    f.exact_ = false;
    f.bp_ = std::move(breakpoints);
    f.val_ = std::move(values);
    f.cutoff_ = cutoff;
    f.tail_bound_ = tail_bound;
    f.canonicalize();
    return f;
}

StepFunction StepFunction::constant_one(double cutoff) {
    return from_double({1.0}, {1.0}, cutoff, 1.0);
}

void StepFunction::canonicalize() {
    if (exact_) {
        std::vector<Rational> bp, val;
        bp.reserve(bp_rat_.size());
        val.reserve(val_rat_.size());
        for (std::size_t i = 0; i < bp_rat_.size(); ++i) {
            if (!val.empty() && val.back() == val_rat_[i]) {
                bp.back() = bp_rat_[i]; // extend the previous interval
                continue;
            }
            bp.push_back(bp_rat_[i]);
            val.push_back(val_rat_[i]);
        }
        bp_rat_ = std::move(bp);
        val_rat_ = std::move(val);
    } else {
        std::vector<double> bp, val;
        bp.reserve(bp_.size());
        val.reserve(val_.size());
        for (std::size_t i = 0; i < bp_.size(); ++i) {
            if (!val.empty() && val.back() == val_[i]) {
                bp.back() = bp_[i];
                continue;
            }
            bp.push_back(bp_[i]);
            val.push_back(val_[i]);
        }
        bp_ = std::move(bp);
        val_ = std::move(val);
    }
}

void StepFunction::rebuild_mirrors() {
    if (!exact_) return;
    bp_.resize(bp_rat_.size());
    val_.resize(val_rat_.size());
    for (std::size_t i = 0; i < bp_rat_.size(); ++i) {
        bp_[i] = bp_rat_[i].to_double();
        val_[i] = val_rat_[i].to_double();
    }
    cutoff_ = cutoff_rat_.to_double();
}

double StepFunction::eval(double t) const {
    if (t > 1.0) return 0.0;
    if (!(t > cutoff_))
        throw PreconditionError("step function: evaluation below cutoff");
    // value on (b_{i-1}, b_i]: first breakpoint >= t
    auto it = std::lower_bound(bp_.begin(), bp_.end(), t);
    return prefactor_ * val_[static_cast<std::size_t>(it - bp_.begin())];
}

StepFunction StepFunction::scaled(double c) const {
    StepFunction f = *this;
    f.prefactor_ *= c;
    f.tail_bound_ *= std::abs(c);
    return f;
}

StepFunction StepFunction::retruncated(double new_cutoff) const {
    if (new_cutoff < cutoff_)
        throw PreconditionError("retruncated: cutoff can only be raised");
    if (new_cutoff == cutoff_) return *this;
    StepFunction f = *this;
    double dropped = 0.0;
    std::size_t k = 0;
    while (k < bp_.size() && bp_[k] <= new_cutoff) {
        dropped = std::max(dropped, std::abs(prefactor_ * val_[k]));
        ++k;
    }
    if (k == bp_.size())
        throw PreconditionError("retruncated: cutoff at or above 1");
    f.bp_.erase(f.bp_.begin(), f.bp_.begin() + k);
    f.val_.erase(f.val_.begin(), f.val_.begin() + k);
    f.bp_rat_.clear();
    f.val_rat_.clear();
    f.exact_ = false; // the raised cutoff is no longer exactly representable
    f.cutoff_ = new_cutoff;
    f.cutoff_rat_ = Rational{0, 1};
    f.tail_bound_ = std::max(tail_bound_, dropped);
    return f;
}

StepFunction StepFunction::linear_combination(
    const std::vector<std::pair<Rational, const StepFunction*>>& terms) {
    if (terms.empty())
        throw PreconditionError("linear_combination: no terms");
    const StepFunction& first = *terms.front().second;
    for (const auto& [c, f] : terms) {
        (void)c;
        if (!f->exact_)
            throw PreconditionError("linear_combination: all terms must be exact");
        if (!(f->cutoff_rat_ == first.cutoff_rat_))
            throw PreconditionError("linear_combination: cutoffs must match");
        if (f->prefactor_ != first.prefactor_)
            throw PreconditionError("linear_combination: prefactors must match");
    }
    // k-way merge over breakpoints with exact comparison
    const std::size_t k = terms.size();
    std::vector<std::size_t> idx(k, 0);
    std::vector<Rational> bp, val;
    double tail = 0.0;
    for (const auto& [c, f] : terms) tail += std::abs(c.to_double()) * f->tail_bound_;
    for (;;) {
        bool any = false;
        Rational next{2, 1};
        for (std::size_t j = 0; j < k; ++j) {
            const auto& f = *terms[j].second;
            if (idx[j] < f.bp_rat_.size()) {
                any = true;
                if (f.bp_rat_[idx[j]] < next) next = f.bp_rat_[idx[j]];
            }
        }
        if (!any) break;
        Rational v{0, 1};
        for (std::size_t j = 0; j < k; ++j) {
            const auto& f = *terms[j].second;
            v = v + terms[j].first * f.val_rat_[idx[j]];
        }
        bp.push_back(next);
        val.push_back(v);
        for (std::size_t j = 0; j < k; ++j) {
            const auto& f = *terms[j].second;
            if (f.bp_rat_[idx[j]] == next) ++idx[j];
        }
    }
    StepFunction out = from_rational(std::move(bp), std::move(val), first.cutoff_rat_, tail);
    out.prefactor_ = first.prefactor_;
    return out;
}

bool operator==(const StepFunction& a, const StepFunction& b) {
    if (a.exact_ != b.exact_ || a.prefactor_ != b.prefactor_) return false;
    if (a.exact_) {
        return a.cutoff_rat_ == b.cutoff_rat_ && a.bp_rat_ == b.bp_rat_ &&
               a.val_rat_ == b.val_rat_;
    }
    return a.cutoff_ == b.cutoff_ && a.bp_ == b.bp_ && a.val_ == b.val_;
}

InnerProductResult inner_product(const StepFunction& f_in, const StepFunction& g_in) {
    const StepFunction* f = &f_in;
    const StepFunction* g = &g_in;
    StepFunction tmp;
    if (f->cutoff() < g->cutoff()) {
        tmp = f->retruncated(g->cutoff());
        f = &tmp;
    } else if (g->cutoff() < f->cutoff()) {
        tmp = g->retruncated(f->cutoff());
        g = &tmp;
    }
    const double scale = f->prefactor() * g->prefactor();
    Kahan acc;
    double prev = f->cutoff();
    std::size_t i = 0, j = 0;
    while (i < f->size() && j < g->size()) {
        const double bf = f->breakpoint(i);
        const double bg = g->breakpoint(j);
        const double next = std::min(bf, bg);
        acc.add(f->raw_value(i) * g->raw_value(j) * (next - prev));
        prev = next;
        if (bf == next) ++i;
        if (bg == next) ++j;
    }
    InnerProductResult r;
    r.value = scale * acc.value();
    r.abs_error_bound = f->cutoff() * f_in.tail_bound() * g_in.tail_bound();
    return r;
}

MellinStepResult mellin_step(const StepFunction& f, Complex s) {
    if (!is_finite(s) || !(s.real() > 0.0))
        throw PreconditionError("mellin_step: Re(s) > 0 required");
    KahanComplex acc;
    Complex prev_pow = std::exp(s * std::log(f.cutoff()));
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double b = f.breakpoint(i);
        const Complex pw = b == 1.0 ? Complex(1.0, 0.0) : std::exp(s * std::log(b));
        acc.add(f.raw_value(i) * (pw - prev_pow));
        prev_pow = pw;
    }
    MellinStepResult r;
    r.value = f.prefactor() * acc.value() / s;
    r.abs_error_bound =
        std::pow(f.cutoff(), s.real()) * f.tail_bound() / s.real();
    return r;
}

StepFunction StepFunction::dilate(const StepFunction& f, double lambda_d,
                                  const Rational* lambda_rat) {
    if (!(lambda_d > 0.0 && lambda_d <= 1.0))
        throw PreconditionError("semigroup_apply: lambda in (0, 1] required");
    if (lambda_d == 1.0) return f;
    const double root = 1.0 / std::sqrt(lambda_d);
    StepFunction out;
    if (f.exact() && lambda_rat != nullptr) {
        std::vector<Rational> bp, val;
        bp.reserve(f.size() + 1);
        val.reserve(f.size() + 1);
        for (std::size_t i = 0; i < f.size(); ++i) {
            bp.push_back(*lambda_rat * f.breakpoint_rational(i));
            val.push_back(f.value_rational(i));
        }
        bp.push_back(kOne);
        val.push_back(Rational(0));
        out = StepFunction::from_rational(std::move(bp), std::move(val),
                                          *lambda_rat * f.cutoff_rational(), 0.0);
    } else {
        std::vector<double> bp, val;
        bp.reserve(f.size() + 1);
        val.reserve(f.size() + 1);
        for (std::size_t i = 0; i < f.size(); ++i) {
            bp.push_back(lambda_d * f.breakpoint(i));
            val.push_back(f.raw_value(i));
        }
        bp.push_back(1.0);
        val.push_back(0.0);
        out = StepFunction::from_double(std::move(bp), std::move(val),
                                        lambda_d * f.cutoff(), 0.0);
    }
    out.prefactor_ = f.prefactor_ * root;
    out.tail_bound_ = f.tail_bound_ * root;
    return out;
}

StepFunction semigroup_apply(const Rational& lambda, const StepFunction& f) {
    return StepFunction::dilate(f, lambda.to_double(), &lambda);
}

StepFunction semigroup_apply(double lambda, const StepFunction& f) {
    return StepFunction::dilate(f, lambda, nullptr);
}

} // namespace nblab
