#include "nblab/line_integrals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nblab/errors.hpp"
#include "nblab/parallel.hpp"
#include "nblab/zeta.hpp"

namespace nblab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// 16-point Gauss-Legendre on [-1, 1]
constexpr double kNode[16] = {
    -0.9894009349916499326, -0.9445750230732325761, -0.8656312023878317439,
    -0.7554044083550030339, -0.6178762444026437484, -0.4580167776572273863,
    -0.2816035507792589132, -0.09501250983763744019, 0.09501250983763744019,
    0.2816035507792589132,  0.4580167776572273863,  0.6178762444026437484,
    0.7554044083550030339,  0.8656312023878317439,  0.9445750230732325761,
    0.9894009349916499326};
constexpr double kWeight[16] = {
    0.02715245941175409485, 0.06225352393864789286, 0.09515851168249278481,
    0.1246289712555338721,  0.1495959888165767321,  0.1691565193950025382,
    0.1826034150449235889,  0.1894506104550684963,  0.1894506104550684963,
    0.1826034150449235889,  0.1691565193950025382,  0.1495959888165767321,
    0.1246289712555338721,  0.09515851168249278481, 0.06225352393864789286,
    0.02715245941175409485};

using Integrand = std::function<Complex(double)>;

struct PanelStats {
    double err = 0.0;
    long panels = 0;
};

Complex gl16(const Integrand& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    Complex sum{0.0, 0.0};
    for (int i = 0; i < 16; ++i) sum += kWeight[i] * f(c + h * kNode[i]);
    return h * sum;
}

// Fixed-order rule with bisection-on-disagreement.
Complex adapt(const Integrand& f, double a, double b, double tol, int depth_left,
              PanelStats& st) {
    const double mid = 0.5 * (a + b);
    const Complex whole = gl16(f, a, b);
    const Complex halves = gl16(f, a, mid) + gl16(f, mid, b);
    const double err = std::abs(halves - whole);
    if (err <= tol || depth_left <= 0 || !(a < mid && mid < b)) {
        st.err += err;
        st.panels += 2;
        return halves;
    }
    return adapt(f, a, mid, 0.5 * tol, depth_left - 1, st) +
           adapt(f, mid, b, 0.5 * tol, depth_left - 1, st);
}

// Integrates f over [a, b] where log|zeta| blows up at `sing` (an endpoint of
// the interval, or just beyond it).  Cells halve geometrically toward the
// singularity; each cell is analytic with the singularity a full cell-width
// away, so one Gauss rule per cell already converges to machine level.  When
// the singularity is an endpoint the last sliver is dropped and bounded by
//   |rest| * h * (|log h| + 7),
// which covers |log|zeta|| <= |log d| + 7 within distance d of a zero at the
// heights a desk-size table reaches.
constexpr int kGradeDepthMax = 44;

Complex graded(const Integrand& f, double a, double b, double sing,
               double rest_mag, double tol_share, PanelStats& st) {
    const bool sing_at_left = std::abs(sing - a) <= std::abs(sing - b);
    const double far = sing_at_left ? b : a;
    const double near = sing_at_left ? a : b;
    const double near_gap = std::abs(near - sing);
    Complex total{0.0, 0.0};
    double outer_x = far;
    for (int k = 0; k < kGradeDepthMax; ++k) {
        const double inner_x = sing + (outer_x - sing) * 0.5;
        const double h = std::abs(inner_x - sing);
        if (near_gap > 0.0 && h <= 2.0 * near_gap) {
            // singularity lies beyond [a, b]: close with one analytic cell
            total += sing_at_left ? gl16(f, near, outer_x) : gl16(f, outer_x, near);
            st.panels += 1;
            st.err += 1e-15 * std::abs(total);
            return total;
        }
        total += sing_at_left ? gl16(f, inner_x, outer_x) : gl16(f, outer_x, inner_x);
        st.panels += 1;
        outer_x = inner_x;
        const double sliver_bound = rest_mag * h * (std::abs(std::log(h)) + 7.0);
        if (near_gap == 0.0 && sliver_bound <= tol_share && k >= 8) {
            st.err += sliver_bound;
            return total;
        }
    }
    const double h = std::abs(outer_x - sing);
    st.err += rest_mag * h * (std::abs(std::log(h)) + 7.0);
    if (near_gap > 0.0) {
        total += sing_at_left ? gl16(f, near, outer_x) : gl16(f, outer_x, near);
        st.panels += 1;
    }
    return total;
}

struct Item {
    enum Kind { smooth, graded_cell } kind = smooth;
    double a = 0.0, b = 0.0;
    double sing = 0.0;     // graded only
    double rest_mag = 0.0; // graded only
    double tol = 0.0;
};

struct ItemOut {
    Complex value{0.0, 0.0};
    double err = 0.0;
    long panels = 0;
};

struct RunOut {
    Complex value{0.0, 0.0};
    double panel_err = 0.0;
    long panels = 0;
    Complex shell{0.0, 0.0}; // contribution with |tau| > T/2
};

RunOut run_items(const Integrand& f, const std::vector<Item>& items, double t_half,
                 int depth_limit) {
    std::vector<ItemOut> out(items.size());
    parallel_for(items.size(), [&](std::size_t i) {
        const Item& it = items[i];
        PanelStats st;
        ItemOut o;
        if (it.kind == Item::smooth)
            o.value = adapt(f, it.a, it.b, it.tol, depth_limit, st);
        else
            o.value = graded(f, it.a, it.b, it.sing, it.rest_mag, it.tol, st);
        o.err = st.err;
        o.panels = st.panels;
        out[i] = o;
    });
    RunOut r;
    KahanComplex acc, shell;
    for (std::size_t i = 0; i < items.size(); ++i) {
        acc.add(out[i].value);
        r.panel_err += out[i].err;
        r.panels += out[i].panels;
        if (std::min(std::abs(items[i].a), std::abs(items[i].b)) >= t_half - 1e-12)
            shell.add(out[i].value);
    }
    r.value = acc.value();
    r.shell = shell.value();
    return r;
}

// Splits [lo, hi] at each singular ordinate +- delta, marks the segments
// touching an ordinate for graded treatment, and cuts the remaining smooth
// stretches to at most w_max.  `sings` must be sorted ascending and may
// extend past [lo, hi] by delta (for singularities just outside the range).
std::vector<Item> build_split_items(double lo, double hi, const std::vector<double>& sings,
                                    double delta, double w_max,
                                    const std::function<double(double)>& rest_mag,
                                    double target_tol, double t_half) {
    std::vector<double> edges{lo, hi};
    if (t_half > lo && t_half < hi) edges.push_back(t_half);
    if (-t_half > lo && -t_half < hi) edges.push_back(-t_half);
    for (double g : sings) {
        for (double e : {g - delta, g, g + delta})
            if (e > lo && e < hi) edges.push_back(e);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    auto is_sing = [&](double x) {
        return std::binary_search(sings.begin(), sings.end(), x);
    };
    // nearest singularity strictly outside [lo, hi] but within delta of an edge
    auto outside_sing = [&](double x, bool above) -> double {
        for (double g : sings) {
            if (above && g > x && g - x < delta) return g;
            if (!above && g < x && x - g < delta) return g;
        }
        return std::numeric_limits<double>::quiet_NaN();
    };

    std::vector<Item> items;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double a = edges[i], b = edges[i + 1];
        const bool sa = is_sing(a), sb = is_sing(b);
        if (sa && sb) {
            const double mid = 0.5 * (a + b);
            items.push_back({Item::graded_cell, a, mid, a, rest_mag(a), 0.0});
            items.push_back({Item::graded_cell, mid, b, b, rest_mag(b), 0.0});
            continue;
        }
        if (sa || sb) {
            const double g = sa ? a : b;
            items.push_back({Item::graded_cell, a, b, g, rest_mag(g), 0.0});
            continue;
        }
        if (b == hi) {
            const double g = outside_sing(hi, true);
            if (!std::isnan(g)) {
                items.push_back({Item::graded_cell, a, b, g, rest_mag(b), 0.0});
                continue;
            }
        }
        if (a == lo) {
            const double g = outside_sing(lo, false);
            if (!std::isnan(g)) {
                items.push_back({Item::graded_cell, a, b, g, rest_mag(a), 0.0});
                continue;
            }
        }
        const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / w_max)));
        for (int k = 0; k < pieces; ++k) {
            const double pa = a + (b - a) * (static_cast<double>(k) / pieces);
            const double pb = k + 1 == pieces
                                  ? b
                                  : a + (b - a) * (static_cast<double>(k + 1) / pieces);
            items.push_back({Item::smooth, pa, pb, 0.0, 0.0, 0.0});
        }
    }
    // tolerance split: half the budget to graded slivers, half to smooth width
    double smooth_width = 0.0;
    std::size_t graded_count = 0;
    for (const auto& it : items) {
        if (it.kind == Item::smooth)
            smooth_width += it.b - it.a;
        else
            ++graded_count;
    }
    for (auto& it : items) {
        if (it.kind == Item::smooth)
            it.tol = 0.5 * target_tol * (it.b - it.a) / std::max(smooth_width, 1e-300);
        else
            it.tol = 0.5 * target_tol / static_cast<double>(std::max<std::size_t>(graded_count, 1));
    }
    return items;
}

// Geometric panel edges for smooth integrands on [lo, hi] (0 or -T to T).
std::vector<Item> build_geometric_items(double lo, double hi, double target_tol,
                                        double t_half) {
    std::vector<double> edges{lo, hi};
    auto add = [&](double x) {
        if (x > lo && x < hi) edges.push_back(x);
    };
    add(0.0);
    for (double x = 1.0; x < hi; x *= 2.0) add(x);
    for (double x = -1.0; x > lo; x *= 2.0) add(x);
    add(t_half);
    add(-t_half);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    std::vector<Item> items;
    const double total = hi - lo;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        Item it{Item::smooth, edges[i], edges[i + 1], 0.0, 0.0, 0.0};
        it.tol = target_tol * (it.b - it.a) / total;
        items.push_back(it);
    }
    return items;
}

void validate_spec(const LineQuadratureSpec& spec) {
    if (!(spec.truncation_height > 0.0))
        throw PreconditionError("line quadrature: truncation height T > 0 required");
    if (!(spec.singularity_halfwidth > 0.0))
        throw PreconditionError("line quadrature: singularity halfwidth > 0 required");
    if (!(spec.target_tol > 0.0))
        throw PreconditionError("line quadrature: target tolerance > 0 required");
}

// Typical magnitude of log|zeta| on the line at desk heights; used only for
// the reported truncation-tail envelope, never for values.
double log_zeta_envelope(double T) { return 1.2 * (std::log(T) + 1.0) + 3.0; }

} // namespace

// --------------------------------------------------------------------------
// LineFunction factories
// --------------------------------------------------------------------------

LineFunction LineFunction::log_abs_zeta(const ZeroTable& zeros, double zeta_tol) {
    LineFunction f;
    f.eval = [zeta_tol](double tau) {
        return Complex(log_abs_zeta_on_line(tau, zeta_tol), 0.0);
    };
    f.decay_exponent = 0.0;
    f.singularities = zeros.ordinates();
    f.conj_symmetric = true;
    return f;
}

LineFunction LineFunction::neg_log_abs_w() {
    LineFunction f;
    f.eval = [](double tau) {
        return Complex(-0.5 * std::log(0.25 + tau * tau), 0.0);
    };
    f.decay_exponent = 0.0;
    f.conj_symmetric = true;
    return f;
}

LineFunction LineFunction::one_over_w() {
    LineFunction f;
    f.eval = [](double tau) { return 1.0 / Complex(0.5, tau); };
    f.decay_exponent = 1.0;
    f.conj_symmetric = true;
    return f;
}

LineFunction LineFunction::one_over_w_plus(double a) {
    if (!(a >= 0.0))
        throw PreconditionError("one_over_w_plus: shift must be >= 0");
    LineFunction f;
    f.eval = [a](double tau) { return 1.0 / Complex(0.5 + a, tau); };
    f.decay_exponent = 1.0;
    f.conj_symmetric = true;
    return f;
}

LineFunction LineFunction::rho_hat(const KernelSpec& spec, double zeta_tol) {
    LineFunction f;
    const double alpha = spec.alpha;
    f.eval = [alpha, zeta_tol](double tau) {
        const Complex w(0.5, tau);
        const Complex a_pow = std::exp(w * std::log(alpha));
        return (alpha - a_pow) * zeta(w, zeta_tol).value / w;
    };
    f.decay_exponent = 1.0;
    f.conj_symmetric = true;
    return f;
}

// --------------------------------------------------------------------------
// Integral operations
// --------------------------------------------------------------------------

LineIntegralResult bsy_integral(const LineQuadratureSpec& spec, const ZeroTable& zeros) {
    validate_spec(spec);
    const double T = spec.truncation_height;
    if (zeros.max_height() < T)
        throw PreconditionError("bsy_integral: zero table must cover the truncation height");
    // even integrand: integrate [0, T] and double; (1/2pi)*2 = 1/pi
    const Integrand f = [](double tau) {
        return Complex(log_abs_zeta_on_line(tau) / (kPi * (0.25 + tau * tau)), 0.0);
    };
    const auto rest_mag = [](double g) { return 1.0 / (kPi * (0.25 + g * g)); };
    const double w_max = std::max(1.0, T / spec.base_panel_count);
    const auto sings = zeros.zeros_in_range(0.0, T + spec.singularity_halfwidth);
    const auto items = build_split_items(0.0, T, sings, spec.singularity_halfwidth,
                                         w_max, rest_mag, spec.target_tol, 0.5 * T);
    const RunOut run = run_items(f, items, 0.5 * T, spec.refinement_limit);
    LineIntegralResult r;
    r.value = run.value;
    r.panel_error_estimate = run.panel_err;
    r.panels_used = run.panels;
    r.T_used = T;
    r.truncation_tail_estimate =
        std::max(std::abs(run.shell), log_zeta_envelope(T) / (kPi * T));
    return r;
}

LineIntegralResult outer_integral(const LineFunction& log_modulus, Complex s,
                                  const LineQuadratureSpec& spec) {
    validate_spec(spec);
    if (!is_finite(s) || !(s.real() > 0.5))
        throw PreconditionError("outer_integral: Re(s) > 1/2 required");
    if (s.real() - 0.5 < 10.0 * spec.singularity_halfwidth)
        throw PreconditionError(
            "outer_integral: s closer to the line than 10 * singularity halfwidth");
    const double T = spec.truncation_height;
    const Integrand f = [&log_modulus, s](double tau) {
        const Complex w(0.5, tau);
        const Complex kernel = (s + w - 2.0 * s * w) / (s - w);
        return log_modulus.eval(tau) * kernel / (2.0 * kPi * (0.25 + tau * tau));
    };
    const double kmag = std::abs(1.0 - 2.0 * s) + 0.5;
    const auto rest_mag = [kmag](double g) {
        return kmag / (2.0 * kPi * (0.25 + g * g));
    };
    // mirror the singular ordinates onto the negative half-line
    std::vector<double> sings;
    for (auto it = log_modulus.singularities.rbegin();
         it != log_modulus.singularities.rend(); ++it)
        if (*it <= T + spec.singularity_halfwidth) sings.push_back(-*it);
    for (double g : log_modulus.singularities)
        if (g <= T + spec.singularity_halfwidth) sings.push_back(g);
    const double w_max = std::max(1.0, T / spec.base_panel_count);
    const auto items =
        build_split_items(-T, T, sings, spec.singularity_halfwidth, w_max, rest_mag,
                          spec.target_tol, 0.5 * T);
    const RunOut run = run_items(f, items, 0.5 * T, spec.refinement_limit);
    LineIntegralResult r;
    r.value = run.value;
    r.panel_error_estimate = run.panel_err;
    r.panels_used = run.panels;
    r.T_used = T;
    r.truncation_tail_estimate =
        std::max(std::abs(run.shell), kmag * log_zeta_envelope(T) / (kPi * T));
    return r;
}

FactorizationCheck factorization_residual(Complex s, const ZeroMultiset& ms,
                                          const LineQuadratureSpec& spec,
                                          const ZeroTable& zeros) {
    validate_spec(spec);
    if (!is_finite(s) || !(s.real() > 0.5))
        throw PreconditionError("factorization_residual: Re(s) > 1/2 required");
    if (s == Complex(1.0, 0.0))
        throw PreconditionError(
            "factorization_residual: s = 1 is the Balazard-Saias-Yor limit; use bsy_integral");
    if (zeros.max_height() < spec.truncation_height)
        throw PreconditionError(
            "factorization_residual: zero table must cover the truncation height");
    LineQuadratureSpec local = spec;
    local.singularity_halfwidth =
        std::min(spec.singularity_halfwidth, (s.real() - 0.5) / 10.0);
    FactorizationCheck out;
    out.outer = outer_integral(LineFunction::log_abs_zeta(zeros), s, local);
    out.outer_log = out.outer.value;
    const ZetaValue zv = zeta(s, 1e-12);
    out.left_log = std::log((s - 1.0) * zv.value / s);
    out.blaschke_log = std::log(blaschke_product(ms, s));
    out.zeta_error = zv.abs_error_estimate / std::abs(zv.value);
    out.residual = std::abs(out.left_log - out.outer_log - out.blaschke_log);
    return out;
}

LineIntegralResult cauchy_eval(const LineFunction& h, Complex s,
                               const LineQuadratureSpec& spec) {
    validate_spec(spec);
    if (!is_finite(s) || !(s.real() > 0.5))
        throw PreconditionError("cauchy_eval: Re(s) > 1/2 required");
    if (h.decay_exponent < 1.0)
        throw PreconditionError("cauchy_eval: inadmissible decay_exponent < 1");
    const double T = spec.truncation_height;
    const bool half = h.conj_symmetric && s.imag() == 0.0;
    const double norm = half ? 1.0 / kPi : 1.0 / (2.0 * kPi);
    const Integrand f = [&h, s, norm](double tau) {
        return norm * h.eval(tau) / (s - Complex(0.5, tau));
    };
    const auto items = build_geometric_items(half ? 0.0 : -T, T, spec.target_tol, 0.5 * T);
    const RunOut run = run_items(f, items, 0.5 * T, spec.refinement_limit);
    LineIntegralResult r;
    r.value = half ? Complex(run.value.real(), 0.0) : run.value;
    r.panel_error_estimate = run.panel_err;
    r.panels_used = run.panels;
    r.T_used = T;
    const double h_tail = std::abs(h.eval(T)) / (kPi * std::max(h.decay_exponent, 1.0));
    r.truncation_tail_estimate = std::max(std::abs(run.shell), h_tail);
    return r;
}

LineIntegralResult lemma_orthogonality(const ZeroMultiset& ms, const LineFunction& h,
                                       const LineQuadratureSpec& spec) {
    validate_spec(spec);
    if (!h.eval)
        throw PreconditionError("lemma_orthogonality: admissible h required");
    if (h.decay_exponent < 1.0)
        throw PreconditionError("lemma_orthogonality: inadmissible decay_exponent < 1");
    const double T = spec.truncation_height;
    const double b1 = b_at_one(ms);
    const bool half = h.conj_symmetric && ms.conjugation_closed();
    const double norm = half ? 1.0 / kPi : 1.0 / (2.0 * kPi);
    const Integrand f = [&ms, &h, b1, norm](double tau) {
        const Complex w(0.5, tau);
        const Complex B = blaschke_product(ms, w);
        const Complex u = (1.0 - b1 * B) / w;
        return norm * std::conj(u) * B * h.eval(tau);
    };
    const auto items = build_geometric_items(half ? 0.0 : -T, T, spec.target_tol, 0.5 * T);
    const RunOut run = run_items(f, items, 0.5 * T, spec.refinement_limit);
    LineIntegralResult r;
    r.value = half ? Complex(run.value.real(), 0.0) : run.value;
    r.panel_error_estimate = run.panel_err;
    r.panels_used = run.panels;
    r.T_used = T;
    const double g_tail = std::abs(f(T)) * T / kPi;
    r.truncation_tail_estimate = std::max(std::abs(run.shell), g_tail);
    return r;
}

LineIntegralResult line_norm_sq(const LineFunction& h, const LineQuadratureSpec& spec) {
    validate_spec(spec);
    const double T = spec.truncation_height;
    const bool half = h.conj_symmetric;
    const double norm = half ? 1.0 / kPi : 1.0 / (2.0 * kPi);
    const Integrand f = [&h, norm](double tau) {
        const Complex v = h.eval(tau);
        return Complex(norm * std::norm(v), 0.0);
    };
    const auto items = build_geometric_items(half ? 0.0 : -T, T, spec.target_tol, 0.5 * T);
    const RunOut run = run_items(f, items, 0.5 * T, spec.refinement_limit);
    LineIntegralResult r;
    r.value = Complex(run.value.real(), 0.0);
    r.panel_error_estimate = run.panel_err;
    r.panels_used = run.panels;
    r.T_used = T;
    const double g_tail = std::abs(f(T)) * T / kPi;
    r.truncation_tail_estimate = std::max(std::abs(run.shell), g_tail);
    return r;
}

ProjectionCheck synthetic_projection_residual(const ZeroMultiset& ms,
                                              const LineQuadratureSpec& spec) {
    if (ms.empty())
        throw PreconditionError(
            "synthetic_projection_residual: nonempty multiset required");
    const double b1 = b_at_one(ms);
    LineFunction u;
    u.decay_exponent = 1.0;
    u.conj_symmetric = ms.conjugation_closed();
    u.eval = [&ms, b1](double tau) {
        const Complex w(0.5, tau);
        return (1.0 - b1 * blaschke_product(ms, w)) / w;
    };
    ProjectionCheck out;
    out.integral = line_norm_sq(u, spec);
    out.norm_sq = out.integral.value.real();
    out.expected = 1.0 - b1 * b1;
    out.discrepancy = std::abs(out.norm_sq - out.expected);
    return out;
}

} // namespace nblab
