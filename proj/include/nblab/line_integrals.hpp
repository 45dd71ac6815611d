#pragma once

#include <functional>
#include <vector>

#include "nblab/blaschke.hpp"
#include "nblab/kernels.hpp"
#include "nblab/numeric.hpp"
#include "nblab/zero_table.hpp"

namespace nblab {

// Discretization policy for integrals over Re(w) = 1/2.
struct LineQuadratureSpec {
    double truncation_height = 0.0;   // T > 0, required
    int base_panel_count = 64;        // minimum smooth subdivision of [0, T]
    int refinement_limit = 30;        // adaptive bisection depth per panel
    double singularity_halfwidth = 0.05; // delta around each zero ordinate
    double target_tol = 1e-9;         // quadrature (not truncation) budget
};

struct LineIntegralResult {
    Complex value{0.0, 0.0};
    double truncation_tail_estimate = 0.0;
    double panel_error_estimate = 0.0;
    double T_used = 0.0;
    long panels_used = 0;
};

// Boundary function h(1/2 + i tau) with its documented decay rate.
// `singularities` lists ordinates where log|h| blows up (log|zeta| case);
// `conj_symmetric` means h(-tau) = conj h(tau).
struct LineFunction {
    std::function<Complex(double)> eval;
    double decay_exponent = 0.0;
    std::vector<double> singularities;
    bool conj_symmetric = false;

    static LineFunction log_abs_zeta(const ZeroTable& zeros, double zeta_tol = 1e-10);
    static LineFunction neg_log_abs_w();
    static LineFunction one_over_w();
    static LineFunction one_over_w_plus(double a); // 1/(w + a), a >= 0
    static LineFunction rho_hat(const KernelSpec& spec, double zeta_tol = 1e-10);
};

// (1/2pi) int_{|tau|<=T} log|zeta(1/2+i tau)| / (1/4+tau^2) dtau, panels split
// at each tabulated zero +- delta with geometric grading into the ordinate.
// Requires zeros.max_height >= T.
LineIntegralResult bsy_integral(const LineQuadratureSpec& spec, const ZeroTable& zeros);

// (1/2pi) int log_modulus(w) (s + w - 2sw)/(s - w) |dw|/|w|^2 over |tau|<=T:
// the log of the outer factor built from boundary modulus data.
// Requires Re(s) - 1/2 >= 10 * delta.
LineIntegralResult outer_integral(const LineFunction& log_modulus, Complex s,
                                  const LineQuadratureSpec& spec);

struct FactorizationCheck {
    double residual = 0.0;
    Complex left_log{};      // log((s-1) zeta(s) / s)
    Complex outer_log{};     // outer_integral value
    Complex blaschke_log{};  // log B(s)
    LineIntegralResult outer;
    double zeta_error = 0.0;
};

// | log((s-1)zeta(s)/s) - (outer + log B(s)) | with the multiset defaulting
// to empty.  The singularity halfwidth is shrunk if s sits closer to the
// line than 10*delta.  Rejects s = 1 (that limit is bsy_integral).
FactorizationCheck factorization_residual(Complex s, const ZeroMultiset& ms,
                                          const LineQuadratureSpec& spec,
                                          const ZeroTable& zeros);

// (1/2pi) int h(1/2+i tau) / (s - 1/2 - i tau) dtau; equals h(s) up to the
// truncation tail for admissible h (decay_exponent >= 1).
LineIntegralResult cauchy_eval(const LineFunction& h, Complex s,
                               const LineQuadratureSpec& spec);

// (1/2pi) int conj(1/w - B(1) B(w)/w) B(w) h(w) |dw|; 0 in exact arithmetic.
LineIntegralResult lemma_orthogonality(const ZeroMultiset& ms, const LineFunction& h,
                                       const LineQuadratureSpec& spec);

// ||1/w - B(1) B(w)/w||^2 by truncated quadrature, compared against the
// Pythagoras value 1 - B(1)^2; returns the discrepancy and the pieces.
struct ProjectionCheck {
    double discrepancy = 0.0;
    double norm_sq = 0.0;
    double expected = 0.0; // 1 - B(1)^2
    LineIntegralResult integral;
};
ProjectionCheck synthetic_projection_residual(const ZeroMultiset& ms,
                                              const LineQuadratureSpec& spec);

// (1/2pi) int |h|^2 dtau over |tau| <= T (Paley-Wiener norm on the line).
LineIntegralResult line_norm_sq(const LineFunction& h, const LineQuadratureSpec& spec);

} // namespace nblab
