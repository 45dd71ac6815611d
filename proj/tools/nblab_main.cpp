// nblab: batch front end for the Nyman-Beurling numerical laboratory.
//
// Subcommands map onto the library operations; results serialize to JSON or
// CSV.  Outputs are byte-identical across runs and thread counts: every
// parallel reduction downstream runs in a fixed order.
//
// Exit codes: 0 success, 1 check failed, 2 usage, 3 input parse,
//             4 precondition violation, 5 convergence failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "nblab/blaschke.hpp"
#include "nblab/errors.hpp"
#include "nblab/gram.hpp"
#include "nblab/kernels.hpp"
#include "nblab/line_integrals.hpp"
#include "nblab/parallel.hpp"
#include "nblab/step_function.hpp"
#include "nblab/zero_table.hpp"
#include "nblab/zeta.hpp"

using nblab::Complex;
using json = nlohmann::ordered_json;

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

struct OutputSink {
    std::string path; // empty = stdout
    void write(const std::string& text) const {
        if (path.empty()) {
            std::cout << text;
            if (text.empty() || text.back() != '\n') std::cout << '\n';
            return;
        }
        std::ofstream out(path, std::ios::binary);
        if (!out) throw nblab::ParseError("cannot open output file '" + path + "'");
        out << text;
        if (text.empty() || text.back() != '\n') out << '\n';
    }
};

std::vector<nblab::KernelSpec> parse_alpha_list(const std::string& text) {
    std::vector<nblab::KernelSpec> out;
    std::stringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ','))
        if (!tok.empty()) out.push_back(nblab::KernelSpec::parse(tok));
    return out;
}

nblab::ZeroMultiset load_multiset(const std::string& file, const std::string& inline_toks) {
    if (!file.empty() && !inline_toks.empty())
        throw nblab::ParseError("give either --multiset or --zeros-inline, not both");
    if (!file.empty()) {
        std::ifstream in(file);
        if (!in) throw nblab::ParseError("cannot open multiset file '" + file + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        return nblab::ZeroMultiset::parse_json(ss.str());
    }
    if (!inline_toks.empty()) return nblab::ZeroMultiset::parse_inline(inline_toks);
    return {};
}

json line_result_json(const nblab::LineIntegralResult& r) {
    return json{{"value_re", r.value.real()},
                {"value_im", r.value.imag()},
                {"T", r.T_used},
                {"tail_estimate", r.truncation_tail_estimate},
                {"panel_error", r.panel_error_estimate},
                {"panels_used", r.panels_used}};
}

std::string line_result_csv(const nblab::LineIntegralResult& r) {
    std::string s = "value_re,value_im,T,tail_estimate,panel_error,panels_used\n";
    s += fmt17(r.value.real()) + "," + fmt17(r.value.imag()) + "," + fmt17(r.T_used) +
         "," + fmt17(r.truncation_tail_estimate) + "," +
         fmt17(r.panel_error_estimate) + "," + std::to_string(r.panels_used) + "\n";
    return s;
}

// --- self test -------------------------------------------------------------

int run_self_test(const std::string& zeros_path) {
    int failures = 0;
    auto check = [&](const std::string& name, bool ok, const std::string& detail = "") {
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name;
        if (!ok && !detail.empty()) std::cout << "  (" << detail << ")";
        std::cout << "\n";
        if (!ok) ++failures;
    };
    auto guarded = [&](const std::string& name, auto&& fn) {
        try {
            fn();
        } catch (const std::exception& e) {
            check(name, false, e.what());
        }
    };

    guarded("zeta(2) = pi^2/6", [&] {
        const double ref = 1.6449340668482264;
        check("zeta(2) = pi^2/6",
              std::abs(nblab::zeta(Complex(2, 0)).value.real() - ref) < 1e-10);
    });
    guarded("semigroup identity (rational pairs)", [&] {
        bool ok = true;
        const std::pair<nblab::Rational, nblab::Rational> pairs[] = {
            {{1, 2}, {1, 2}}, {{3, 10}, {4, 5}}};
        for (const auto& [a, l] : pairs) {
            const nblab::Rational eps{1, 1000};
            const auto rho_a = nblab::rho_as_step(nblab::KernelSpec::from_rational(a), eps);
            const auto lhs = nblab::semigroup_apply(l, rho_a);
            const nblab::Rational cut = l * eps;
            const auto rho_al =
                nblab::rho_as_step(nblab::KernelSpec::from_rational(a * l), cut);
            const auto rho_l =
                nblab::rho_as_step(nblab::KernelSpec::from_rational(l), cut);
            const auto combo = nblab::StepFunction::linear_combination(
                {{nblab::Rational(1), &rho_al}, {nblab::Rational(0) - a, &rho_l}});
            const auto rhs = combo.scaled(1.0 / std::sqrt(l.to_double()));
            ok = ok && lhs == rhs;
        }
        check("semigroup identity (rational pairs)", ok);
    });
    guarded("Mellin consistency at alpha=1/2, s=2", [&] {
        const auto spec = nblab::KernelSpec::parse("1/2");
        const auto f = nblab::rho_as_step(spec, nblab::Rational(1, 100000));
        const auto ms = nblab::mellin_step(f, Complex(2, 0));
        const auto closed = nblab::mellin_rho_closed(spec, Complex(2, 0));
        check("Mellin consistency at alpha=1/2, s=2",
              std::abs(ms.value - closed) <= ms.abs_error_bound + 1e-10);
    });
    guarded("Cauchy formula with h = 1/w at s = 2", [&] {
        nblab::LineQuadratureSpec qs;
        qs.truncation_height = 2000.0;
        const auto r = nblab::cauchy_eval(nblab::LineFunction::one_over_w(),
                                          Complex(2, 0), qs);
        check("Cauchy formula with h = 1/w at s = 2",
              std::abs(r.value - Complex(0.5, 0)) < 2e-3);
    });
    guarded("empty multiset trivia", [&] {
        nblab::ZeroMultiset empty;
        nblab::LineQuadratureSpec qs;
        qs.truncation_height = 100.0;
        const auto lem = nblab::lemma_orthogonality(
            empty, nblab::LineFunction::one_over_w_plus(1.0), qs);
        check("empty multiset trivia",
              nblab::blaschke_product(empty, Complex(3, 1)) == Complex(1, 0) &&
                  nblab::b_at_one(empty) == 1.0 && nblab::bsy_sum(empty) == 0.0 &&
                  lem.value == Complex(0, 0));
    });
    guarded("pairing <1, rho_{1/2}> vs (ln 2)/2", [&] {
        const auto ip = nblab::kernel_one_inner_product(
            nblab::KernelSpec::parse("1/2"), 1e-6);
        check("pairing <1, rho_{1/2}> vs (ln 2)/2",
              std::abs(ip.value - 0.5 * std::log(2.0)) <= ip.abs_error_bound + 1e-9);
    });
    guarded("zero table loads and first ordinate is a zero", [&] {
        const auto table = nblab::ZeroTable::load(zeros_path);
        bool ok = table.size() >= 10;
        if (ok) {
            const double g1 = table.ordinates().front();
            ok = std::abs(nblab::zeta(Complex(0.5, g1), 1e-10).value) < 1e-5;
        }
        check("zero table loads and first ordinate is a zero", ok);
    });

    std::cout << (failures == 0 ? "self-test: all checks passed\n"
                                : "self-test: " + std::to_string(failures) +
                                      " check(s) failed\n");
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"nblab: numerical laboratory for the Nyman-Beurling criterion, "
                 "Blaschke products, and critical-line integrals"};
    app.require_subcommand(1);

    int threads = 0;
    std::string format = "json";
    std::string output_path;
    app.add_option("--threads", threads, "worker threads (0 = hardware)")
        ->capture_default_str();
    app.add_option("--format", format, "output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    app.add_option("--output", output_path, "output file (default stdout)");
    app.fallthrough();

    // ---- zeta ----
    auto* c_zeta = app.add_subcommand("zeta", "evaluate zeta(s) near the critical strip");
    double z_re = 0, z_im = 0, z_tol = 1e-12;
    c_zeta->add_option("--re", z_re, "Re(s)")->required();
    c_zeta->add_option("--im", z_im, "Im(s)")->capture_default_str();
    c_zeta->add_option("--tol", z_tol, "error-estimate target")->capture_default_str();

    // ---- kernel ----
    auto* c_kernel = app.add_subcommand("kernel", "step representation of rho_alpha");
    std::string k_alpha = "1/2", k_cutoff = "1e-3";
    c_kernel->add_option("--alpha", k_alpha, "alpha in (0,1), 'p/q' or decimal")
        ->capture_default_str();
    c_kernel->add_option("--cutoff", k_cutoff, "representation cutoff (decimal or p/q)")
        ->capture_default_str();

    // ---- gram ----
    auto* c_gram = app.add_subcommand("gram", "distance from 1 to span{rho_alpha}");
    std::string g_alphas;
    double g_cutoff = 1e-8;
    c_gram->add_option("--alphas", g_alphas, "comma-separated alpha list")->required();
    c_gram->add_option("--cutoff", g_cutoff, "inner-product cutoff")->capture_default_str();

    // ---- distance ----
    auto* c_dist = app.add_subcommand("distance", "finite-section distance sequence d_N");
    int d_nmax = 10;
    double d_cutoff = 1e-8;
    c_dist->add_option("--n-max", d_nmax, "largest family size N")->capture_default_str();
    c_dist->add_option("--cutoff", d_cutoff, "inner-product cutoff")->capture_default_str();

    // ---- line-integral commands ----
    const std::string default_zeros = "data/zeros_h620.txt";
    auto add_quad_options = [](CLI::App* cmd, double& T, double& delta, double& tol,
                               int& base, int& depth, bool t_required = true) {
        auto* t_opt = cmd->add_option("--T", T, "truncation height");
        if (t_required) t_opt->required();
        cmd->add_option("--delta", delta, "singularity halfwidth")->capture_default_str();
        cmd->add_option("--tol", tol, "quadrature target tolerance")->capture_default_str();
        cmd->add_option("--base-panels", base, "minimum smooth subdivision")
            ->capture_default_str();
        cmd->add_option("--depth", depth, "adaptive bisection depth")->capture_default_str();
    };

    auto* c_bsy = app.add_subcommand("bsy", "critical-line integral of log|zeta|/|w|^2");
    double b_T = 0, b_delta = 0.05, b_tol = 1e-9;
    int b_base = 64, b_depth = 30;
    std::string b_zeros = default_zeros, b_tlist;
    add_quad_options(c_bsy, b_T, b_delta, b_tol, b_base, b_depth, false);
    c_bsy->add_option("--zeros", b_zeros, "zero-ordinate table")->capture_default_str();
    c_bsy->add_option("--t-list", b_tlist,
                      "comma-separated heights for a convergence study "
                      "(emits rows of T,value,tail_estimate)");

    auto* c_outer = app.add_subcommand("outer", "outer-factor log integral");
    double o_T = 0, o_delta = 0.05, o_tol = 1e-9, o_sre = 2, o_sim = 0;
    int o_base = 64, o_depth = 30;
    std::string o_zeros = default_zeros, o_modulus = "zeta";
    add_quad_options(c_outer, o_T, o_delta, o_tol, o_base, o_depth);
    c_outer->add_option("--s-re", o_sre, "Re(s)")->required();
    c_outer->add_option("--s-im", o_sim, "Im(s)")->capture_default_str();
    c_outer->add_option("--log-modulus", o_modulus, "boundary data: zeta or recip-w")
        ->check(CLI::IsMember({"zeta", "recip-w"}))
        ->capture_default_str();
    c_outer->add_option("--zeros", o_zeros, "zero-ordinate table")->capture_default_str();

    auto* c_factor = app.add_subcommand("factor-check",
                                        "inner/outer factorization residual");
    double f_T = 0, f_delta = 0.05, f_tol = 1e-9, f_sre = 2, f_sim = 0;
    int f_base = 64, f_depth = 30;
    std::string f_zeros = default_zeros, f_ms_file, f_ms_inline;
    add_quad_options(c_factor, f_T, f_delta, f_tol, f_base, f_depth);
    c_factor->add_option("--s-re", f_sre, "Re(s)")->required();
    c_factor->add_option("--s-im", f_sim, "Im(s)")->capture_default_str();
    c_factor->add_option("--zeros", f_zeros, "zero-ordinate table")->capture_default_str();
    c_factor->add_option("--multiset", f_ms_file, "off-line zero multiset (JSON)");
    c_factor->add_option("--zeros-inline", f_ms_inline, "inline multiset tokens");

    auto* c_cauchy = app.add_subcommand("cauchy", "Cauchy reproduction of h(s)");
    double y_T = 0, y_delta = 0.05, y_tol = 1e-9, y_sre = 2, y_sim = 0;
    int y_base = 64, y_depth = 30;
    std::string y_h = "inv_w";
    add_quad_options(c_cauchy, y_T, y_delta, y_tol, y_base, y_depth);
    c_cauchy->add_option("--s-re", y_sre, "Re(s)")->required();
    c_cauchy->add_option("--s-im", y_sim, "Im(s)")->capture_default_str();
    c_cauchy->add_option("--fn", y_h,
                         "test function: inv_w, inv_w1, or rho-hat:<alpha>")
        ->capture_default_str();

    auto* c_blaschke = app.add_subcommand("blaschke", "Blaschke product over a multiset");
    std::string bl_ms_file, bl_ms_inline;
    double bl_at_re = 1.0, bl_at_im = 0.0;
    c_blaschke->add_option("--multiset", bl_ms_file, "multiset JSON file");
    c_blaschke->add_option("--zeros-inline", bl_ms_inline, "inline multiset tokens");
    c_blaschke->add_option("--at", bl_at_re, "Re(s) of the evaluation point")
        ->capture_default_str();
    c_blaschke->add_option("--at-im", bl_at_im, "Im(s) of the evaluation point")
        ->capture_default_str();

    auto* c_lemma = app.add_subcommand("lemma-check", "orthogonality integral of the projection lemma");
    double l_T = 0, l_delta = 0.05, l_tol = 1e-9;
    int l_base = 64, l_depth = 30;
    std::string l_ms_file, l_ms_inline, l_h = "inv_w1";
    add_quad_options(c_lemma, l_T, l_delta, l_tol, l_base, l_depth);
    c_lemma->add_option("--multiset", l_ms_file, "multiset JSON file");
    c_lemma->add_option("--zeros-inline", l_ms_inline, "inline multiset tokens");
    c_lemma->add_option("--fn", l_h, "test function: inv_w, inv_w1, or rho-hat:<alpha>")
        ->capture_default_str();

    auto* c_project = app.add_subcommand("project-check",
                                         "projection-norm identity for synthetic zeros");
    double p_T = 0, p_delta = 0.05, p_tol = 1e-9;
    int p_base = 64, p_depth = 30;
    std::string p_ms_file, p_ms_inline;
    add_quad_options(c_project, p_T, p_delta, p_tol, p_base, p_depth);
    c_project->add_option("--multiset", p_ms_file, "multiset JSON file");
    c_project->add_option("--zeros-inline", p_ms_inline, "inline multiset tokens");

    auto* c_semi = app.add_subcommand("semigroup-check", "dilation identity as step functions");
    std::string s_alpha = "1/2", s_lambda = "1/2", s_cutoff = "1e-3";
    c_semi->add_option("--alpha", s_alpha, "rational alpha")->capture_default_str();
    c_semi->add_option("--lambda", s_lambda, "rational lambda in (0,1)")->capture_default_str();
    c_semi->add_option("--cutoff", s_cutoff, "rational/decimal cutoff")->capture_default_str();

    auto* c_self = app.add_subcommand("self-test", "identity suite");
    std::string st_zeros = "data/zeros100.txt";
    c_self->add_option("--zeros", st_zeros, "zero-ordinate table")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    nblab::set_thread_count(threads);
    OutputSink sink{output_path};

    auto make_quad = [](double T, double delta, double tol, int base, int depth) {
        nblab::LineQuadratureSpec q;
        q.truncation_height = T;
        q.singularity_halfwidth = delta;
        q.target_tol = tol;
        q.base_panel_count = base;
        q.refinement_limit = depth;
        return q;
    };
    auto parse_h = [](const std::string& name) {
        if (name == "inv_w") return nblab::LineFunction::one_over_w();
        if (name == "inv_w1") return nblab::LineFunction::one_over_w_plus(1.0);
        if (name.rfind("rho-hat:", 0) == 0)
            return nblab::LineFunction::rho_hat(
                nblab::KernelSpec::parse(name.substr(8)));
        throw nblab::ParseError("unknown test function '" + name + "'");
    };

    try {
        if (*c_zeta) {
            const auto zv = nblab::zeta(Complex(z_re, z_im), z_tol);
            if (format == "json") {
                json doc{{"command", "zeta"},
                         {"s", {{"re", z_re}, {"im", z_im}}},
                         {"value", {{"re", zv.value.real()}, {"im", zv.value.imag()}}},
                         {"abs_error_estimate", zv.abs_error_estimate}};
                sink.write(doc.dump(2));
            } else {
                sink.write("value_re,value_im,abs_error_estimate\n" +
                           fmt17(zv.value.real()) + "," + fmt17(zv.value.imag()) + "," +
                           fmt17(zv.abs_error_estimate) + "\n");
            }
        } else if (*c_kernel) {
            const auto spec = nblab::KernelSpec::parse(k_alpha);
            const auto cutoff = nblab::Rational::parse(k_cutoff);
            const auto f = nblab::rho_as_step(spec, cutoff);
            if (format == "csv") {
                std::string s = "t_right,value\n";
                for (std::size_t i = 0; i < f.size(); ++i)
                    s += fmt17(f.breakpoint(i)) + "," + fmt17(f.value(i)) + "\n";
                sink.write(s);
            } else {
                json bp = json::array(), vals = json::array();
                for (std::size_t i = 0; i < f.size(); ++i) {
                    if (f.exact()) {
                        bp.push_back(f.breakpoint_rational(i).str());
                        vals.push_back(f.value_rational(i).str());
                    } else {
                        bp.push_back(f.breakpoint(i));
                        vals.push_back(f.raw_value(i));
                    }
                }
                json doc{{"command", "kernel"},
                         {"alpha", spec.str()},
                         {"cutoff", f.exact() ? json(f.cutoff_rational().str())
                                              : json(f.cutoff())},
                         {"tail_bound", f.tail_bound()},
                         {"breakpoints", bp},
                         {"values", vals}};
                sink.write(doc.dump(2));
            }
        } else if (*c_gram) {
            const auto alphas = parse_alpha_list(g_alphas);
            const auto sys = nblab::build_gram(alphas, g_cutoff);
            const auto pr = nblab::distance_to_one(sys);
            if (format == "json") {
                json as = json::array();
                for (const auto& a : sys.alphas) as.push_back(a.str());
                json cs = json::array();
                for (double c : pr.coefficients) cs.push_back(c);
                json doc{{"alphas", as},
                         {"distance", pr.distance},
                         {"projection_norm", pr.projection_norm},
                         {"coefficients", cs},
                         {"effective_rank", pr.effective_rank},
                         {"cutoff", sys.cutoff},
                         {"entry_error_bound", sys.entry_error_bound}};
                sink.write(doc.dump(2));
            } else {
                sink.write("distance,projection_norm,effective_rank,svd_cutoff\n" +
                           fmt17(pr.distance) + "," + fmt17(pr.projection_norm) + "," +
                           std::to_string(pr.effective_rank) + "," +
                           fmt17(pr.svd_cutoff_used) + "\n");
            }
        } else if (*c_dist) {
            const auto rows =
                nblab::distance_sequence(d_nmax, nblab::FamilyRule::reciprocal, d_cutoff);
            if (format == "csv") {
                std::string s = "N,d_N,projection_norm_N\n";
                for (const auto& r : rows)
                    s += std::to_string(r.n) + "," + fmt17(r.distance) + "," +
                         fmt17(r.projection_norm) + "\n";
                sink.write(s);
            } else {
                json arr = json::array();
                for (const auto& r : rows)
                    arr.push_back(json{{"N", r.n},
                                       {"d_N", r.distance},
                                       {"projection_norm_N", r.projection_norm}});
                sink.write(json{{"command", "distance"},
                                {"cutoff", d_cutoff},
                                {"rows", arr}}
                               .dump(2));
            }
        } else if (*c_bsy) {
            if (b_tlist.empty() && !(b_T > 0))
                throw nblab::PreconditionError("bsy: give --T or --t-list");
            const auto table = nblab::ZeroTable::load(b_zeros);
            if (!b_tlist.empty()) {
                std::vector<double> heights;
                std::stringstream in(b_tlist);
                std::string tok;
                while (std::getline(in, tok, ','))
                    if (!tok.empty()) heights.push_back(std::stod(tok));
                std::string csv = "T,value,tail_estimate\n";
                json arr = json::array();
                for (double T : heights) {
                    const auto r = nblab::bsy_integral(
                        make_quad(T, b_delta, b_tol, b_base, b_depth), table);
                    csv += fmt17(T) + "," + fmt17(r.value.real()) + "," +
                           fmt17(r.truncation_tail_estimate) + "\n";
                    arr.push_back(json{{"T", T},
                                       {"value", r.value.real()},
                                       {"tail_estimate", r.truncation_tail_estimate}});
                }
                sink.write(format == "json" ? arr.dump(2) : csv);
            } else {
                const auto r = nblab::bsy_integral(
                    make_quad(b_T, b_delta, b_tol, b_base, b_depth), table);
                sink.write(format == "json" ? line_result_json(r).dump(2)
                                            : line_result_csv(r));
            }
        } else if (*c_outer) {
            const auto lm = o_modulus == "zeta"
                                ? nblab::LineFunction::log_abs_zeta(
                                      nblab::ZeroTable::load(o_zeros))
                                : nblab::LineFunction::neg_log_abs_w();
            const auto r = nblab::outer_integral(
                lm, Complex(o_sre, o_sim), make_quad(o_T, o_delta, o_tol, o_base, o_depth));
            sink.write(format == "json" ? line_result_json(r).dump(2)
                                        : line_result_csv(r));
        } else if (*c_factor) {
            const auto table = nblab::ZeroTable::load(f_zeros);
            const auto ms = load_multiset(f_ms_file, f_ms_inline);
            const auto r = nblab::factorization_residual(
                Complex(f_sre, f_sim), ms, make_quad(f_T, f_delta, f_tol, f_base, f_depth),
                table);
            json doc{{"residual", r.residual},
                     {"left_log", {{"re", r.left_log.real()}, {"im", r.left_log.imag()}}},
                     {"outer_log", {{"re", r.outer_log.real()}, {"im", r.outer_log.imag()}}},
                     {"blaschke_log",
                      {{"re", r.blaschke_log.real()}, {"im", r.blaschke_log.imag()}}},
                     {"tail_estimate", r.outer.truncation_tail_estimate},
                     {"panel_error", r.outer.panel_error_estimate},
                     {"zeta_error", r.zeta_error}};
            if (format == "json")
                sink.write(doc.dump(2));
            else
                sink.write("residual,tail_estimate,panel_error,zeta_error\n" +
                           fmt17(r.residual) + "," +
                           fmt17(r.outer.truncation_tail_estimate) + "," +
                           fmt17(r.outer.panel_error_estimate) + "," +
                           fmt17(r.zeta_error) + "\n");
        } else if (*c_cauchy) {
            const auto r = nblab::cauchy_eval(
                parse_h(y_h), Complex(y_sre, y_sim),
                make_quad(y_T, y_delta, y_tol, y_base, y_depth));
            sink.write(format == "json" ? line_result_json(r).dump(2)
                                        : line_result_csv(r));
        } else if (*c_blaschke) {
            const auto ms = load_multiset(bl_ms_file, bl_ms_inline);
            const Complex at(bl_at_re, bl_at_im);
            const Complex v = nblab::blaschke_product(ms, at);
            json doc{{"command", "blaschke"},
                     {"at", {{"re", at.real()}, {"im", at.imag()}}},
                     {"value_re", v.real()},
                     {"value_im", v.imag()},
                     {"modulus", std::abs(v)},
                     {"b_at_one", nblab::b_at_one(ms)},
                     {"bsy_sum", nblab::bsy_sum(ms)}};
            if (format == "json")
                sink.write(doc.dump(2));
            else
                sink.write("value_re,value_im,modulus,b_at_one,bsy_sum\n" +
                           fmt17(v.real()) + "," + fmt17(v.imag()) + "," +
                           fmt17(std::abs(v)) + "," + fmt17(nblab::b_at_one(ms)) + "," +
                           fmt17(nblab::bsy_sum(ms)) + "\n");
        } else if (*c_lemma) {
            const auto ms = load_multiset(l_ms_file, l_ms_inline);
            const auto r = nblab::lemma_orthogonality(
                ms, parse_h(l_h), make_quad(l_T, l_delta, l_tol, l_base, l_depth));
            json doc = line_result_json(r);
            doc["modulus"] = std::abs(r.value);
            sink.write(format == "json" ? doc.dump(2) : line_result_csv(r));
        } else if (*c_project) {
            const auto ms = load_multiset(p_ms_file, p_ms_inline);
            const auto r = nblab::synthetic_projection_residual(
                ms, make_quad(p_T, p_delta, p_tol, p_base, p_depth));
            json doc{{"norm_sq", r.norm_sq},
                     {"expected", r.expected},
                     {"discrepancy", r.discrepancy},
                     {"tail_estimate", r.integral.truncation_tail_estimate},
                     {"panel_error", r.integral.panel_error_estimate}};
            if (format == "json")
                sink.write(doc.dump(2));
            else
                sink.write("norm_sq,expected,discrepancy\n" + fmt17(r.norm_sq) + "," +
                           fmt17(r.expected) + "," + fmt17(r.discrepancy) + "\n");
        } else if (*c_semi) {
            const auto a = nblab::Rational::parse(s_alpha);
            const auto l = nblab::Rational::parse(s_lambda);
            const auto eps = nblab::Rational::parse(s_cutoff);
            const auto rho_a = nblab::rho_as_step(nblab::KernelSpec::from_rational(a), eps);
            if (l == nblab::Rational(1)) {
                // U(1) is the identity; the right side degenerates with it
                const bool equal = nblab::semigroup_apply(l, rho_a) == rho_a;
                json doc{{"command", "semigroup-check"},
                         {"alpha", a.str()},
                         {"lambda", "1"},
                         {"cutoff", eps.str()},
                         {"exact_equal", equal}};
                sink.write(doc.dump(2));
                return equal ? 0 : 1;
            }
            const auto lhs = nblab::semigroup_apply(l, rho_a);
            const auto cut = l * eps;
            const auto rho_al =
                nblab::rho_as_step(nblab::KernelSpec::from_rational(a * l), cut);
            const auto rho_l = nblab::rho_as_step(nblab::KernelSpec::from_rational(l), cut);
            const auto combo = nblab::StepFunction::linear_combination(
                {{nblab::Rational(1), &rho_al}, {nblab::Rational(0) - a, &rho_l}});
            const auto rhs = combo.scaled(1.0 / std::sqrt(l.to_double()));
            const bool equal = lhs == rhs;
            json doc{{"command", "semigroup-check"},
                     {"alpha", a.str()},
                     {"lambda", l.str()},
                     {"cutoff", eps.str()},
                     {"exact_equal", equal}};
            sink.write(doc.dump(2));
            return equal ? 0 : 1;
        } else if (*c_self) {
            return run_self_test(st_zeros);
        }
    } catch (const nblab::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const nblab::PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const nblab::ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const nblab::ZeroProximityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
