#include "nblab/gram.hpp"

#include <algorithm>
#include <cmath>

#include "nblab/errors.hpp"
#include "nblab/parallel.hpp"

namespace nblab {

GramSystem build_gram(const std::vector<KernelSpec>& alphas, double cutoff) {
    for (std::size_t i = 0; i < alphas.size(); ++i)
        for (std::size_t j = i + 1; j < alphas.size(); ++j) {
            const bool dup = alphas[i].exact && alphas[j].exact
                                 ? alphas[i].alpha_rat == alphas[j].alpha_rat
                                 : alphas[i].alpha == alphas[j].alpha;
            if (dup)
                throw PreconditionError("build_gram: duplicate alpha " + alphas[i].str());
        }
    GramSystem sys;
    sys.alphas = alphas;
    sys.cutoff = cutoff;
    sys.entry_error_bound = cutoff;
    const std::size_t n = alphas.size();
    sys.matrix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                       static_cast<Eigen::Index>(n));
    sys.rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    if (n == 0) return sys;

    // One merged sweep accumulates all pair products and <1, rho_j> at once.
    // Plain per-chunk sums are fine: a chunk holds ~1e5 intervals, so the
    // worst-case rounding per entry stays around 1e-12; chunks are then
    // reduced with compensation in ascending-t order.
    SweepPlan plan(alphas, cutoff);
    const std::size_t pairs = n * (n + 1) / 2;
    const std::size_t stride = pairs + n;
    std::vector<double> slots(kSweepChunks * stride, 0.0);
    parallel_for(kSweepChunks, [&](std::size_t k) {
        double* out = slots.data() + k * stride;
        plan.sweep_chunk(k, [&](const double* rho, double dt) {
            std::size_t idx = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const double ri_dt = rho[i] * dt;
                for (std::size_t j = i; j < n; ++j)
                    out[idx++] += ri_dt * rho[j];
            }
            for (std::size_t i = 0; i < n; ++i) out[pairs + i] += rho[i] * dt;
        });
    });
    std::vector<Kahan> acc(stride);
    for (std::size_t k = kSweepChunks; k-- > 0;) {
        const double* in = slots.data() + k * stride;
        for (std::size_t i = 0; i < stride; ++i) acc[i].add(in[i]);
    }
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double v = acc[idx++].value();
            sys.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
            sys.matrix(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
        }
    for (std::size_t i = 0; i < n; ++i)
        sys.rhs(static_cast<Eigen::Index>(i)) = acc[pairs + i].value();
    return sys;
}

ProjectionResult distance_to_one(const GramSystem& system) {
    ProjectionResult r;
    const Eigen::Index n = system.matrix.rows();
    if (n == 0) {
        r.distance = 1.0;
        r.projection_norm = 0.0;
        return r;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(system.matrix);
    if (es.info() != Eigen::Success)
        throw ConvergenceError("distance_to_one: eigendecomposition failed");
    const Eigen::VectorXd& lam = es.eigenvalues();
    const Eigen::MatrixXd& U = es.eigenvectors();
    const double lam_max = lam.cwiseAbs().maxCoeff();
    const double cut = 1e-12 * lam_max;
    r.svd_cutoff_used = cut;
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
    double pn_sq = 0.0;
    int rank = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (lam(i) > cut) {
            const double proj = U.col(i).dot(system.rhs);
            c += (proj / lam(i)) * U.col(i);
            pn_sq += proj * proj / lam(i);
            ++rank;
        }
    }
    r.effective_rank = rank;
    r.coefficients.assign(c.data(), c.data() + n);
    pn_sq = std::clamp(pn_sq, 0.0, 1.0);
    r.projection_norm = std::sqrt(pn_sq);
    r.distance = std::sqrt(1.0 - pn_sq);
    return r;
}

std::vector<KernelSpec> reciprocal_family(int n) {
    std::vector<KernelSpec> fam;
    fam.reserve(static_cast<std::size_t>(std::max(n, 0)));
    for (int k = 2; k <= n + 1; ++k)
        fam.push_back(KernelSpec::from_rational(Rational(1, k)));
    return fam;
}

std::vector<DistanceRow> distance_sequence(int n_max, FamilyRule rule, double cutoff) {
    if (n_max < 1)
        throw PreconditionError("distance_sequence: n_max >= 1 required");
    if (rule != FamilyRule::reciprocal)
        throw PreconditionError("distance_sequence: unknown family rule");
    const GramSystem full = build_gram(reciprocal_family(n_max), cutoff);
    std::vector<DistanceRow> rows;
    rows.reserve(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) {
        GramSystem sub;
        sub.alphas.assign(full.alphas.begin(), full.alphas.begin() + n);
        sub.matrix = full.matrix.topLeftCorner(n, n);
        sub.rhs = full.rhs.head(n);
        sub.cutoff = full.cutoff;
        sub.entry_error_bound = full.entry_error_bound;
        const ProjectionResult pr = distance_to_one(sub);
        rows.push_back({n, pr.distance, pr.projection_norm});
    }
    return rows;
}

} // namespace nblab
