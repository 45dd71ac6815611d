#pragma once

#include <vector>

#include <Eigen/Dense>

#include "nblab/kernels.hpp"

namespace nblab {

// Symmetric system of kernel inner products: G_jk = <rho_j, rho_k>,
// rhs_j = <1, rho_j>, every entry carrying the shared cutoff tail bound.
struct GramSystem {
    std::vector<KernelSpec> alphas;
    Eigen::MatrixXd matrix;
    Eigen::VectorXd rhs;
    double entry_error_bound = 0.0;
    double cutoff = 0.0;
};

struct ProjectionResult {
    std::vector<double> coefficients;
    double distance = 1.0;
    double projection_norm = 0.0; // sqrt(1 - distance^2)
    int effective_rank = 0;
    double svd_cutoff_used = 0.0;
};

// Populates G and v in one merged sweep over the whole family's interval
// structure.  Duplicate alphas are rejected.
GramSystem build_gram(const std::vector<KernelSpec>& alphas, double cutoff);

// Least-squares distance from 1 to span{rho_alpha}: d^2 = 1 - v^T G^+ v via
// symmetric eigendecomposition with relative cutoff 1e-12 * lambda_max.
// Rank deficiency is truncated, reported, never fatal.
ProjectionResult distance_to_one(const GramSystem& system);

struct DistanceRow {
    int n = 0;
    double distance = 1.0;
    double projection_norm = 0.0;
};

enum class FamilyRule { reciprocal };

// Rows N = 1..n_max for the nested reciprocal family {1/2, ..., 1/(N+1)};
// one Gram build at full size, leading blocks solved per N.
std::vector<DistanceRow> distance_sequence(int n_max, FamilyRule rule, double cutoff);

// The family behind a sequence row (exact reciprocals 1/2..1/(n+1)).
std::vector<KernelSpec> reciprocal_family(int n);

} // namespace nblab
