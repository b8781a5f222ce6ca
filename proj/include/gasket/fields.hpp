#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "gasket/graph.hpp"
#include "gasket/spectral.hpp"

namespace gasket {

/// One realization of the discrete fractional Gaussian field X_s^m on V_m,
/// zero on the boundary. Regenerating with the same (level, s, seed)
/// reproduces the values bit-exactly.
struct FieldSample {
    int level = 0;
    double s = 0.0;
    std::uint64_t seed = 0;
    double a_m = 0.0;
    Eigen::VectorXd values;  // full vertex set, zero on V_0
};

/// X_s^m = sum_i lambda_i^{-s} Phi_i W_i with W_i from the counter generator
/// keyed by (seed, level, i). The W_i are shared across s at a fixed level.
FieldSample sample_dfgf(const SpectralDecomposition& spec, double s, std::uint64_t seed);

/// Discrete pairing X(f) = (1/a_m) sum_p f(p) X(p).
double pair_field(const FieldSample& field, const Eigen::VectorXd& f);

/// A function on K represented by its values on a reference grid V_M.
struct TestFunction {
    int level = 0;
    Eigen::VectorXd values;
    bool boundary_vanishing = true;
};

TestFunction make_test_function(const GasketGraph& gM, Eigen::VectorXd values);

/// Restriction f|_{V_m} of a test function to a coarser grid.
Eigen::VectorXd restrict_test_function(const TestFunction& f, const GasketGraph& gM,
                                       const GasketGraph& gm);

/// Voronoi cell averages: for each V_m vertex, the mean of f over the V_M
/// nodes assigned to its cell.
Eigen::VectorXd cell_average(const TestFunction& f, const VoronoiCells& cells);

/// Lifted pairing X(bar f_m) with bar f_m the cell averages.
double lift_pair(const FieldSample& field, const TestFunction& f, const VoronoiCells& cells);

struct CovarianceReport {
    int level = 0;
    double s = 0.0;
    int samples = 0;
    double max_abs_dev = 0.0;  // entrywise vs the exact kernel G_{2s}^m
    double max_se_dev = 0.0;   // same, in Gaussian standard-error units
};

/// Empirical covariance of n independent samples over interior vertices,
/// compared entrywise against the exact kernel. Standard errors use the
/// centered-Gaussian moment formula Var(X_p X_q) = G_pp G_qq + G_pq^2.
CovarianceReport empirical_covariance(const SpectralDecomposition& spec, double s,
                                      int n, std::uint64_t seed);

/// Exact covariance E(X_s(f) X_s(g)) = (1/a_m) sum_p (-Delta)^{-s}f (-Delta)^{-s}g.
double covariance_functional(const SpectralDecomposition& spec, double s,
                             const Eigen::VectorXd& f, const Eigen::VectorXd& g);

/// Spectral Sobolev norm sum_j lambda_j^{-alpha} X(Phi_j)^2 over the level-m
/// spectrum (negative alpha gives the positive-order norm).
double sobolev_norm(const FieldSample& field, const SpectralDecomposition& spec, double alpha);
double sobolev_norm(const Eigen::VectorXd& values, const SpectralDecomposition& spec, double alpha);

struct StructureFunction {
    std::vector<double> r;         // dyadic radii 2^{-k}
    std::vector<double> value;     // mean squared increment over pairs in the bin
    std::vector<double> envelope;  // max over pairs of the per-pair sample mean
    std::vector<long> pair_count;
};

/// Mean squared increment E(X(x)-X(y))^2 over interior vertex pairs binned at
/// dyadic distances (multiplicative tolerance 10%), averaged over n sampled
/// fields. Pairs per bin are capped by a deterministic subsample.
StructureFunction structure_function(const SpectralDecomposition& spec,
                                     const GasketGraph& graph, double s, int n,
                                     std::uint64_t seed, long pairs_per_bin = 4000);

/// Dyadic pair bins used by the structure function and the kernel regime
/// fits: bin k holds interior pairs with d(x,y) within 10% of 2^{-k}.
std::vector<std::vector<std::pair<int, int>>> dyadic_pair_bins(
    const GasketGraph& graph, int k_min, int k_max, long cap, std::uint64_t seed);

}  // namespace gasket
