#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "gasket/fields.hpp"
#include "gasket/fit.hpp"
#include "gasket/graph.hpp"
#include "gasket/spectral.hpp"

namespace gasket {

/// Lazily built graphs and spectra, immutable once computed.
class SpectralCache {
public:
    explicit SpectralCache(int spectral_cap = kDefaultSpectralCap,
                           int graph_cap = kDefaultLevelCap)
        : spectral_cap_(spectral_cap), graph_cap_(graph_cap) {}

    const GasketGraph& graph(int m);
    const DirichletOperator& op(int m);
    const SpectralDecomposition& spectrum(int m);

private:
    int spectral_cap_;
    int graph_cap_;
    std::map<int, GasketGraph> graphs_;
    std::map<int, DirichletOperator> ops_;
    std::map<int, SpectralDecomposition> specs_;
};

struct ConvergenceReport {
    std::string experiment;
    nlohmann::json params;
    std::vector<int> levels;
    std::vector<double> observed;
    std::vector<double> diffs;  // successive differences of observed
    double extrapolated = 0.0;
    std::string tolerance;
    bool pass = false;
    nlohmann::json to_json() const;
};

struct RegimeFit {
    std::string experiment;
    nlohmann::json params;
    std::string regime;  // sub-critical | log | bounded
    std::vector<double> x, y;
    FitResult fit;
    double predicted = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    nlohmann::json to_json() const;
};

struct WeylReport {
    int level = 0;
    std::vector<double> t;
    std::vector<double> ratio;  // N(t) / t^{d_h/d_w}
    FitResult fit;              // log N vs log t
    double min_ratio = 0.0, max_ratio = 0.0;
    bool pass = false;
    nlohmann::json to_json() const;
};

struct SweepReport {
    std::vector<int> levels;
    int tracked = 0;                                // eigen-indices 1..tracked
    std::vector<std::vector<double>> eigenvalues;   // [level][j]
    bool pass = false;
    nlohmann::json to_json() const;
};

struct SobolevScanRow {
    double alpha = 0.0;
    double mc_total = 0.0;        // Monte Carlo mean of the partial-sum norm
    double expected_total = 0.0;  // sum_j lambda_j^{-alpha-2s}
    double tail_fraction = 0.0;   // mass of the upper half of the spectrum
    double expected_tail_fraction = 0.0;
    double se_units = 0.0;        // |mc - expected| in standard errors
};

struct SobolevScanReport {
    int level = 0;
    double s = 0.0;
    int samples = 0;
    std::vector<SobolevScanRow> rows;
    bool pass = false;  // every row within 5 SE of its exact expectation
    nlohmann::json to_json() const;
};

/// Classify the kernel-decay regime of G_s from s alone.
std::string regime_label(double s);

/// Eigenfunction surrogate: Phi_index computed at base_level, carried to
/// target_level by restriction (down) or harmonic extension (up).
TestFunction eigen_surrogate(SpectralCache& cache, int base_level, int index,
                             int target_level);

SweepReport eigen_level_sweep(SpectralCache& cache, int m_lo, int m_hi, int J);

WeylReport weyl_check(SpectralCache& cache, int m);

RegimeFit riesz_regime_fit(SpectralCache& cache, int m, double s, std::uint64_t seed);

ConvergenceReport semigroup_convergence(SpectralCache& cache, const TestFunction& f,
                                        double t, const std::vector<int>& levels);

ConvergenceReport quadratic_form_convergence(SpectralCache& cache, const TestFunction& f,
                                             double s, const std::vector<int>& levels);

/// exp(-1/2 * quadratic form at level m); the paper's convergence-in-law
/// criterion is convergence of this sequence in m.
double characteristic_functional(SpectralCache& cache, const TestFunction& f,
                                 double s, int m);

SobolevScanReport sobolev_membership_scan(SpectralCache& cache, double s,
                                          const std::vector<double>& alphas, int m,
                                          int n, std::uint64_t seed);

RegimeFit holder_exponent(SpectralCache& cache, double s, int n, int m,
                          std::uint64_t seed, long pairs_per_bin = 4000);

RegimeFit log_correlation_fit(SpectralCache& cache, int m, int n, std::uint64_t seed);

ConvergenceReport eigenfunction_supnorm_check(SpectralCache& cache,
                                              const std::vector<int>& levels);

RegimeFit lipschitz_kernel_check(SpectralCache& cache, int m, double s, int n_funcs,
                                 std::uint64_t seed);

/// Decay of the restriction-vs-cell-average gap ||f_m - bar f_m||_{L2(mu_m)}
/// across levels, with reference grids at m + M_offset.
RegimeFit lifting_decay(SpectralCache& cache, int m_lo, int m_hi, int M_offset,
                        int base_level, int index);

}  // namespace gasket
