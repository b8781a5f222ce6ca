#include "gasket/fields.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "gasket/constants.hpp"
#include "gasket/rng.hpp"

namespace gasket {

FieldSample sample_dfgf(const SpectralDecomposition& spec, double s, std::uint64_t seed) {
    if (s < 0.0) throw std::invalid_argument("sample_dfgf: s must be nonnegative");
    const std::uint64_t key = rng::field_key(seed, spec.level);
    Eigen::VectorXd c(spec.size());
    for (int i = 0; i < spec.size(); ++i)
        c[i] = std::pow(spec.eigenvalues[i], -s) * rng::gaussian(key, static_cast<std::uint64_t>(i));

    FieldSample field;
    field.level = spec.level;
    field.s = s;
    field.seed = seed;
    field.a_m = spec.a_m;
    field.values = spec.synthesize(c);
    return field;
}

double pair_field(const FieldSample& field, const Eigen::VectorXd& f) {
    if (f.size() != field.values.size())
        throw std::invalid_argument("pair_field: value array length does not match V_m");
    return f.dot(field.values) / field.a_m;
}

TestFunction make_test_function(const GasketGraph& gM, Eigen::VectorXd values) {
    if (values.size() != gM.vertex_count())
        throw std::invalid_argument("make_test_function: value array length does not match V_M");
    TestFunction f;
    f.level = gM.level;
    f.boundary_vanishing = true;
    for (int p = 0; p < gM.vertex_count(); ++p)
        if (gM.boundary[static_cast<std::size_t>(p)] && values[p] != 0.0) f.boundary_vanishing = false;
    f.values = std::move(values);
    return f;
}

Eigen::VectorXd restrict_test_function(const TestFunction& f, const GasketGraph& gM,
                                       const GasketGraph& gm) {
    return restrict_values(f.values, gM, gm);
}

Eigen::VectorXd cell_average(const TestFunction& f, const VoronoiCells& cells) {
    if (f.level != cells.level_M)
        throw std::invalid_argument("cell_average: test function level does not match cells");
    Eigen::VectorXd avg(static_cast<int>(cells.members.size()));
    for (std::size_t p = 0; p < cells.members.size(); ++p) {
        const auto& nodes = cells.members[p];
        if (nodes.empty())
            throw std::runtime_error("cell_average: empty Voronoi cell at vertex " +
                                     std::to_string(p));
        double sum = 0.0;
        for (int j : nodes) sum += f.values[j];
        avg[static_cast<int>(p)] = sum / static_cast<double>(nodes.size());
    }
    return avg;
}

double lift_pair(const FieldSample& field, const TestFunction& f, const VoronoiCells& cells) {
    if (cells.level_m != field.level)
        throw std::invalid_argument("lift_pair: cell level does not match field level");
    return pair_field(field, [&] {
        // cell averages are indexed on V_m already
        Eigen::VectorXd bar = cell_average(f, cells);
        if (bar.size() != field.values.size())
            throw std::invalid_argument("lift_pair: cell count does not match V_m");
        return bar;
    }());
}

CovarianceReport empirical_covariance(const SpectralDecomposition& spec, double s,
                                      int n, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("empirical_covariance: need at least 2 samples");
    const int N = spec.size();
    const Eigen::ArrayXd damp = spec.eigenvalues.array().pow(-s);
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(N, N);
    Eigen::VectorXd c(N), xi(N);
    for (int k = 0; k < n; ++k) {
        const std::uint64_t key = rng::field_key(seed + static_cast<std::uint64_t>(k), spec.level);
        for (int i = 0; i < N; ++i)
            c[i] = damp[i] * rng::gaussian(key, static_cast<std::uint64_t>(i));
        xi.noalias() = spec.modes * c;
        acc.selfadjointView<Eigen::Lower>().rankUpdate(xi);
    }
    Eigen::MatrixXd emp = acc.selfadjointView<Eigen::Lower>();
    emp /= static_cast<double>(n);

    const Eigen::MatrixXd exact = riesz_kernel(spec, 2.0 * s);
    CovarianceReport report;
    report.level = spec.level;
    report.s = s;
    report.samples = n;
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j <= i; ++j) {
            const double dev = std::abs(emp(i, j) - exact(i, j));
            const double var = exact(i, i) * exact(j, j) + exact(i, j) * exact(i, j);
            const double se = std::sqrt(var / static_cast<double>(n));
            report.max_abs_dev = std::max(report.max_abs_dev, dev);
            report.max_se_dev = std::max(report.max_se_dev, dev / se);
        }
    }
    return report;
}

double covariance_functional(const SpectralDecomposition& spec, double s,
                             const Eigen::VectorXd& f, const Eigen::VectorXd& g) {
    const Eigen::VectorXd cf = spec.coefficients(f);
    const Eigen::VectorXd cg = spec.coefficients(g);
    return (spec.eigenvalues.array().pow(-2.0 * s) * cf.array() * cg.array()).sum();
}

double sobolev_norm(const Eigen::VectorXd& values, const SpectralDecomposition& spec,
                    double alpha) {
    const Eigen::VectorXd c = spec.coefficients(values);
    return (spec.eigenvalues.array().pow(-alpha) * c.array().square()).sum();
}

double sobolev_norm(const FieldSample& field, const SpectralDecomposition& spec, double alpha) {
    return sobolev_norm(field.values, spec, alpha);
}

std::vector<std::vector<std::pair<int, int>>> dyadic_pair_bins(
    const GasketGraph& graph, int k_min, int k_max, long cap, std::uint64_t seed) {
    if (k_min < 0 || k_max < k_min)
        throw std::invalid_argument("dyadic_pair_bins: bad scale range");

    std::vector<int> interior;
    for (int p = 0; p < graph.vertex_count(); ++p)
        if (!graph.boundary[static_cast<std::size_t>(p)]) interior.push_back(p);

    const int nbins = k_max - k_min + 1;
    std::vector<std::vector<std::pair<int, int>>> bins(static_cast<std::size_t>(nbins));
    std::vector<long> seen(static_cast<std::size_t>(nbins), 0);

    // squared-radius windows at scale 4^level, 10% multiplicative tolerance
    std::vector<double> lo(static_cast<std::size_t>(nbins)), hi(static_cast<std::size_t>(nbins));
    for (int k = k_min; k <= k_max; ++k) {
        const double r2 = std::ldexp(1.0, 2 * (graph.level - k));
        lo[static_cast<std::size_t>(k - k_min)] = 0.81 * r2;
        hi[static_cast<std::size_t>(k - k_min)] = 1.21 * r2;
    }

    for (std::size_t a = 0; a < interior.size(); ++a) {
        for (std::size_t b = a + 1; b < interior.size(); ++b) {
            const double d2 = static_cast<double>(graph.dist2_scaled(interior[a], interior[b]));
            for (int kb = 0; kb < nbins; ++kb) {
                const auto ub = static_cast<std::size_t>(kb);
                if (d2 < lo[ub] || d2 > hi[ub]) continue;
                auto& bin = bins[ub];
                const long count = ++seen[ub];
                if (static_cast<long>(bin.size()) < cap) {
                    bin.emplace_back(interior[a], interior[b]);
                } else {
                    // deterministic reservoir replacement
                    const std::uint64_t key = rng::stream_key(seed, static_cast<std::uint64_t>(kb));
                    const double u = rng::uniform01(
                        rng::counter_bits(key, static_cast<std::uint64_t>(count)));
                    const long slot = static_cast<long>(u * static_cast<double>(count));
                    if (slot < cap) bin[static_cast<std::size_t>(slot)] = {interior[a], interior[b]};
                }
                break;
            }
        }
    }
    return bins;
}

StructureFunction structure_function(const SpectralDecomposition& spec,
                                     const GasketGraph& graph, double s, int n,
                                     std::uint64_t seed, long pairs_per_bin) {
    if (s <= constants().critical_s)
        throw std::invalid_argument("structure_function: s must exceed the critical parameter");
    if (n < 100) throw std::invalid_argument("structure_function: need at least 100 samples");
    if (graph.level != spec.level)
        throw std::invalid_argument("structure_function: graph and spectrum level mismatch");

    const int k_min = 1, k_max = graph.level;
    const auto bins = dyadic_pair_bins(graph, k_min, k_max, pairs_per_bin, seed);
    for (std::size_t kb = 0; kb < bins.size(); ++kb)
        if (bins[kb].empty())
            throw std::runtime_error("structure_function: no pairs at scale 2^-" +
                                     std::to_string(k_min + static_cast<int>(kb)));

    std::vector<std::vector<double>> pair_acc(bins.size());
    for (std::size_t kb = 0; kb < bins.size(); ++kb)
        pair_acc[kb].assign(bins[kb].size(), 0.0);
    for (int k = 0; k < n; ++k) {
        const FieldSample field = sample_dfgf(spec, s, seed + static_cast<std::uint64_t>(k));
        for (std::size_t kb = 0; kb < bins.size(); ++kb) {
            for (std::size_t q = 0; q < bins[kb].size(); ++q) {
                const auto& [i, j] = bins[kb][q];
                const double d = field.values[i] - field.values[j];
                pair_acc[kb][q] += d * d;
            }
        }
    }

    StructureFunction sf;
    for (std::size_t kb = 0; kb < bins.size(); ++kb) {
        sf.r.push_back(std::ldexp(1.0, -(k_min + static_cast<int>(kb))));
        double total = 0.0, sup = 0.0;
        for (double a : pair_acc[kb]) {
            total += a;
            sup = std::max(sup, a);
        }
        sf.value.push_back(total / (static_cast<double>(n) * static_cast<double>(bins[kb].size())));
        sf.envelope.push_back(sup / static_cast<double>(n));
        sf.pair_count.push_back(static_cast<long>(bins[kb].size()));
    }
    return sf;
}

}  // namespace gasket
