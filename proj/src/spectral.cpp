#include "gasket/spectral.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gasket {

DirichletOperator assemble_dirichlet_laplacian(const GasketGraph& graph) {
    DirichletOperator op;
    op.level = graph.level;
    op.a_m = graph.a();
    op.vertex_count = graph.vertex_count();
    for (int i = 0; i < graph.vertex_count(); ++i)
        if (!graph.boundary[static_cast<std::size_t>(i)]) op.interior.push_back(i);
    const int n = static_cast<int>(op.interior.size());
    if (n == 0)
        throw std::invalid_argument("assemble_dirichlet_laplacian: level 0 has no interior vertices");

    std::vector<int> interior_pos(static_cast<std::size_t>(graph.vertex_count()), -1);
    for (int k = 0; k < n; ++k)
        interior_pos[static_cast<std::size_t>(op.interior[static_cast<std::size_t>(k)])] = k;

    const double w = std::pow(5.0, graph.level);
    op.matrix = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        op.matrix(k, k) = 4.0 * w;
        for (int q : graph.neighbors[static_cast<std::size_t>(op.interior[static_cast<std::size_t>(k)])]) {
            const int kq = interior_pos[static_cast<std::size_t>(q)];
            if (kq >= 0) op.matrix(k, kq) = -w;
        }
    }
    return op;
}

Eigen::VectorXd SpectralDecomposition::coefficients(const Eigen::VectorXd& full,
                                                    bool* clipped) const {
    if (full.size() != vertex_count)
        throw std::invalid_argument("coefficients: value array length does not match V_m");
    Eigen::VectorXd fi(size());
    for (int k = 0; k < size(); ++k)
        fi[k] = full[interior[static_cast<std::size_t>(k)]];
    if (clipped) {
        // interior indices are sorted; walk both lists to spot boundary mass
        bool clip = false;
        std::size_t k = 0;
        for (int p = 0; p < vertex_count; ++p) {
            if (k < interior.size() && interior[k] == p) {
                ++k;
            } else if (full[p] != 0.0) {
                clip = true;
            }
        }
        *clipped = clip;
    }
    return modes.transpose() * fi / a_m;
}

Eigen::VectorXd SpectralDecomposition::synthesize(const Eigen::VectorXd& coeffs) const {
    if (coeffs.size() != size())
        throw std::invalid_argument("synthesize: coefficient count does not match spectrum");
    const Eigen::VectorXd fi = modes * coeffs;
    Eigen::VectorXd full = Eigen::VectorXd::Zero(vertex_count);
    for (int k = 0; k < size(); ++k)
        full[interior[static_cast<std::size_t>(k)]] = fi[k];
    return full;
}

Eigen::VectorXd SpectralDecomposition::eigenfunction(int i) const {
    if (i < 0 || i >= size()) throw std::out_of_range("eigenfunction: index out of range");
    Eigen::VectorXd full = Eigen::VectorXd::Zero(vertex_count);
    for (int k = 0; k < size(); ++k)
        full[interior[static_cast<std::size_t>(k)]] = modes(k, i);
    return full;
}

SpectralDecomposition eigendecompose(const DirichletOperator& op) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(op.matrix);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigendecompose: solver failed at level " +
                                 std::to_string(op.level));

    SpectralDecomposition spec;
    spec.level = op.level;
    spec.a_m = op.a_m;
    spec.vertex_count = op.vertex_count;
    spec.interior = op.interior;
    spec.eigenvalues = solver.eigenvalues();
    // L2(mu_m) normalization: Eigen returns l2-orthonormal columns
    spec.modes = std::sqrt(op.a_m) * solver.eigenvectors();

    const int n = spec.size();
    if (spec.eigenvalues[0] <= 0.0)
        throw std::runtime_error("eigendecompose: nonpositive ground eigenvalue " +
                                 std::to_string(spec.eigenvalues[0]));

    // Sign convention: first nonzero entry in canonical vertex order positive.
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const double v = spec.modes(k, i);
            if (v != 0.0) {
                if (v < 0.0) spec.modes.col(i) = -spec.modes.col(i);
                break;
            }
        }
    }

    // Residual check on the worst mode.
    const Eigen::MatrixXd r = op.matrix * solver.eigenvectors() -
                              solver.eigenvectors() * spec.eigenvalues.asDiagonal();
    const double rel = r.cwiseAbs().maxCoeff() / spec.eigenvalues[n - 1];
    if (rel > 1e-9)
        throw std::runtime_error("eigendecompose: residual " + std::to_string(rel) +
                                 " exceeds 1e-9 at level " + std::to_string(op.level));
    return spec;
}

Eigen::MatrixXd riesz_kernel(const SpectralDecomposition& spec, double s) {
    if (s < 0.0) throw std::invalid_argument("riesz_kernel: s must be nonnegative");
    const Eigen::ArrayXd w = spec.eigenvalues.array().pow(-s);
    return spec.modes * w.matrix().asDiagonal() * spec.modes.transpose();
}

Eigen::VectorXd apply_fractional(const SpectralDecomposition& spec, double s,
                                 const Eigen::VectorXd& f, bool* clipped) {
    Eigen::VectorXd c = spec.coefficients(f, clipped);
    c.array() *= spec.eigenvalues.array().pow(-s);
    return spec.synthesize(c);
}

Eigen::VectorXd heat_apply(const SpectralDecomposition& spec, double t,
                           const Eigen::VectorXd& f, bool* clipped) {
    if (t <= 0.0) throw std::invalid_argument("heat_apply: t must be positive");
    Eigen::VectorXd c = spec.coefficients(f, clipped);
    c.array() *= (-t * spec.eigenvalues.array()).exp();
    return spec.synthesize(c);
}

double dirichlet_energy(const GasketGraph& graph, const DirichletOperator& op,
                        const Eigen::VectorXd& f, const Eigen::VectorXd& g) {
    if (f.size() != graph.vertex_count() || g.size() != graph.vertex_count())
        throw std::invalid_argument("dirichlet_energy: value array length does not match V_m");
    for (int p = 0; p < graph.vertex_count(); ++p) {
        if (graph.boundary[static_cast<std::size_t>(p)] && (f[p] != 0.0 || g[p] != 0.0))
            throw std::invalid_argument("dirichlet_energy: input nonzero on the boundary");
    }
    const int n = static_cast<int>(op.interior.size());
    Eigen::VectorXd fi(n), gi(n);
    for (int k = 0; k < n; ++k) {
        fi[k] = f[op.interior[static_cast<std::size_t>(k)]];
        gi[k] = g[op.interior[static_cast<std::size_t>(k)]];
    }
    return fi.dot(op.matrix * gi) / op.a_m;
}

}  // namespace gasket
