#pragma once

#include <vector>

#include <Eigen/Dense>

#include "gasket/graph.hpp"

namespace gasket {

inline constexpr int kDefaultSpectralCap = 7;

/// Negative Dirichlet Laplacian -Delta_m restricted to interior vertices,
/// in the 5^m-scaled convention: diagonal 4*5^m, off-diagonal -5^m per
/// interior-interior edge; boundary columns dropped.
struct DirichletOperator {
    int level = 0;
    double a_m = 0.0;
    int vertex_count = 0;
    std::vector<int> interior;  // interior vertex indices, canonical order
    Eigen::MatrixXd matrix;     // N_m x N_m, symmetric positive definite
};

DirichletOperator assemble_dirichlet_laplacian(const GasketGraph& graph);

/// Full spectrum of -Delta_m. Eigenfunctions are orthonormal in L2(mu_m),
/// i.e. (1/a_m) sum_p Phi_i(p) Phi_j(p) = delta_ij, extended by zero on the
/// boundary, with the first nonzero entry of each mode positive.
struct SpectralDecomposition {
    int level = 0;
    double a_m = 0.0;
    int vertex_count = 0;
    std::vector<int> interior;
    Eigen::VectorXd eigenvalues;  // ascending, 5^m scale
    Eigen::MatrixXd modes;        // N_m x N_m; column i = Phi_i on interior

    int size() const { return static_cast<int>(eigenvalues.size()); }

    /// Spectral coefficients <f, Phi_i>_{mu_m} of a full-length vector.
    /// Boundary entries are ignored; *clipped is set if any were nonzero.
    Eigen::VectorXd coefficients(const Eigen::VectorXd& full, bool* clipped = nullptr) const;

    /// Full-length vector sum_i c_i Phi_i (zero on the boundary).
    Eigen::VectorXd synthesize(const Eigen::VectorXd& coeffs) const;

    /// Eigenfunction i as a full-length vector.
    Eigen::VectorXd eigenfunction(int i) const;
};

SpectralDecomposition eigendecompose(const DirichletOperator& op);

/// Riesz kernel matrix G_s^m = sum_i lambda_i^{-s} Phi_i Phi_i^T on interior
/// vertices.
Eigen::MatrixXd riesz_kernel(const SpectralDecomposition& spec, double s);

/// (-Delta_m)^{-s} f; any real s (negative s gives positive powers).
Eigen::VectorXd apply_fractional(const SpectralDecomposition& spec, double s,
                                 const Eigen::VectorXd& f, bool* clipped = nullptr);

/// Heat semigroup P_t^m f = sum_i e^{-lambda_i t} <f, Phi_i> Phi_i, t > 0.
Eigen::VectorXd heat_apply(const SpectralDecomposition& spec, double t,
                           const Eigen::VectorXd& f, bool* clipped = nullptr);

/// Discrete Dirichlet energy -(1/a_m) sum_p Delta_m f(p) g(p) for boundary-
/// vanishing f, g; throws if either is nonzero on V_0.
double dirichlet_energy(const GasketGraph& graph, const DirichletOperator& op,
                        const Eigen::VectorXd& f, const Eigen::VectorXd& g);

}  // namespace gasket
