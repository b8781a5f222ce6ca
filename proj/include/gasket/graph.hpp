#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace gasket {

inline constexpr int kDefaultLevelCap = 12;

/// Address of a pre-gasket vertex: a word over {1,2,3}. A word w of length
/// n denotes the point f_{w1} o ... o f_{w(n-1)} (p_{wn}), so vertices of V_m
/// carry words of length m+1. Interior and edge vertices have exactly two
/// such words; the canonical representative is the lexicographic minimum.
struct Address {
    std::string word;  // digits '1'..'3'
    int level() const { return static_cast<int>(word.size()); }
};

/// Level-m approximation graph G_m of the Sierpinski gasket.
///
/// Coordinates are stored exactly in the triangle-lattice frame: a vertex
/// with integer coordinates (x, y) at scale 2^m sits at the planar point
/// (x/2^m) e1 + (y/2^m) e2 with e1 = (1,0), e2 = (1/2, sqrt(3)/2). In this
/// frame every coordinate is a dyadic rational and the squared Euclidean
/// distance is the integer quadratic form dx^2 + dx*dy + dy^2 (at scale 4^m),
/// so vertex identification and distance comparison are exact.
struct GasketGraph {
    int level = 0;
    std::vector<std::int64_t> x, y;        // lattice numerators at scale 2^level
    std::vector<std::string> addr;         // canonical address words, length level+1
    std::vector<bool> boundary;            // true for the three corners V_0
    std::vector<std::pair<int, int>> edges;
    std::vector<std::vector<int>> neighbors;
    std::vector<std::array<int, 3>> cells;  // the 3^level smallest triangles

    int vertex_count() const { return static_cast<int>(x.size()); }
    int edge_count() const { return static_cast<int>(edges.size()); }
    int interior_count() const;

    /// Atom count normalizer a_m = 3^{m+1}/2 of the discrete measure mu_m.
    double a() const;

    /// Exact squared distance between vertices, in units of 4^{-level}.
    std::int64_t dist2_scaled(int i, int j) const;
    double distance(int i, int j) const;
};

GasketGraph build_graph(int m, int cap = kDefaultLevelCap);

/// For each vertex of the coarse graph, its index in the fine graph
/// (V_m is nested in V_M; matching is exact coordinate equality).
std::vector<int> nesting_map(const GasketGraph& coarse, const GasketGraph& fine);

/// Restrict values given on the fine vertex set to the coarse one.
Eigen::VectorXd restrict_values(const Eigen::VectorXd& on_fine,
                                const GasketGraph& fine, const GasketGraph& coarse);

/// (1/a_m) * sum of values over V_m.
double discrete_integral(const GasketGraph& g, const Eigen::VectorXd& values);

/// Voronoi partition of the deep node set V_M among the vertices of V_m.
struct VoronoiCells {
    int level_m = 0;
    int level_M = 0;
    std::vector<int> assignment;            // V_M node -> V_m vertex index
    std::vector<std::vector<int>> members;  // V_m vertex -> assigned V_M nodes
    std::vector<double> measure;            // approximate mu(C_p^m) = #members / a_M
};

/// Nearest-vertex assignment in exact arithmetic; ties go to the smaller
/// V_m index. Requires M > m (M == m degenerates to self-assignment).
VoronoiCells voronoi_quadrature(const GasketGraph& gm, const GasketGraph& gM);

/// Harmonic extension of vertex values from G_m to G_{m+1} (the 2:2:1 rule:
/// the new vertex opposite corner c in a cell (a,b,c) gets (2a+2b+c)/5).
Eigen::VectorXd harmonic_extension(const GasketGraph& gm, const Eigen::VectorXd& values,
                                   const GasketGraph& gm1);

}  // namespace gasket
