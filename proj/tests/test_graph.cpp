#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "gasket/graph.hpp"

using namespace gasket;

namespace {

std::int64_t pow3(int n) {
    std::int64_t v = 1;
    for (int i = 0; i < n; ++i) v *= 3;
    return v;
}

}  // namespace

TEST_CASE("closed-form counts for m = 0..6") {
    for (int m = 0; m <= 6; ++m) {
        const GasketGraph g = build_graph(m);
        CHECK(g.vertex_count() == 3 * (pow3(m) + 1) / 2);
        CHECK(g.edge_count() == pow3(m + 1));
        CHECK(g.interior_count() == (pow3(m + 1) - 3) / 2);
        int boundary = 0;
        for (int p = 0; p < g.vertex_count(); ++p) {
            const auto deg = g.neighbors[static_cast<std::size_t>(p)].size();
            if (g.boundary[static_cast<std::size_t>(p)]) {
                CHECK(deg == 2);
                ++boundary;
            } else {
                CHECK(deg == 4);
            }
        }
        CHECK(boundary == 3);
    }
}

TEST_CASE("level 1 and level 3 examples") {
    const GasketGraph g1 = build_graph(1);
    CHECK(g1.vertex_count() == 6);
    CHECK(g1.edge_count() == 9);
    CHECK(g1.interior_count() == 3);
    CHECK(g1.a() == 4.5);

    const GasketGraph g0 = build_graph(0);
    CHECK(g0.vertex_count() == 3);
    CHECK(g0.edge_count() == 3);
    CHECK(g0.interior_count() == 0);

    const GasketGraph g3 = build_graph(3);
    CHECK(g3.vertex_count() == 42);
    CHECK(g3.edge_count() == 81);
    CHECK(g3.interior_count() == 39);
}

TEST_CASE("every edge has exact length 2^-m") {
    for (int m = 0; m <= 5; ++m) {
        const GasketGraph g = build_graph(m);
        for (const auto& [i, j] : g.edges) CHECK(g.dist2_scaled(i, j) == 1);
    }
}

TEST_CASE("addresses are canonical words of length m+1") {
    const GasketGraph g = build_graph(2);
    std::set<std::string> seen;
    for (int i = 0; i < g.vertex_count(); ++i) {
        CHECK(g.addr[static_cast<std::size_t>(i)].size() == 3);
        seen.insert(g.addr[static_cast<std::size_t>(i)]);
        if (i > 0) CHECK(g.addr[static_cast<std::size_t>(i - 1)] < g.addr[static_cast<std::size_t>(i)]);
    }
    CHECK(static_cast<int>(seen.size()) == g.vertex_count());
}

TEST_CASE("nesting V_m in V_{m+1} is coordinate-exact") {
    for (int m = 0; m <= 5; ++m) {
        const GasketGraph gm = build_graph(m);
        const GasketGraph gm1 = build_graph(m + 1);
        const auto map = nesting_map(gm, gm1);
        for (int i = 0; i < gm.vertex_count(); ++i) {
            CHECK(gm.x[static_cast<std::size_t>(i)] * 2 == gm1.x[static_cast<std::size_t>(map[static_cast<std::size_t>(i)])]);
            CHECK(gm.y[static_cast<std::size_t>(i)] * 2 == gm1.y[static_cast<std::size_t>(map[static_cast<std::size_t>(i)])]);
        }
    }
}

TEST_CASE("level cap and negative level are rejected") {
    CHECK_THROWS(build_graph(-1));
    CHECK_THROWS(build_graph(13));
    CHECK_THROWS(build_graph(5, 4));
    CHECK_NOTHROW(build_graph(5, 5));
}

TEST_CASE("restriction") {
    const GasketGraph g1 = build_graph(1);
    const GasketGraph g2 = build_graph(2);
    const GasketGraph g3 = build_graph(3);

    SUBCASE("constant restricts to constant") {
        const Eigen::VectorXd ones = Eigen::VectorXd::Ones(g3.vertex_count());
        const Eigen::VectorXd r = restrict_values(ones, g3, g1);
        CHECK(r.size() == 6);
        CHECK(r.minCoeff() == 1.0);
        CHECK(r.maxCoeff() == 1.0);
    }

    SUBCASE("coordinate function restricts to coarse coordinates") {
        Eigen::VectorXd coord(g2.vertex_count());
        for (int p = 0; p < g2.vertex_count(); ++p)
            coord[p] = std::ldexp(static_cast<double>(g2.x[static_cast<std::size_t>(p)]), -2);
        const Eigen::VectorXd r = restrict_values(coord, g2, g1);
        for (int p = 0; p < g1.vertex_count(); ++p)
            CHECK(r[p] == std::ldexp(static_cast<double>(g1.x[static_cast<std::size_t>(p)]), -1));
    }

    SUBCASE("indicator of a level-2-only vertex restricts to zero") {
        const auto map = nesting_map(g1, g2);
        std::set<int> shared(map.begin(), map.end());
        int fresh = -1;
        for (int p = 0; p < g2.vertex_count(); ++p)
            if (!shared.count(p)) fresh = p;
        REQUIRE(fresh >= 0);
        Eigen::VectorXd ind = Eigen::VectorXd::Zero(g2.vertex_count());
        ind[fresh] = 1.0;
        CHECK(restrict_values(ind, g2, g1).cwiseAbs().maxCoeff() == 0.0);
    }

    SUBCASE("length mismatch is an error") {
        CHECK_THROWS(restrict_values(Eigen::VectorXd::Zero(5), g2, g1));
    }
}

TEST_CASE("discrete integral") {
    const GasketGraph g1 = build_graph(1);
    const GasketGraph g2 = build_graph(2);
    CHECK(discrete_integral(g1, Eigen::VectorXd::Ones(6)) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(discrete_integral(g2, Eigen::VectorXd::Zero(15)) == 0.0);
    Eigen::VectorXd ind = Eigen::VectorXd::Zero(15);
    ind[7] = 1.0;
    CHECK(discrete_integral(g2, ind) == doctest::Approx(1.0 / 13.5).epsilon(1e-15));
}

TEST_CASE("discrete integral of a smooth function is Cauchy across levels") {
    // f = planar x-coordinate, restricted from the continuum
    std::vector<double> integral;
    for (int m = 1; m <= 6; ++m) {
        const GasketGraph g = build_graph(m);
        Eigen::VectorXd f(g.vertex_count());
        for (int p = 0; p < g.vertex_count(); ++p)
            f[p] = std::ldexp(static_cast<double>(g.x[static_cast<std::size_t>(p)]) +
                                  0.5 * static_cast<double>(g.y[static_cast<std::size_t>(p)]),
                              -g.level);
        integral.push_back(discrete_integral(g, f));
    }
    for (std::size_t i = 0; i + 2 < integral.size(); ++i)
        CHECK(std::abs(integral[i + 2] - integral[i + 1]) < std::abs(integral[i + 1] - integral[i]));
}

TEST_CASE("voronoi quadrature") {
    const GasketGraph g1 = build_graph(1);

    SUBCASE("M = m degenerates to self-assignment") {
        const VoronoiCells cells = voronoi_quadrature(g1, g1);
        for (int i = 0; i < g1.vertex_count(); ++i) {
            CHECK(cells.assignment[static_cast<std::size_t>(i)] == i);
            CHECK(cells.measure[static_cast<std::size_t>(i)] == doctest::Approx(1.0 / 4.5).epsilon(1e-15));
        }
    }

    SUBCASE("cell measures partition the quadrature mass") {
        const GasketGraph g4 = build_graph(4);
        const VoronoiCells cells = voronoi_quadrature(g1, g4);
        double total = 0.0;
        for (double mu : cells.measure) total += mu;
        CHECK(total == doctest::Approx(123.0 / 121.5).epsilon(1e-14));  // #V_4 / a_4
    }

    SUBCASE("interior cells carry more mass than boundary cells") {
        const GasketGraph g6 = build_graph(6);
        const VoronoiCells cells = voronoi_quadrature(g1, g6);
        double min_interior = 1e30, max_boundary = 0.0;
        for (int i = 0; i < g1.vertex_count(); ++i) {
            if (g1.boundary[static_cast<std::size_t>(i)])
                max_boundary = std::max(max_boundary, cells.measure[static_cast<std::size_t>(i)]);
            else
                min_interior = std::min(min_interior, cells.measure[static_cast<std::size_t>(i)]);
        }
        CHECK(min_interior > max_boundary);
    }

    SUBCASE("every node lies within 2^-(m+1) of its cell center") {
        for (int m = 1; m <= 3; ++m) {
            const GasketGraph gm = build_graph(m);
            const GasketGraph gM = build_graph(m + 2);
            const VoronoiCells cells = voronoi_quadrature(gm, gM);
            const int shift = gM.level - gm.level;
            // d^2 <= 4^{-(m+1)} at scale 4^M means scaled d2 <= 4^{M-m-1}
            const std::int64_t bound = std::int64_t{1} << (2 * (gM.level - m - 1));
            for (int j = 0; j < gM.vertex_count(); ++j) {
                const int i = cells.assignment[static_cast<std::size_t>(j)];
                const std::int64_t dx = gM.x[static_cast<std::size_t>(j)] - (gm.x[static_cast<std::size_t>(i)] << shift);
                const std::int64_t dy = gM.y[static_cast<std::size_t>(j)] - (gm.y[static_cast<std::size_t>(i)] << shift);
                CHECK(dx * dx + dx * dy + dy * dy <= bound);
            }
        }
    }

    SUBCASE("reference level below cell level is an error") {
        CHECK_THROWS(voronoi_quadrature(build_graph(2), g1));
    }
}

TEST_CASE("harmonic extension is graph-harmonic at new vertices") {
    const GasketGraph g2 = build_graph(2);
    const GasketGraph g3 = build_graph(3);
    Eigen::VectorXd v(g2.vertex_count());
    for (int p = 0; p < g2.vertex_count(); ++p) v[p] = std::sin(1.0 + p);
    const Eigen::VectorXd w = harmonic_extension(g2, v, g3);

    const auto map = nesting_map(g2, g3);
    std::set<int> old(map.begin(), map.end());
    for (int i = 0; i < g2.vertex_count(); ++i)
        CHECK(w[map[static_cast<std::size_t>(i)]] == v[i]);
    for (int p = 0; p < g3.vertex_count(); ++p) {
        if (old.count(p)) continue;
        double lap = 0.0;
        for (int q : g3.neighbors[static_cast<std::size_t>(p)]) lap += w[q] - w[p];
        CHECK(std::abs(lap) < 1e-12);
    }
}
