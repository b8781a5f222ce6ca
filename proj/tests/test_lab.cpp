#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gasket/constants.hpp"
#include "gasket/lab.hpp"

using namespace gasket;

TEST_CASE("regime labels") {
    const double ratio = constants().spectral_ratio;
    CHECK(regime_label(0.0) == "sub-critical");
    CHECK(regime_label(0.3) == "sub-critical");
    CHECK(regime_label(ratio) == "log");
    CHECK(regime_label(ratio + 1e-6) == "bounded");
    CHECK(regime_label(1.0) == "bounded");
}

TEST_CASE("spectral cache") {
    SpectralCache cache(3);
    const GasketGraph& g = cache.graph(2);
    CHECK(&g == &cache.graph(2));  // cached, not rebuilt
    const SpectralDecomposition& spec = cache.spectrum(3);
    CHECK(&spec == &cache.spectrum(3));
    CHECK_THROWS(cache.spectrum(4));  // above the spectral cap
}

TEST_CASE("eigen level sweep") {
    SpectralCache cache;
    CHECK_THROWS(eigen_level_sweep(cache, 3, 2, 1));
    CHECK_THROWS(eigen_level_sweep(cache, 1, 2, 4));  // N_1 = 3

    const SweepReport rep = eigen_level_sweep(cache, 1, 4, 3);
    CHECK(rep.levels == std::vector<int>{1, 2, 3, 4});
    CHECK(rep.tracked == 3);
    for (const auto& row : rep.eigenvalues) {
        REQUIRE(row.size() == 3);
        CHECK(row[0] > 0.0);
        CHECK(row[0] <= row[1]);
        CHECK(row[1] <= row[2]);
    }
    CHECK(rep.pass);
    CHECK(rep.to_json().contains("eigenvalues"));
}

TEST_CASE("weyl check") {
    SpectralCache cache;
    CHECK_THROWS(weyl_check(cache, 3));

    const WeylReport rep = weyl_check(cache, 5);
    CHECK(rep.level == 5);
    CHECK(rep.t.size() == 60);
    CHECK(rep.min_ratio > 0.0);
    CHECK(rep.max_ratio >= rep.min_ratio);
    // counting exponent is already close at level 5
    CHECK(rep.fit.slope > 0.5);
    CHECK(rep.fit.slope < 0.9);
}

TEST_CASE("characteristic functional") {
    SpectralCache cache;
    const GasketGraph& g4 = cache.graph(4);

    SUBCASE("f = 0 gives exactly 1") {
        const TestFunction zero = make_test_function(g4, Eigen::VectorXd::Zero(g4.vertex_count()));
        CHECK(characteristic_functional(cache, zero, 0.5, 3) == 1.0);
    }

    SUBCASE("always in (0, 1]") {
        const TestFunction f = eigen_surrogate(cache, 3, 0, 4);
        for (double s : {0.0, 0.5, 1.0}) {
            const double v = characteristic_functional(cache, f, s, 3);
            CHECK(v > 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("semigroup convergence") {
    SpectralCache cache;
    const TestFunction f = eigen_surrogate(cache, 2, 0, 5);

    CHECK_THROWS(semigroup_convergence(cache, f, 0.0, {2, 3}));

    SUBCASE("large t kills everything") {
        const ConvergenceReport rep = semigroup_convergence(cache, f, 10.0, {2, 3, 4});
        for (double v : rep.observed) CHECK(v < 1e-12);
    }

    SUBCASE("bounded by the spectral gap") {
        const double t = 0.01;
        const ConvergenceReport rep = semigroup_convergence(cache, f, t, {3});
        const SpectralDecomposition& spec = cache.spectrum(3);
        const Eigen::VectorXd c = spec.coefficients(
            restrict_values(f.values, cache.graph(5), cache.graph(3)));
        CHECK(rep.observed[0] <= std::exp(-spec.eigenvalues[0] * t) * c.squaredNorm() + 1e-12);
    }

    SUBCASE("observed values stabilize across levels") {
        const ConvergenceReport rep = semigroup_convergence(cache, f, 0.01, {2, 3, 4, 5});
        REQUIRE(rep.diffs.size() == 3);
        CHECK(std::abs(rep.diffs[2]) < std::abs(rep.diffs[0]));
    }
}

TEST_CASE("quadratic form convergence") {
    SpectralCache cache;
    const TestFunction f = eigen_surrogate(cache, 2, 0, 5);

    CHECK_THROWS(quadratic_form_convergence(cache, f, -0.1, {2, 3}));

    SUBCASE("s = 0 is Parseval: L2 norm of the restriction") {
        const ConvergenceReport rep = quadratic_form_convergence(cache, f, 0.0, {3});
        const GasketGraph& g3 = cache.graph(3);
        const Eigen::VectorXd r = restrict_values(f.values, cache.graph(5), g3);
        Eigen::VectorXd ri = r;
        for (int p = 0; p < g3.vertex_count(); ++p)
            if (g3.boundary[static_cast<std::size_t>(p)]) ri[p] = 0.0;
        CHECK(rep.observed[0] == doctest::Approx(ri.squaredNorm() / g3.a()).epsilon(1e-10));
    }

    SUBCASE("level sequence stabilizes") {
        const ConvergenceReport rep = quadratic_form_convergence(cache, f, 0.5, {2, 3, 4, 5});
        REQUIRE(rep.diffs.size() == 3);
        CHECK(std::abs(rep.diffs[2]) < std::abs(rep.diffs[0]));
    }
}

TEST_CASE("sobolev membership scan") {
    SpectralCache cache;
    CHECK_THROWS(sobolev_membership_scan(cache, 0.5, {0.0}, 3, 0, 1));

    const SobolevScanReport rep = sobolev_membership_scan(cache, 0.5, {-0.5, 0.0, 0.5}, 3, 400, 9);
    REQUIRE(rep.rows.size() == 3);
    for (const auto& row : rep.rows) {
        const double expected =
            cache.spectrum(3).eigenvalues.array().pow(-row.alpha - 1.0).sum();
        CHECK(row.expected_total == doctest::Approx(expected).epsilon(1e-12));
        CHECK(row.tail_fraction >= 0.0);
        CHECK(row.tail_fraction <= 1.0);
    }
    CHECK(rep.pass);
}

TEST_CASE("eigen surrogate") {
    SpectralCache cache;

    SUBCASE("target = base is the eigenfunction itself") {
        const TestFunction f = eigen_surrogate(cache, 3, 1, 3);
        CHECK((f.values - cache.spectrum(3).eigenfunction(1)).cwiseAbs().maxCoeff() == 0.0);
        CHECK(f.boundary_vanishing);
    }

    SUBCASE("extension preserves base values") {
        const TestFunction f = eigen_surrogate(cache, 2, 0, 4);
        const Eigen::VectorXd back = restrict_values(f.values, cache.graph(4), cache.graph(2));
        CHECK((back - cache.spectrum(2).eigenfunction(0)).cwiseAbs().maxCoeff() < 1e-14);
    }

    SUBCASE("restriction target below base") {
        const TestFunction f = eigen_surrogate(cache, 3, 0, 2);
        const Eigen::VectorXd expected =
            restrict_values(cache.spectrum(3).eigenfunction(0), cache.graph(3), cache.graph(2));
        CHECK((f.values - expected).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("precondition errors of the deep-level experiments") {
    SpectralCache cache;
    CHECK_THROWS(riesz_regime_fit(cache, 4, 0.3, 1));
    CHECK_THROWS(riesz_regime_fit(cache, 5, -0.1, 1));
    CHECK_THROWS(holder_exponent(cache, 0.5, 100, 4, 1));
    CHECK_THROWS(log_correlation_fit(cache, 4, 10, 1));
    CHECK_THROWS(lipschitz_kernel_check(cache, 5, 0.2, 1, 1));   // below critical
    CHECK_THROWS(lipschitz_kernel_check(cache, 5, 0.9, 1, 1));   // above 1 - critical
    CHECK_THROWS(lipschitz_kernel_check(cache, 4, 0.5, 1, 1));
    CHECK_THROWS(lifting_decay(cache, 3, 2, 4, 3, 0));
    CHECK_THROWS(lifting_decay(cache, 2, 3, 0, 3, 0));
}

TEST_CASE("riesz regime fit at level 5 (smoke)") {
    SpectralCache cache;

    SUBCASE("bounded regime compares sup norms") {
        const RegimeFit rep = riesz_regime_fit(cache, 5, 1.0, 11);
        CHECK(rep.regime == "bounded");
        REQUIRE(rep.y.size() == 2);
        CHECK(rep.y[0] > 0.0);
        CHECK(rep.y[1] > 0.0);
    }

    SUBCASE("sub-critical regime produces a negative log-log slope") {
        const RegimeFit rep = riesz_regime_fit(cache, 5, 0.3, 11);
        CHECK(rep.regime == "sub-critical");
        CHECK(rep.fit.slope < 0.0);
        CHECK(rep.predicted == doctest::Approx(-(constants().d_h - 0.3 * constants().d_w)).epsilon(1e-12));
    }
}

TEST_CASE("eigenfunction supnorm ratio is level-stable") {
    SpectralCache cache;
    const ConvergenceReport rep = eigenfunction_supnorm_check(cache, {3, 4, 5});
    REQUIRE(rep.observed.size() == 3);
    for (double v : rep.observed) CHECK(v > 0.0);
    CHECK(rep.pass);
}

TEST_CASE("lifting decay produces a positive rate") {
    SpectralCache cache;
    const RegimeFit rep = lifting_decay(cache, 2, 4, 3, 4, 0);
    REQUIRE(rep.y.size() == 3);
    for (double v : rep.y) CHECK(v > 0.0);
    CHECK(rep.fit.slope < 0.0);  // error decays with m
}

TEST_CASE("report JSON round-trips the pass flag") {
    SpectralCache cache;
    const WeylReport rep = weyl_check(cache, 5);
    const nlohmann::json j = rep.to_json();
    CHECK(j["experiment"] == "weyl");
    CHECK(j["pass"].is_boolean());
    CHECK(j["fit"].contains("exponent"));
}
