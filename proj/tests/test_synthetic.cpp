#include <hodgeloop/hodge.hpp>
#include <hodgeloop/synthetic.hpp>

#include <doctest.h>

#include "oracles.hpp"

#include <cmath>
#include <set>

using namespace hodgeloop;

TEST_CASE("noise-free torus points satisfy the parameterization exactly") {
    auto synth = synth_manifold(ManifoldName::torus, 400, 0.0, 3);
    REQUIRE(synth.cloud.size() == 400);
    REQUIRE(synth.cloud.dim() == 13);
    CHECK(synth.beta1_truth == 2);
    for (int i = 0; i < 400; ++i) {
        const double t1 = synth.intrinsic(i, 0), t2 = synth.intrinsic(i, 1);
        CHECK(synth.cloud.points(i, 0) ==
              doctest::Approx((1 + 0.5 * std::cos(t1)) * std::cos(t2)).epsilon(1e-12));
        CHECK(synth.cloud.points(i, 1) ==
              doctest::Approx((1 + 0.5 * std::cos(t1)) * std::sin(t2)).epsilon(1e-12));
        CHECK(synth.cloud.points(i, 2) ==
              doctest::Approx(1 + 0.5 * std::sin(t1)).epsilon(1e-12));
        CHECK(synth.cloud.points.row(i).tail(10).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("ground-truth Betti numbers of the shipped manifolds") {
    CHECK(synth_manifold(ManifoldName::torus, 150, 0.0, 0).beta1_truth == 2);
    CHECK(synth_manifold(ManifoldName::three_torus, 150, 0.0, 0).beta1_truth == 3);
    CHECK(synth_manifold(ManifoldName::genus2, 150, 0.0, 0).beta1_truth == 4);
    CHECK(synth_manifold(ManifoldName::punctplane, 150, 0.0, 0).beta1_truth == 2);
    CHECK(synth_manifold(ManifoldName::tori_concat, 150, 0.0, 0).beta1_truth == 8);
}

TEST_CASE("genus2 samples satisfy the implicit surface equation") {
    auto synth = synth_manifold(ManifoldName::genus2, 200, 0.0, 1);
    std::set<int> labels;
    for (int i = 0; i < 200; ++i) {
        const double x1 = synth.cloud.points(i, 0);
        const double x2 = synth.cloud.points(i, 1);
        const double x3 = synth.cloud.points(i, 2);
        const double s = x1 * x1 + x2 * x2;
        const double f = s * s - 0.75 * x1 * x1 + 0.75 * x2 * x2;
        CHECK(std::abs(f * f + x3 * x3 - 0.01) < 1e-12);
        labels.insert(synth.prime_label[i]);
    }
    CHECK(labels == std::set<int>{0, 1});  // both handles are sampled
}

TEST_CASE("punctplane geometry: holes stay empty, bridge exists, labels split") {
    auto synth = synth_manifold(ManifoldName::punctplane, 600, 0.0, 5);
    int bridge_points = 0;
    std::set<int> labels;
    for (int i = 0; i < 600; ++i) {
        const double x = synth.cloud.points(i, 0);
        const double y = synth.cloud.points(i, 1);
        labels.insert(synth.prime_label[i]);
        if (x <= 1.0) {
            CHECK_FALSE((x > 1.0 / 3 && x < 2.0 / 3 && y > 1.0 / 3 && y < 2.0 / 3));
        } else if (x < 1.0 + 0.5) {
            // gap region: only bridge points may live here
            ++bridge_points;
        }
    }
    CHECK(labels == std::set<int>{0, 1});
    CHECK(bridge_points > 0);
}

TEST_CASE("tori_concat splits points across four labeled tori") {
    auto synth = synth_manifold(ManifoldName::tori_concat, 400, 0.0, 2);
    std::set<int> labels(synth.prime_label.begin(), synth.prime_label.end());
    CHECK(labels == std::set<int>{0, 1, 2, 3});
}

TEST_CASE("synth_manifold is deterministic and validates input") {
    auto a = synth_manifold(ManifoldName::torus, 150, 0.1, 7);
    auto b = synth_manifold(ManifoldName::torus, 150, 0.1, 7);
    CHECK(a.cloud.points == b.cloud.points);
    CHECK_THROWS_AS(synth_manifold(ManifoldName::torus, 50, 0.0, 0), InputError);
    CHECK_THROWS_AS(synth_manifold(ManifoldName::torus, 150, -1.0, 0), InputError);
    CHECK_THROWS_AS(manifold_from_string("klein_bottle"), InputError);
    CHECK(manifold_from_string("genus2") == ManifoldName::genus2);
}

TEST_CASE("flat torus grid carries machine-precision harmonics") {
    auto grid = flat_torus_grid(8);
    grid.complex.validate();
    auto [b1, b2] = boundary_maps(grid.complex);
    CHECK(boundary_product_is_zero(b1, b2));

    auto sys = assemble(grid.complex, Vec::Ones(grid.complex.n2()));
    CHECK(sys.floored_k == 0);
    for (int j = 0; j < 2; ++j) {
        Vec h = grid.harmonics.col(j);
        CHECK((sys.L * h).cwiseAbs().maxCoeff() < 1e-14);
    }
    // a mixed combination stays exactly harmonic
    Vec mix = 0.6 * grid.harmonics.col(0) - 1.3 * grid.harmonics.col(1);
    CHECK((sys.L * mix).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("flat torus cloud wraps its metric") {
    auto cloud = flat_torus_cloud(6, 2.0, 2.0, 0.2, 0);
    REQUIRE(cloud.cloud.size() == 36);
    auto dist = cloud.metric();
    Eigen::RowVectorXd a(2), b(2);
    a << 0.05, 0.05;
    b << 1.95, 1.95;
    CHECK(dist(a, b) == doctest::Approx(std::sqrt(0.02)));  // wraps both axes
    for (int i = 0; i < 36; ++i) {
        CHECK(cloud.cloud.points(i, 0) >= 0.0);
        CHECK(cloud.cloud.points(i, 0) < 2.0);
    }
}
