#include <hodgeloop/complex.hpp>

#include <doctest.h>

#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace hodgeloop;

namespace {

NeighborhoodGraph graph_of(int n, std::vector<std::array<int, 2>> edges) {
    NeighborhoodGraph g;
    g.n_vertices = n;
    g.edges = std::move(edges);
    g.edge_dist = Vec::Ones(static_cast<Eigen::Index>(g.edges.size()));
    return g;
}

}  // namespace

TEST_CASE("cknn kernel rule on collinear points") {
    PointCloud cloud;
    cloud.points = Mat(3, 1);
    cloud.points << 0, 1, 3;
    auto g = cknn_graph(cloud, 1, 1.1);
    REQUIRE(g.edges.size() == 1);
    CHECK(g.edges[0] == std::array<int, 2>{0, 1});
    CHECK(g.edge_dist[0] == doctest::Approx(1.0));
}

TEST_CASE("cknn extremes: huge delta complete, tiny delta empty") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    PointCloud cloud;
    cloud.points = Mat(12, 2);
    for (int i = 0; i < 12; ++i) cloud.points.row(i) << uni(rng), uni(rng);
    CHECK(cknn_graph(cloud, 3, 1e9).edges.size() == 12 * 11 / 2);
    CHECK(cknn_graph(cloud, 3, 1e-12).edges.empty());
    CHECK_THROWS_AS(cknn_graph(cloud, 12, 1.0), InputError);
    CHECK_THROWS_AS(cknn_graph(cloud, 3, 0.0), InputError);
}

TEST_CASE("cknn is symmetric across the pair rule") {
    // brute evaluation of the rule over all pairs equals the edge set
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    PointCloud cloud;
    cloud.points = Mat(30, 2);
    for (int i = 0; i < 30; ++i) cloud.points.row(i) << uni(rng), uni(rng);
    const int k = 4;
    const double delta = 1.0;
    auto g = cknn_graph(cloud, k, delta);
    Vec rho = knn_radii(cloud, k);
    std::size_t expect = 0;
    for (int i = 0; i < 30; ++i)
        for (int j = i + 1; j < 30; ++j) {
            const double d = (cloud.points.row(i) - cloud.points.row(j)).norm();
            if (d / std::sqrt(rho[i] * rho[j]) <= delta) ++expect;
        }
    CHECK(g.edges.size() == expect);
}

TEST_CASE("clique complex counts forced 3-cliques") {
    auto k3 = clique_complex(graph_of(3, {{0, 1}, {0, 2}, {1, 2}}));
    CHECK(k3.n2() == 1);
    auto c4 = clique_complex(graph_of(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}));
    CHECK(c4.n2() == 0);
    auto k4 = clique_complex(
        graph_of(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}));
    CHECK(k4.n2() == 4);
    k4.validate();
}

TEST_CASE("clique complex matches brute-force enumeration on random graphs") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        auto cx = oracle::random_simplicial(24, 0.25, seed);
        CHECK(cx.n2() == oracle::brute_triangle_count(24, cx.edges));
        cx.validate();  // closure holds
    }
    auto big = oracle::random_simplicial(50, 0.15, 99);
    CHECK(big.n2() == oracle::brute_triangle_count(50, big.edges));
}

TEST_CASE("triangle weights follow the product kernel") {
    PointCloud cloud;
    cloud.points = Mat(4, 2);
    const double s = 0.7;
    cloud.points << 0, 0, s, 0, s / 2, s * std::sqrt(3.0) / 2, 10, 10;
    auto g = graph_of(4, {{0, 1}, {0, 2}, {1, 2}});
    auto cx = clique_complex(g);
    REQUIRE(cx.n2() == 1);

    const int k = 2;
    const double delta = 1.3;
    Vec w = triangle_weights(cloud, cx, k, delta);

    // equilateral triangle with uniform rho: w = exp(-3 s^2 / (eps rho^2))
    Vec rho = knn_radii(cloud, k);
    CHECK(rho[0] == doctest::Approx(rho[1]));
    CHECK(rho[0] == doctest::Approx(rho[2]));
    const double eps = std::pow(delta, 2.0 / 3.0) / 3.0;
    const double expect = std::exp(-3.0 * s * s / (eps * rho[0] * rho[0]));
    CHECK(w[0] == doctest::Approx(expect).epsilon(1e-12));
    CHECK(w[0] > 0.0);
    CHECK(w[0] <= 1.0);
}

TEST_CASE("degenerate triangle with zero side lengths has weight 1") {
    PointCloud cloud;
    cloud.points = Mat::Zero(4, 2);
    cloud.points.row(3) << 5, 5;  // far companion so rho_k > 0
    Complex2 cx;
    cx.n0 = 4;
    cx.edges = {{0, 1}, {0, 2}, {1, 2}};
    Cell2 c;
    c.v = {0, 1, 2, -1};
    cx.cells2 = {c};
    // k = 3 so rho_k reaches the far companion and stays positive
    Vec w = triangle_weights(cloud, cx, 3, 1.0);
    CHECK(w[0] == doctest::Approx(1.0));
}

TEST_CASE("triangle weights reject cubical complexes") {
    PointCloud cloud;
    cloud.points = Mat::Zero(4, 2);
    Complex2 cx;
    cx.kind = ComplexKind::cubical;
    cx.n0 = 4;
    CHECK_THROWS_AS(triangle_weights(cloud, cx, 1, 1.0), InputError);
}

TEST_CASE("cubical complex of an all-foreground 2x2 image") {
    GrayImage img;
    img.width = img.height = 2;
    img.max_val = 255;
    img.intensity = {9, 9, 9, 9};
    auto cx = cubical_complex(img, 5, 0);
    CHECK(cx.n0 == 4);
    CHECK(cx.n1() == 4);
    CHECK(cx.n2() == 1);
    cx.validate();
}

TEST_CASE("cubical ring keeps its hole until closing fills it") {
    GrayImage img;
    img.width = img.height = 3;
    img.max_val = 255;
    img.intensity = {9, 9, 9, 9, 0, 9, 9, 9, 9};
    auto ring = cubical_complex(img, 5, 0);
    CHECK(ring.n0 == 8);
    CHECK(ring.n2() == 0);
    ring.validate();

    auto closed = cubical_complex(img, 5, 1);
    CHECK(closed.n0 == 9);
    CHECK(closed.n2() == 4);
}

TEST_CASE("cknn rejects duplicate points") {
    PointCloud cloud;
    cloud.points = Mat(4, 2);
    cloud.points << 0, 0, 0, 0, 1, 1, 2, 0;  // first two coincide
    CHECK_THROWS_AS(cknn_graph(cloud, 1, 1.0), InputError);
}

TEST_CASE("cubical threshold must lie within the intensity range") {
    GrayImage img;
    img.width = img.height = 2;
    img.max_val = 255;
    img.intensity = {1, 2, 3, 4};
    CHECK_THROWS_AS(cubical_complex(img, -1, 0), InputError);
    CHECK_THROWS_AS(cubical_complex(img, 256, 0), InputError);
}

TEST_CASE("cubical invert flag selects dark pixels") {
    GrayImage img;
    img.width = 2;
    img.height = 1;
    img.max_val = 255;
    img.intensity = {10, 200};
    auto bright = cubical_complex(img, 100, 0);
    CHECK(bright.n0 == 1);
    auto dark = cubical_complex(img, 100, 0, true);
    CHECK(dark.n0 == 1);
}

TEST_CASE("empty foreground yields an empty complex") {
    GrayImage img;
    img.width = img.height = 2;
    img.max_val = 255;
    img.intensity = {0, 0, 0, 0};
    auto cx = cubical_complex(img, 5, 0);
    CHECK(cx.n0 == 0);
    CHECK(cx.n1() == 0);
    CHECK(cx.n2() == 0);
}

TEST_CASE("validate rejects broken complexes") {
    Complex2 cx;
    cx.n0 = 3;
    cx.edges = {{0, 1}, {1, 2}};
    Cell2 c;
    c.v = {0, 1, 2, -1};
    cx.cells2 = {c};
    CHECK_THROWS_AS(cx.validate(), ClosureError);  // edge {0,2} missing

    Complex2 bad;
    bad.n0 = 2;
    bad.edges = {{1, 0}};
    CHECK_THROWS_AS(bad.validate(), InputError);  // non-canonical orientation
}
