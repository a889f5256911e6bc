#include <hodgeloop/hodge.hpp>
#include <hodgeloop/ica.hpp>
#include <hodgeloop/loops.hpp>
#include <hodgeloop/nullspace.hpp>
#include <hodgeloop/synthetic.hpp>

#include <doctest.h>

#include "oracles.hpp"

#include <cmath>

using namespace hodgeloop;

namespace {

std::vector<std::array<int, 2>> cycle_edges(int n, int offset = 0) {
    std::vector<std::array<int, 2>> edges;
    for (int i = 0; i + 1 < n; ++i) edges.push_back({offset + i, offset + i + 1});
    edges.push_back({offset, offset + n - 1});
    std::sort(edges.begin(), edges.end());
    return edges;
}

/// Cochain of the directed traversal 0 -> 1 -> ... -> n-1 -> 0 on canonical
/// edges.
Vec cycle_circulation(const std::vector<std::array<int, 2>>& edges, int n,
                      int offset = 0) {
    Vec z = Vec::Zero(static_cast<Eigen::Index>(edges.size()));
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
        const auto& [a, b] = edges[e];
        if (a < offset || b >= offset + n) continue;
        z[e] = (b - a == 1) ? 1.0 : -1.0;  // the wrap edge runs high -> low
    }
    return z;
}

double cycle_geometric_length(const std::vector<int>& cycle, const Vec& d,
                              const std::vector<std::array<int, 2>>& edges) {
    EdgeIndex lookup(edges);
    double len = 0.0;
    for (std::size_t i = 0; i + 1 < cycle.size(); ++i)
        len += d[lookup.find(cycle[i], cycle[i + 1])];
    return len;
}

std::vector<std::pair<int, int>> arcs_of(const InducedDigraph& g) {
    std::vector<std::pair<int, int>> arcs;
    for (const auto& a : g.arcs) arcs.emplace_back(a.from, a.to);
    return arcs;
}

}  // namespace

TEST_CASE("quantile convention is linear interpolation") {
    Vec v(10);
    for (int i = 0; i < 10; ++i) v[i] = i + 1;
    CHECK(quantile(v, 0.5) == doctest::Approx(5.5));
    CHECK(quantile(v, 0.0) == doctest::Approx(1.0));
    CHECK(quantile(v, 1.0) == doctest::Approx(10.0));
}

TEST_CASE("induced digraph orientation, threshold, and tau") {
    SUBCASE("beta = 1 keeps every nonzero edge") {
        auto edges = cycle_edges(4);
        Vec z(4);
        z << 1.0, -1.0, 0.5, 2.0;
        auto g = induce_digraph(z, edges, Vec::Ones(4), 1);
        CHECK(g.tau == doctest::Approx(0.5));  // min |z|
        CHECK(g.arcs.size() == 4);
    }
    SUBCASE("positive cochain on C4 gives the directed cycle") {
        auto edges = cycle_edges(4);
        Vec z = cycle_circulation(edges, 4);
        auto g = induce_digraph(z, edges, Vec::Ones(4), 1);
        REQUIRE(g.arcs.size() == 4);
        // every vertex has exactly one out-arc; the traversal closes
        std::vector<int> next(4, -1);
        for (const auto& a : g.arcs) {
            CHECK(next[a.from] == -1);
            next[a.from] = a.to;
        }
        int v = 0;
        for (int step = 0; step < 4; ++step) v = next[v];
        CHECK(v == 0);
    }
    SUBCASE("beta = 2 on |z| = 1..10 keeps the top five arcs") {
        std::vector<std::array<int, 2>> edges;
        for (int i = 0; i < 10; ++i) edges.push_back({i, i + 10});
        Vec z(10), d = Vec::Ones(10);
        for (int i = 0; i < 10; ++i) z[i] = (i % 2 ? 1 : -1) * (i + 1.0);
        auto g = induce_digraph(z, edges, d, 2);
        CHECK(g.tau == doctest::Approx(5.5));  // median
        CHECK(g.arcs.size() == 5);
        for (const auto& a : g.arcs) CHECK(std::abs(a.z) >= 5.5);
    }
    SUBCASE("exact zeros never orient an arc") {
        auto edges = cycle_edges(3);
        Vec z(3);
        z << 0.0, 1.0, -1.0;
        auto g = induce_digraph(z, edges, Vec::Ones(3), 1, -1, 0.0);
        CHECK(g.arcs.size() == 2);
    }
    SUBCASE("identically zero cochain is rejected") {
        auto edges = cycle_edges(3);
        CHECK_THROWS_AS(induce_digraph(Vec::Zero(3), edges, Vec::Ones(3), 1),
                        InputError);
    }
}

TEST_CASE("C_n circulation finds the full cycle (vs exhaustive enumeration)") {
    for (int n = 3; n <= 8; ++n) {
        auto edges = cycle_edges(n);
        Mat z = cycle_circulation(edges, n);
        Vec d = Vec::Ones(n);
        auto loops = shortest_homologous_loops(z, n, edges, d);
        REQUIRE(loops.size() == 1);
        CHECK(loops[0].length == doctest::Approx(n));
        CHECK(loops[0].cycle.size() == static_cast<std::size_t>(n + 1));
        CHECK(loops[0].cycle.front() == loops[0].cycle.back());

        // oracle: minimum over all simple directed cycles
        auto g = induce_digraph(z, edges, d, 1);
        auto cycles = oracle::enumerate_simple_cycles(n, arcs_of(g));
        double best = 1e300;
        for (const auto& c : cycles)
            best = std::min(best, cycle_geometric_length(c, d, edges));
        CHECK(loops[0].length == doctest::Approx(best));
    }
}

TEST_CASE("two disjoint C3 blocks yield their own 3-cycles") {
    auto edges = cycle_edges(3);
    auto more = cycle_edges(3, 3);
    edges.insert(edges.end(), more.begin(), more.end());
    std::sort(edges.begin(), edges.end());

    Mat z(6, 2);
    z.col(0) = cycle_circulation(edges, 3, 0);
    z.col(1) = cycle_circulation(edges, 3, 3);
    Vec d = Vec::Ones(6);
    auto loops = shortest_homologous_loops(z, 6, edges, d);
    REQUIRE(loops.size() == 2);
    for (const auto& loop : loops) {
        CHECK(loop.length == doctest::Approx(3.0));
        const int lo = loop.class_index == 0 ? 0 : 3;
        for (int v : loop.cycle) {
            CHECK(v >= lo);
            CHECK(v < lo + 3);
        }
        CHECK(std::abs(loop.path_integral) > 0.0);
    }
}

TEST_CASE("maxedge variant agrees on C_n and fails on acyclic graphs") {
    auto edges = cycle_edges(6);
    Mat z = cycle_circulation(edges, 6);
    Vec d = Vec::Ones(6);
    auto loops = shortest_loops_maxedge(z, 6, edges, d);
    REQUIRE(loops.size() == 1);
    CHECK(loops[0].length == doctest::Approx(6.0));

    std::vector<std::array<int, 2>> line{{0, 1}, {1, 2}};
    Mat zl(2, 1);
    zl << 1.0, 1.0;
    CHECK_THROWS_AS(shortest_loops_maxedge(zl, 3, line, Vec::Ones(2)), NoLoopError);
}

TEST_CASE("path integral certificate") {
    SUBCASE("C3 circulation integrates to sqrt(3)") {
        auto edges = cycle_edges(3);
        Vec z = cycle_circulation(edges, 3);
        z.normalize();  // (1,1,1)/sqrt(3) along the traversal
        LoopResult loop;
        loop.cycle = {0, 1, 2, 0};
        bool ok = false;
        const double integral = certify_nontrivial(loop, z, edges, &ok);
        CHECK(integral == doctest::Approx(std::sqrt(3.0)));
        CHECK(ok);
    }
    SUBCASE("backtracking contributions cancel") {
        auto edges = cycle_edges(4);
        Vec z = cycle_circulation(edges, 4);
        LoopResult loop;
        loop.cycle = {0, 1, 0, 1, 2, 3, 0};  // 0->1->0 backtrack then the cycle
        const double integral = certify_nontrivial(loop, z, edges, nullptr);
        CHECK(integral == doctest::Approx(4.0));  // the backtrack cancels
    }
    SUBCASE("closed-cycle validation") {
        auto edges = cycle_edges(3);
        Vec z = cycle_circulation(edges, 3);
        LoopResult open;
        open.cycle = {0, 1, 2};
        CHECK_THROWS_AS(certify_nontrivial(open, z, edges, nullptr), InputError);
    }
}

TEST_CASE("over-thresholding recovers by halving tau") {
    // class 0: a C4 whose three weak arcs fall below tau while strong
    // acyclic leaf arcs survive, so the first thresholded digraph closes no
    // loop; class 1: a clean C4 elsewhere
    std::vector<std::array<int, 2>> edges = {
        {0, 1}, {1, 2}, {2, 3}, {0, 3},                   // cycle A
        {0, 4}, {0, 5}, {1, 6}, {1, 7}, {2, 8}, {3, 9},   // leaves
        {10, 11}, {11, 12}, {12, 13}, {10, 13}};          // cycle B
    Mat z = Mat::Zero(14, 2);
    z.col(0).head(4) << 1.0, 1.0, 1.0, -10.0;
    z.col(0).segment(4, 6).setConstant(5.0);
    z.col(1).tail(4) << 1.0, 1.0, 1.0, -1.0;
    Vec d = Vec::Ones(14);

    auto loops = shortest_homologous_loops(z, 14, edges, d);
    CHECK(loops[0].relaxations == 2);
    CHECK(loops[0].length == doctest::Approx(4.0));
    CHECK(loops[1].relaxations == 0);
    CHECK(loops[1].length == doctest::Approx(4.0));

    // with relaxation disabled the class raises
    LoopOptions no_relax;
    no_relax.max_relaxations = 0;
    CHECK_THROWS_AS(shortest_homologous_loops(z, 14, edges, d, no_relax),
                    NoLoopError);
}

TEST_CASE("maxedge loops on a torus are homologous to and no shorter than "
          "the exhaustive ones") {
    auto synth = hodgeloop::synth_manifold(hodgeloop::ManifoldName::torus, 400,
                                           0.02, 0);
    auto g = hodgeloop::cknn_graph(synth.cloud, 20, 1.1);
    auto cx = hodgeloop::clique_complex(g);
    auto sys = hodgeloop::assemble(
        cx, hodgeloop::triangle_weights(synth.cloud, cx, 20, 1.1));
    auto basis = hodgeloop::harmonic_basis(sys.L);
    REQUIRE(basis.beta == 2);
    auto ica = hodgeloop::ica_no_prewhite(basis.Y);

    auto exhaustive = shortest_homologous_loops(ica.Z, cx.n0, cx.edges, g.edge_dist);
    auto maxedge = shortest_loops_maxedge(ica.Z, cx.n0, cx.edges, g.edge_dist);
    REQUIRE(exhaustive.size() == 2);
    REQUIRE(maxedge.size() == 2);
    for (int i = 0; i < 2; ++i) {
        bool ok_ex = false, ok_me = false;
        const double int_ex =
            certify_nontrivial(exhaustive[i], ica.Z.col(i), cx.edges, &ok_ex);
        const double int_me =
            certify_nontrivial(maxedge[i], ica.Z.col(i), cx.edges, &ok_me);
        CHECK(ok_ex);
        CHECK(ok_me);
        CHECK(int_ex * int_me > 0.0);  // same path-integral sign pattern
        CHECK(maxedge[i].length >= exhaustive[i].length - 1e-12);
    }
}

TEST_CASE("loop search is deterministic") {
    auto edges = cycle_edges(7);
    Mat z = cycle_circulation(edges, 7);
    Vec d = Vec::Ones(7);
    auto a = shortest_homologous_loops(z, 7, edges, d);
    auto b = shortest_homologous_loops(z, 7, edges, d);
    CHECK(a[0].cycle == b[0].cycle);
    CHECK(a[0].length == b[0].length);
}
