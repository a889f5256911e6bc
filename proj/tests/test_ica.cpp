#include <hodgeloop/hodge.hpp>
#include <hodgeloop/ica.hpp>
#include <hodgeloop/nullspace.hpp>

#include <doctest.h>

#include "oracles.hpp"

#include <numbers>
#include <random>

using namespace hodgeloop;

namespace {

Complex2 two_cycles(int a, int b) {
    Complex2 cx;
    cx.n0 = a + b;
    for (int i = 0; i + 1 < a; ++i) cx.edges.push_back({i, i + 1});
    cx.edges.push_back({0, a - 1});
    for (int i = 0; i + 1 < b; ++i) cx.edges.push_back({a + i, a + i + 1});
    cx.edges.push_back({a, a + b - 1});
    std::sort(cx.edges.begin(), cx.edges.end());
    return cx;
}

double block_energy(const Vec& z, int lo, int hi) {
    double e = 0.0;
    for (int i = lo; i < hi; ++i) e += z[i] * z[i];
    return e / z.squaredNorm();
}

}  // namespace

TEST_CASE("beta = 1 returns the sign/scale normalized column") {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat y(40, 1);
    for (int i = 0; i < 40; ++i) y(i, 0) = gauss(rng);
    y *= -3.0;  // a negative rescaling to undo
    auto res = ica_no_prewhite(y);
    CHECK(res.Z.cols() == 1);
    CHECK(res.Z.col(0).norm() == doctest::Approx(1.0));
    CHECK(std::abs(res.Z.col(0).dot(y.col(0).normalized())) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rotated two-block circulations are unmixed to >= 99% block energy") {
    auto cx = two_cycles(3, 3);
    auto sys = assemble(cx, Vec(0));
    auto pairs = smallest_eigenpairs(sys.L, 2);
    REQUIRE(pairs.values[1] < 1e-10);

    // couple the clean block basis with a rotation
    const double ang = 0.9;
    Mat rot(2, 2);
    rot << std::cos(ang), -std::sin(ang), std::sin(ang), std::cos(ang);
    Mat y = pairs.vectors.leftCols(2) * rot;

    auto res = ica_no_prewhite(y);
    // each unmixed column concentrates on one cycle's three edges
    // (edges of block 1 come first in canonical order)
    for (int j = 0; j < 2; ++j) {
        const double e1 = block_energy(res.Z.col(j), 0, 3);
        CHECK((e1 >= 0.99 || e1 <= 0.01));
    }
    const double a = block_energy(res.Z.col(0), 0, 3);
    const double b = block_energy(res.Z.col(1), 0, 3);
    CHECK(std::abs(a - b) > 0.9);  // the two columns take different blocks
}

TEST_CASE("no centering: Z equals Y * unmix to round-off") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat y(60, 3);
    for (int i = 0; i < 60; ++i)
        for (int j = 0; j < 3; ++j) y(i, j) = gauss(rng) + 2.0;  // nonzero mean
    auto res = ica_no_prewhite(y);
    CHECK((res.Z - y * res.unmix).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("harmonicity and span are preserved through the unmixing") {
    auto cx = two_cycles(4, 5);
    auto sys = assemble(cx, Vec(0));
    auto pairs = smallest_eigenpairs(sys.L, 2);
    Mat y = pairs.vectors.leftCols(2);
    auto res = ica_no_prewhite(y);

    CHECK((sys.L * res.Z).norm() / res.Z.norm() <= 1e-6);
    CHECK(max_principal_angle(y, res.Z) <= 1e-8);
    CHECK(res.condition < 1e8);
    CHECK_FALSE(res.degenerate);
}

TEST_CASE("deterministic across calls") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat y(50, 2);
    for (int i = 0; i < 50; ++i)
        for (int j = 0; j < 2; ++j) y(i, j) = gauss(rng);
    auto a = ica_no_prewhite(y);
    auto b = ica_no_prewhite(y);
    CHECK(a.Z == b.Z);
    CHECK(a.unmix == b.unmix);
    CHECK(a.iterations == b.iterations);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(ica_no_prewhite(Mat(10, 0)), InputError);
    CHECK_THROWS_AS(ica_no_prewhite(Mat(1, 2)), InputError);
}
