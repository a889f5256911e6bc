#include "hodgeloop/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace hodgeloop {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Mat torus_angles(int n, std::mt19937_64& rng) {
    // regular grid when n is a perfect square, uniform sample otherwise
    const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    Mat theta(n, 2);
    if (side * side == n) {
        for (int i = 0; i < side; ++i)
            for (int j = 0; j < side; ++j) {
                theta(i * side + j, 0) = kTwoPi * i / side;
                theta(i * side + j, 1) = kTwoPi * j / side;
            }
    } else {
        std::uniform_real_distribution<double> uni(0.0, kTwoPi);
        for (int i = 0; i < n; ++i) {
            theta(i, 0) = uni(rng);
            theta(i, 1) = uni(rng);
        }
    }
    return theta;
}

Mat embed_torus(const Mat& theta, double shift_x1) {
    Mat x(theta.rows(), 3);
    for (Eigen::Index i = 0; i < theta.rows(); ++i) {
        const double t1 = theta(i, 0), t2 = theta(i, 1);
        x(i, 0) = (1.0 + 0.5 * std::cos(t1)) * std::cos(t2) - shift_x1;
        x(i, 1) = (1.0 + 0.5 * std::cos(t1)) * std::sin(t2);
        x(i, 2) = 1.0 + 0.5 * std::sin(t1);
    }
    return x;
}

SyntheticCloud make_torus(int n, double noise, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat theta = torus_angles(n, rng);
    Mat base = embed_torus(theta, 0.0);

    SyntheticCloud out;
    out.cloud.points = Mat::Zero(n, 13);  // 3 ambient + 10 noise dimensions
    out.cloud.points.leftCols(3) = base;
    if (noise > 0.0)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < 13; ++j) out.cloud.points(i, j) += noise * gauss(rng);
    out.beta1_truth = 2;
    out.prime_label.assign(n, 0);
    out.intrinsic = theta;
    return out;
}

SyntheticCloud make_three_torus(int n, double noise, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, kTwoPi);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int dense_n = std::min(100000, std::max(50 * n, 1000));
    Mat dense(dense_n, 4);
    Mat theta(dense_n, 3);
    for (int i = 0; i < dense_n; ++i) {
        const double t1 = uni(rng), t2 = uni(rng), t3 = uni(rng);
        theta.row(i) << t1, t2, t3;
        const double ring = 2.0 + std::cos(t1);
        dense(i, 0) = (4.0 + ring * std::cos(t2)) * std::cos(t3);
        dense(i, 1) = (4.0 + ring * std::cos(t2)) * std::sin(t3);
        dense(i, 2) = ring * std::sin(t2);
        dense(i, 3) = std::sin(t1);
    }
    PointCloud all{dense};
    const auto idx = furthest_point_sample(all, n, seed ^ 0x5bf03635ULL);

    SyntheticCloud out;
    out.cloud.points = Mat(n, 4);
    out.intrinsic = Mat(n, 3);
    for (int i = 0; i < n; ++i) {
        out.cloud.points.row(i) = dense.row(idx[i]);
        out.intrinsic.row(i) = theta.row(idx[i]);
    }
    if (noise > 0.0)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < 4; ++j) out.cloud.points(i, j) += noise * gauss(rng);
    out.beta1_truth = 3;
    out.prime_label.assign(n, 0);
    return out;
}

double genus2_implicit(double x1, double x2) {
    const double s = x1 * x1 + x2 * x2;
    return s * s - 0.75 * x1 * x1 + 0.75 * x2 * x2;
}

SyntheticCloud make_genus2(int n, double noise, std::uint64_t seed) {
    const int grid = 1000;
    std::vector<Eigen::RowVector3d> pts;
    pts.reserve(400000);
    for (int i = 0; i < grid; ++i) {
        const double x1 = -1.05 + 2.1 * i / (grid - 1);
        for (int j = 0; j < grid; ++j) {
            const double x2 = -1.05 + 2.1 * j / (grid - 1);
            const double f = genus2_implicit(x1, x2);
            const double disc = 0.01 - f * f;
            if (disc < 0.0) continue;
            const double x3 = std::sqrt(disc);
            pts.emplace_back(x1, x2, x3);
            if (x3 > 0.0) pts.emplace_back(x1, x2, -x3);
        }
    }
    Mat dense(static_cast<Eigen::Index>(pts.size()), 3);
    for (Eigen::Index i = 0; i < dense.rows(); ++i) dense.row(i) = pts[i];

    PointCloud all{dense};
    const auto idx = furthest_point_sample(all, n, seed);

    SyntheticCloud out;
    out.cloud.points = Mat(n, 3);
    out.prime_label.resize(n);
    for (int i = 0; i < n; ++i) {
        out.cloud.points.row(i) = dense.row(idx[i]);
        out.prime_label[i] = dense(idx[i], 0) >= 0.0 ? 0 : 1;  // handle by lobe
    }
    if (noise > 0.0) {
        std::mt19937_64 rng(seed ^ 0x243f6a88ULL);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < 3; ++j) out.cloud.points(i, j) += noise * gauss(rng);
    }
    out.beta1_truth = 4;
    return out;
}

// Geometry of the two-hole punctured plane: two unit squares with centered
// square holes of side 1/3, facing each other across an empty band. The
// connection forms only through CkNN edges that span the band, so the
// junction is sparsely connected and the created-cell weights (and with
// them epsilon_1, epsilon_0) stay small.
struct PunctplaneGeometry {
    double gap = 0.115;  // empty band between the two squares
};

SyntheticCloud make_punctplane(int n, double noise, std::uint64_t seed) {
    const PunctplaneGeometry geo;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    const int n_plane = n / 2;
    const auto in_hole = [](double x, double y) {
        return x > 1.0 / 3.0 && x < 2.0 / 3.0 && y > 1.0 / 3.0 && y < 2.0 / 3.0;
    };

    SyntheticCloud out;
    out.cloud.points = Mat(n, 2);
    out.prime_label.resize(n);
    int row = 0;
    // jittered grids: even coverage, and the jitter bound keeps the closest
    // cross-gap pair (which drives the epsilons) concentrated across seeds
    const double jitter = 0.35;
    for (int side = 0; side < 2; ++side) {
        const int count = side == 0 ? n_plane : n - n_plane;
        const double x0 = side == 0 ? 0.0 : 1.0 + geo.gap;
        const int s = static_cast<int>(
            std::ceil(std::sqrt(count * 9.0 / 8.0)));
        const double h = 1.0 / s;
        int placed = 0;
        for (int step = 0; step < s && placed < count; ++step) {
            // fill from the gap-facing column inward so a short budget can
            // only thin the far side
            const int i = side == 0 ? s - 1 - step : step;
            for (int j = 0; j < s && placed < count; ++j) {
                const double cx = (i + 0.5) * h;
                const double cy = (j + 0.5) * h;
                if (in_hole(cx, cy)) continue;
                // the gap-facing column keeps its exact x so the closest
                // crossing distance (which epsilon tracks exponentially) is
                // the same for every seed
                const bool facing = (side == 0 && i == s - 1) || (side == 1 && i == 0);
                const double x =
                    facing ? cx : cx + jitter * h * (2.0 * uni(rng) - 1.0);
                const double y = cy + jitter * h * (2.0 * uni(rng) - 1.0);
                if (in_hole(x, y)) continue;
                out.cloud.points.row(row) << x0 + x, y;
                out.prime_label[row] = side;
                ++row;
                ++placed;
            }
        }
        for (; placed < count; ++placed) {
            double x, y;
            do {
                x = uni(rng);
                y = uni(rng);
            } while (in_hole(x, y));
            out.cloud.points.row(row) << x0 + x, y;
            out.prime_label[row] = side;
            ++row;
        }
    }
    if (noise > 0.0)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < 2; ++j) out.cloud.points(i, j) += noise * gauss(rng);
    out.beta1_truth = 2;
    return out;
}

SyntheticCloud make_tori_concat(int n, double noise, std::uint64_t seed) {
    const double shifts[4] = {-3.0, 0.0, 3.0, 6.0};
    const int per = n / 4;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    SyntheticCloud out;
    out.cloud.points = Mat::Zero(n, 13);
    out.intrinsic = Mat(n, 2);
    out.prime_label.resize(n);
    int row = 0;
    for (int t = 0; t < 4; ++t) {
        const int count = t < 3 ? per : n - 3 * per;
        std::mt19937_64 sub(seed ^ (0x2545f491ULL * (t + 1)));
        Mat theta = torus_angles(count, sub);
        Mat base = embed_torus(theta, shifts[t]);
        for (int i = 0; i < count; ++i) {
            out.cloud.points.row(row).head(3) = base.row(i);
            out.intrinsic.row(row) = theta.row(i);
            out.prime_label[row] = t;
            ++row;
        }
    }
    if (noise > 0.0)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < 13; ++j) out.cloud.points(i, j) += noise * gauss(rng);
    out.beta1_truth = 8;
    return out;
}

}  // namespace

ManifoldName manifold_from_string(const std::string& name) {
    if (name == "torus") return ManifoldName::torus;
    if (name == "three_torus") return ManifoldName::three_torus;
    if (name == "genus2") return ManifoldName::genus2;
    if (name == "punctplane") return ManifoldName::punctplane;
    if (name == "tori_concat") return ManifoldName::tori_concat;
    throw InputError("unknown manifold name: " + name);
}

std::string manifold_to_string(ManifoldName name) {
    switch (name) {
        case ManifoldName::torus: return "torus";
        case ManifoldName::three_torus: return "three_torus";
        case ManifoldName::genus2: return "genus2";
        case ManifoldName::punctplane: return "punctplane";
        case ManifoldName::tori_concat: return "tori_concat";
    }
    throw InputError("unknown manifold enum value");
}

SyntheticCloud synth_manifold(ManifoldName name, int n, double noise,
                              std::uint64_t seed) {
    if (n < 100) throw InputError("synth_manifold: n must be >= 100");
    if (noise < 0.0) throw InputError("synth_manifold: noise must be >= 0");
    switch (name) {
        case ManifoldName::torus: return make_torus(n, noise, seed);
        case ManifoldName::three_torus: return make_three_torus(n, noise, seed);
        case ManifoldName::genus2: return make_genus2(n, noise, seed);
        case ManifoldName::punctplane: return make_punctplane(n, noise, seed);
        case ManifoldName::tori_concat: return make_tori_concat(n, noise, seed);
    }
    throw InputError("unknown manifold enum value");
}

FlatTorusGrid flat_torus_grid(int N) {
    if (N < 3) throw InputError("flat_torus_grid: N must be >= 3");
    FlatTorusGrid out;
    Complex2& cx = out.complex;
    cx.kind = ComplexKind::cubical;
    cx.n0 = N * N;
    const auto vid = [N](int i, int j) {
        return ((i % N + N) % N) * N + ((j % N + N) % N);
    };

    // one horizontal and one vertical edge per vertex, canonical order
    std::vector<int> h_edge(N * N), v_edge(N * N);
    std::vector<double> hz, vz;  // cochain value of the +x / +y flow
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            int a = vid(i, j), b = vid(i, j + 1);
            double sign = 1.0;
            if (a > b) {
                std::swap(a, b);
                sign = -1.0;  // wrap edge stored low->high opposes the flow
            }
            h_edge[vid(i, j)] = cx.n1();
            cx.edges.push_back({a, b});
            hz.push_back(sign);
            vz.push_back(0.0);

            a = vid(i, j);
            b = vid(i + 1, j);
            sign = 1.0;
            if (a > b) {
                std::swap(a, b);
                sign = -1.0;
            }
            v_edge[vid(i, j)] = cx.n1();
            cx.edges.push_back({a, b});
            hz.push_back(0.0);
            vz.push_back(sign);
        }
    }
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            Cell2 c;
            c.v = {vid(i, j), vid(i, j + 1), vid(i + 1, j + 1), vid(i + 1, j)};
            c.size = 4;
            cx.cells2.push_back(c);
        }
    }

    out.harmonics = Mat(cx.n1(), 2);
    for (int e = 0; e < cx.n1(); ++e) {
        out.harmonics(e, 0) = hz[e];
        out.harmonics(e, 1) = vz[e];
    }
    out.d = Vec::Ones(cx.n1());
    return out;
}

Eigen::RowVectorXd torus_displacement(const Eigen::RowVectorXd& x,
                                      const Eigen::RowVectorXd& y, double L1,
                                      double L2) {
    Eigen::RowVectorXd d = x - y;
    const double L[2] = {L1, L2};
    for (int c = 0; c < 2; ++c) {
        d[c] = std::remainder(d[c], L[c]);
    }
    return d;
}

MetricFn FlatTorusCloud::metric() const {
    const double l1 = L1, l2 = L2;
    return [l1, l2](const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) {
        return torus_displacement(a, b, l1, l2).norm();
    };
}

FlatTorusCloud flat_torus_cloud(int grid_n, double L1, double L2, double jitter,
                                std::uint64_t seed) {
    if (grid_n < 3) throw InputError("flat_torus_cloud: grid_n must be >= 3");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    FlatTorusCloud out;
    out.L1 = L1;
    out.L2 = L2;
    out.cloud.points = Mat(grid_n * grid_n, 2);
    const double h1 = L1 / grid_n, h2 = L2 / grid_n;
    for (int i = 0; i < grid_n; ++i) {
        for (int j = 0; j < grid_n; ++j) {
            double x = (i + 0.5) * h1 + jitter * h1 * uni(rng);
            double y = (j + 0.5) * h2 + jitter * h2 * uni(rng);
            x = x - L1 * std::floor(x / L1);
            y = y - L2 * std::floor(y / L2);
            out.cloud.points.row(i * grid_n + j) << x, y;
        }
    }
    return out;
}

}  // namespace hodgeloop
