#pragma once

#include "hodgeloop/complex.hpp"
#include "hodgeloop/point_cloud.hpp"
#include "hodgeloop/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hodgeloop {

enum class ManifoldName { torus, three_torus, genus2, punctplane, tori_concat };

ManifoldName manifold_from_string(const std::string& name);
std::string manifold_to_string(ManifoldName name);

/**
 * A sampled synthetic manifold with its ground truth attached: the first
 * Betti number, a per-point prime-manifold label (all zero for prime
 * manifolds), and intrinsic coordinates where the parameterization defines
 * them (torus angles; empty otherwise).
 */
struct SyntheticCloud {
    PointCloud cloud;
    int beta1_truth = 0;
    std::vector<int> prime_label;
    Mat intrinsic;  // n x q or 0 x 0
};

/**
 * Sample one of the shipped synthetic manifolds:
 *  - torus: grid/uniform angles embedded in R^3, Gaussian noise on the first
 *    three coordinates plus ten extra noise dimensions (truth beta1 = 2);
 *  - three_torus: dense sample in R^4 reduced by furthest-point sampling
 *    (beta1 = 3);
 *  - genus2: grid solve of ((x1^2+x2^2)^2 - 0.75 x1^2 + 0.75 x2^2)^2 + x3^2
 *    = 0.01, then furthest-point sampling; labels split the two handles by
 *    the sign of x1 (beta1 = 4);
 *  - punctplane: two unit squares with centered square holes of side 1/3,
 *    joined by a sparsely sampled bridge (beta1 = 2);
 *  - tori_concat: four tori shifted by a = -3, 0, 3, 6 along x1 (beta1 = 8).
 */
SyntheticCloud synth_manifold(ManifoldName name, int n, double noise,
                              std::uint64_t seed);

/**
 * Exact N x N square-grid complex on the flat 2-torus (unit spacing,
 * periodic in both directions, w2 = 1) together with two machine-precision
 * harmonic cochains (the axis flows) and unit edge distances.
 */
struct FlatTorusGrid {
    Complex2 complex;
    Mat harmonics;  // n1 x 2
    Vec d;
};
FlatTorusGrid flat_torus_grid(int N);

/**
 * Jittered grid_n x grid_n sample of the flat torus [0,L1) x [0,L2) stored
 * in intrinsic coordinates; metric() wraps both coordinates periodically.
 */
struct FlatTorusCloud {
    PointCloud cloud;  // n x 2
    double L1 = 0.0, L2 = 0.0;
    MetricFn metric() const;
};
FlatTorusCloud flat_torus_cloud(int grid_n, double L1, double L2, double jitter,
                                std::uint64_t seed);

/// Wrapped displacement x - y on the flat torus, each coordinate reduced to
/// (-L/2, L/2].
Eigen::RowVectorXd torus_displacement(const Eigen::RowVectorXd& x,
                                      const Eigen::RowVectorXd& y, double L1,
                                      double L2);

}  // namespace hodgeloop
