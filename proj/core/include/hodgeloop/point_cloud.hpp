#pragma once

#include "hodgeloop/types.hpp"

#include <cstdint>
#include <vector>

namespace hodgeloop {

/**
 * A finite point cloud in R^D, one point per row.
 * All coordinates must be finite and D >= 1, n >= 1.
 */
struct PointCloud {
    Mat points;  // n x D

    Eigen::Index size() const { return points.rows(); }
    Eigen::Index dim() const { return points.cols(); }

    /// Throws InputError if the cloud is empty or contains non-finite values.
    void validate() const;
};

/**
 * Greedy furthest-point subsampling: after a seeded uniform initial pick,
 * each subsequent point maximizes the minimum distance to the points
 * selected so far (ties broken by lowest index). Output is in selection
 * order.
 */
std::vector<int> furthest_point_sample(const PointCloud& cloud, int n,
                                       std::uint64_t seed);

/**
 * Distance from each point to its k-th nearest neighbor, the point itself
 * excluded. Equidistant neighbors are ordered by index.
 */
Vec knn_radii(const PointCloud& cloud, int k);

}  // namespace hodgeloop
