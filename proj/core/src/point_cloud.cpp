#include "hodgeloop/point_cloud.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace hodgeloop {

void PointCloud::validate() const {
    if (points.rows() < 1 || points.cols() < 1)
        throw InputError("point cloud must contain at least one point with D >= 1");
    if (!points.allFinite())
        throw InputError("point cloud contains non-finite coordinates");
}

std::vector<int> furthest_point_sample(const PointCloud& cloud, int n,
                                       std::uint64_t seed) {
    cloud.validate();
    const int total = static_cast<int>(cloud.size());
    if (n < 1 || n > total)
        throw InputError("furthest_point_sample: n must satisfy 1 <= n <= cloud.n");

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, total - 1);

    std::vector<int> selected;
    selected.reserve(n);
    selected.push_back(pick(rng));

    // min_dist[i] = distance from point i to the nearest selected point
    Vec min_dist = Vec::Constant(total, std::numeric_limits<double>::infinity());
    for (int step = 1; step < n; ++step) {
        const auto last = cloud.points.row(selected.back());
        int best = -1;
        double best_dist = -1.0;
        for (int i = 0; i < total; ++i) {
            const double d = (cloud.points.row(i) - last).norm();
            if (d < min_dist[i]) min_dist[i] = d;
            if (min_dist[i] > best_dist) {
                best_dist = min_dist[i];
                best = i;
            }
        }
        selected.push_back(best);
    }
    return selected;
}

Vec knn_radii(const PointCloud& cloud, int k) {
    cloud.validate();
    const int n = static_cast<int>(cloud.size());
    if (k < 1 || k >= n)
        throw InputError("knn_radii: need 1 <= k < n");

    Vec rho(n);
    std::vector<std::pair<double, int>> dists(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            dists[j] = {(cloud.points.row(i) - cloud.points.row(j)).norm(), j};
        dists[i].first = std::numeric_limits<double>::infinity();  // exclude self
        // k-th nearest with ties broken by index
        std::nth_element(dists.begin(), dists.begin() + (k - 1), dists.end());
        rho[i] = dists[k - 1].first;
    }
    return rho;
}

}  // namespace hodgeloop
