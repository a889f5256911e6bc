#pragma once

#include "hodgeloop/point_cloud.hpp"
#include "hodgeloop/types.hpp"

#include <array>
#include <functional>
#include <utility>
#include <vector>

namespace hodgeloop {

/**
 * Undirected neighborhood graph over a point cloud. Edges are stored once
 * with i < j; edge_dist holds the Euclidean length of each edge and rho_k
 * the per-vertex k-NN distance used by the CkNN rule.
 */
struct NeighborhoodGraph {
    int n_vertices = 0;
    std::vector<std::array<int, 2>> edges;
    Vec edge_dist;
    Vec rho_k;
};

enum class ComplexKind { simplicial, cubical };

/// A 2-cell: a triangle [x,y,z] with x<y<z, or a rectangle [x,y,z,w] in
/// cyclic order (top-left, top-right, bottom-right, bottom-left).
struct Cell2 {
    std::array<int, 4> v{-1, -1, -1, -1};
    int size = 3;
};

/**
 * A 2-complex: vertices 0..n0-1, canonically oriented edges (low index to
 * high index), and oriented 2-cells. Every face of every cell must be
 * present in the lower dimension.
 */
struct Complex2 {
    ComplexKind kind = ComplexKind::simplicial;
    int n0 = 0;
    std::vector<std::array<int, 2>> edges;
    std::vector<Cell2> cells2;

    int n1() const { return static_cast<int>(edges.size()); }
    int n2() const { return static_cast<int>(cells2.size()); }

    /// Throws ClosureError/InputError when the closure property or the
    /// canonical-orientation invariants are violated.
    void validate() const;
};

/// Sorted lookup from vertex pair to edge index.
class EdgeIndex {
public:
    explicit EdgeIndex(const std::vector<std::array<int, 2>>& edges);
    /// Index of edge {a,b} in either order; -1 if absent.
    int find(int a, int b) const;

private:
    std::vector<std::pair<std::int64_t, int>> keys_;
    std::int64_t n0_hint_ = 1;
};

/// Grayscale image, row-major intensities in [0, max_val].
struct GrayImage {
    int width = 0;
    int height = 0;
    int max_val = 255;
    std::vector<int> intensity;  // width*height values

    int at(int row, int col) const { return intensity[row * width + col]; }
};

using MetricFn =
    std::function<double(const Eigen::RowVectorXd&, const Eigen::RowVectorXd&)>;

/**
 * CkNN graph: edge (i,j) present iff |x_i - x_j| / sqrt(rho_k(i) rho_k(j))
 * <= delta, where rho_k is the k-NN distance excluding the point itself.
 */
NeighborhoodGraph cknn_graph(const PointCloud& cloud, int k, double delta);

/// Same rule under a caller-supplied metric (used for flat-torus clouds).
NeighborhoodGraph cknn_graph_metric(const PointCloud& cloud, int k, double delta,
                                    const MetricFn& dist);

/// Clique complex: triangles are exactly the 3-cliques of the graph.
Complex2 clique_complex(const NeighborhoodGraph& graph);

/**
 * Product-of-Gaussians triangle weights with bandwidth eps = delta^(2/3)/3:
 * w2(i,j,l) = prod over the three edges (a,b) of
 * exp(-|x_a - x_b|^2 / (eps rho_k(a) rho_k(b))). Values lie in (0, 1].
 */
Vec triangle_weights(const PointCloud& cloud, const Complex2& complex, int k,
                     double delta);

/// Same kernel under a caller-supplied metric.
Vec triangle_weights_metric(const PointCloud& cloud, const Complex2& complex,
                            int k, double delta, const MetricFn& dist);

/**
 * Cubical complex of the thresholded image: foreground = intensity >=
 * threshold (or < threshold when invert is set), morphologically closed with
 * a square structuring element of side 2*closing_radius+1. Foreground pixels
 * become vertices, 4-adjacencies become edges, and all-foreground unit
 * squares become rectangles. An empty foreground yields an empty complex.
 *
 * When pixel_of_vertex is non-null it receives, per vertex, the row-major
 * pixel index it came from.
 */
Complex2 cubical_complex(const GrayImage& img, int threshold, int closing_radius,
                         bool invert = false,
                         std::vector<int>* pixel_of_vertex = nullptr);

/// Euclidean edge lengths of a complex built over a cloud (unit grid
/// spacing for cubical complexes built from images).
Vec edge_distances(const Complex2& complex, const PointCloud& cloud);

}  // namespace hodgeloop
