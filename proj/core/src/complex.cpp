#include "hodgeloop/complex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace hodgeloop {

namespace {

std::int64_t edge_key(int a, int b, int n0) {
    if (a > b) std::swap(a, b);
    return static_cast<std::int64_t>(a) * n0 + b;
}

int checked_vertex(int v, int n0, const char* what) {
    if (v < 0 || v >= n0) throw InputError(std::string(what) + ": vertex index out of range");
    return v;
}

}  // namespace

EdgeIndex::EdgeIndex(const std::vector<std::array<int, 2>>& edges) {
    keys_.reserve(edges.size());
    std::int64_t hi = 1;
    for (const auto& e : edges) hi = std::max<std::int64_t>(hi, std::max(e[0], e[1]) + 1);
    for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
        int a = edges[i][0], b = edges[i][1];
        if (a > b) std::swap(a, b);
        keys_.emplace_back(static_cast<std::int64_t>(a) * hi + b, i);
    }
    n0_hint_ = hi;
    std::sort(keys_.begin(), keys_.end());
}

int EdgeIndex::find(int a, int b) const {
    if (a > b) std::swap(a, b);
    if (a < 0 || b >= n0_hint_) return -1;
    const std::int64_t key = static_cast<std::int64_t>(a) * n0_hint_ + b;
    auto it = std::lower_bound(keys_.begin(), keys_.end(),
                               std::make_pair(key, 0));
    if (it == keys_.end() || it->first != key) return -1;
    return it->second;
}

void Complex2::validate() const {
    std::set<std::int64_t> seen_edges;
    for (const auto& e : edges) {
        checked_vertex(e[0], n0, "edge");
        checked_vertex(e[1], n0, "edge");
        if (e[0] >= e[1])
            throw InputError("edge is not canonically oriented (low index to high index)");
        if (!seen_edges.insert(edge_key(e[0], e[1], n0)).second)
            throw InputError("duplicate edge");
    }
    EdgeIndex lookup(edges);
    std::set<std::vector<int>> seen_cells;
    for (const auto& c : cells2) {
        if (c.size != 3 && c.size != 4) throw InputError("cell size must be 3 or 4");
        if (c.size == 3 && kind != ComplexKind::simplicial)
            throw InputError("triangle in a cubical complex");
        if (c.size == 4 && kind != ComplexKind::cubical)
            throw InputError("rectangle in a simplicial complex");
        std::vector<int> key(c.v.begin(), c.v.begin() + c.size);
        for (int v : key) checked_vertex(v, n0, "cell");
        if (c.size == 3 && !(key[0] < key[1] && key[1] < key[2]))
            throw InputError("triangle vertices must be ascending");
        std::sort(key.begin(), key.end());
        if (std::adjacent_find(key.begin(), key.end()) != key.end())
            throw InputError("cell has repeated vertices");
        if (!seen_cells.insert(key).second) throw InputError("duplicate 2-cell");
        for (int i = 0; i < c.size; ++i) {
            const int a = c.v[i], b = c.v[(i + 1) % c.size];
            if (c.size == 3 && i == 2) break;  // triangle faces: xy, yz, xz below
            if (lookup.find(a, b) < 0)
                throw ClosureError("2-cell face edge missing from the complex");
        }
        if (c.size == 3 && lookup.find(c.v[0], c.v[2]) < 0)
            throw ClosureError("2-cell face edge missing from the complex");
    }
}

NeighborhoodGraph cknn_graph_metric(const PointCloud& cloud, int k, double delta,
                                    const MetricFn& dist) {
    cloud.validate();
    const int n = static_cast<int>(cloud.size());
    if (k >= n) throw InputError("cknn_graph: k must be smaller than the cloud size");
    if (delta <= 0.0) throw InputError("cknn_graph: delta must be positive");

    // rho_k under the supplied metric, self excluded, ties by index
    Vec rho(n);
    std::vector<std::pair<double, int>> dists(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            dists[j] = {dist(cloud.points.row(i), cloud.points.row(j)), j};
        dists[i].first = std::numeric_limits<double>::infinity();
        std::nth_element(dists.begin(), dists.begin() + (k - 1), dists.end());
        rho[i] = dists[k - 1].first;
        if (rho[i] <= 0.0)
            throw InputError("cknn_graph: k-th nearest neighbor at distance 0 "
                             "(duplicate points in the cloud)");
    }

    NeighborhoodGraph g;
    g.n_vertices = n;
    g.rho_k = rho;
    std::vector<double> lengths;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double d = dist(cloud.points.row(i), cloud.points.row(j));
            if (d / std::sqrt(rho[i] * rho[j]) <= delta) {
                if (d <= 0.0)
                    throw InputError("cknn_graph: coincident points produce a "
                                     "zero-length edge");
                g.edges.push_back({i, j});
                lengths.push_back(d);
            }
        }
    }
    g.edge_dist = Eigen::Map<Vec>(lengths.data(), static_cast<Eigen::Index>(lengths.size()));
    return g;
}

NeighborhoodGraph cknn_graph(const PointCloud& cloud, int k, double delta) {
    return cknn_graph_metric(cloud, k, delta,
                             [](const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) {
                                 return (a - b).norm();
                             });
}

Complex2 clique_complex(const NeighborhoodGraph& graph) {
    Complex2 cx;
    cx.kind = ComplexKind::simplicial;
    cx.n0 = graph.n_vertices;
    cx.edges = graph.edges;

    // Sorted adjacency lists; triangles found as i<j<l with l adjacent to both.
    std::vector<std::vector<int>> adj(graph.n_vertices);
    for (const auto& e : graph.edges) {
        adj[e[0]].push_back(e[1]);
        adj[e[1]].push_back(e[0]);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());

    for (const auto& e : graph.edges) {
        const int i = e[0], j = e[1];
        const auto& ai = adj[i];
        const auto& aj = adj[j];
        std::size_t p = 0, q = 0;
        while (p < ai.size() && q < aj.size()) {
            if (ai[p] < aj[q]) ++p;
            else if (ai[p] > aj[q]) ++q;
            else {
                if (ai[p] > j) {  // count each triangle once, i<j<l
                    Cell2 c;
                    c.v = {i, j, ai[p], -1};
                    c.size = 3;
                    cx.cells2.push_back(c);
                }
                ++p;
                ++q;
            }
        }
    }
    return cx;
}

Vec triangle_weights_metric(const PointCloud& cloud, const Complex2& complex,
                            int k, double delta, const MetricFn& dist) {
    if (complex.kind != ComplexKind::simplicial)
        throw InputError("triangle_weights: complex must be simplicial");
    if (complex.n0 > cloud.size())
        throw DimensionError("triangle_weights: complex has more vertices than the cloud");
    const double eps = std::pow(delta, 2.0 / 3.0) / 3.0;

    Vec rho(cloud.size());
    {
        // recompute rho_k under the metric (matches the CkNN construction)
        const int n = static_cast<int>(cloud.size());
        if (k >= n) throw InputError("triangle_weights: k must be smaller than cloud size");
        std::vector<std::pair<double, int>> dists(n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j)
                dists[j] = {dist(cloud.points.row(i), cloud.points.row(j)), j};
            dists[i].first = std::numeric_limits<double>::infinity();
            std::nth_element(dists.begin(), dists.begin() + (k - 1), dists.end());
            rho[i] = dists[k - 1].first;
        }
    }

    Vec w2(complex.n2());
    for (int t = 0; t < complex.n2(); ++t) {
        const auto& c = complex.cells2[t];
        double w = 1.0;
        const int pairs[3][2] = {{c.v[0], c.v[1]}, {c.v[1], c.v[2]}, {c.v[0], c.v[2]}};
        for (const auto& p : pairs) {
            const double d = dist(cloud.points.row(p[0]), cloud.points.row(p[1]));
            w *= std::exp(-d * d / (eps * rho[p[0]] * rho[p[1]]));
        }
        w2[t] = w;
    }
    return w2;
}

Vec triangle_weights(const PointCloud& cloud, const Complex2& complex, int k,
                     double delta) {
    return triangle_weights_metric(cloud, complex, k, delta,
                                   [](const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) {
                                       return (a - b).norm();
                                   });
}

Complex2 cubical_complex(const GrayImage& img, int threshold, int closing_radius,
                         bool invert, std::vector<int>* pixel_of_vertex) {
    if (img.width <= 0 || img.height <= 0 || img.max_val <= 0 ||
        static_cast<int>(img.intensity.size()) != img.width * img.height)
        throw InputError("cubical_complex: malformed image");
    if (threshold < 0 || threshold > img.max_val)
        throw InputError("cubical_complex: threshold outside [0, max_val]");
    if (closing_radius < 0) throw InputError("cubical_complex: closing_radius must be >= 0");

    const int W = img.width, H = img.height;
    std::vector<char> mask(W * H);
    for (int p = 0; p < W * H; ++p) {
        const bool fg = invert ? (img.intensity[p] < threshold)
                               : (img.intensity[p] >= threshold);
        mask[p] = fg ? 1 : 0;
    }

    // Morphological closing: dilation then erosion with a square element.
    if (closing_radius > 0) {
        const int r = closing_radius;
        auto sweep = [&](const std::vector<char>& in, bool dilate) {
            std::vector<char> out(W * H);
            for (int y = 0; y < H; ++y) {
                for (int x = 0; x < W; ++x) {
                    char acc = dilate ? 0 : 1;
                    for (int dy = -r; dy <= r && (dilate ? !acc : acc); ++dy) {
                        for (int dx = -r; dx <= r; ++dx) {
                            const int yy = y + dy, xx = x + dx;
                            // out-of-frame pixels take the neutral element of
                            // each sweep so closing only fills interior cavities
                            const char v = (yy >= 0 && yy < H && xx >= 0 && xx < W)
                                               ? in[yy * W + xx]
                                               : (dilate ? 0 : 1);
                            if (dilate && v) { acc = 1; break; }
                            if (!dilate && !v) { acc = 0; break; }
                        }
                    }
                    out[y * W + x] = acc;
                }
            }
            return out;
        };
        mask = sweep(sweep(mask, true), false);
    }

    Complex2 cx;
    cx.kind = ComplexKind::cubical;
    std::vector<int> vid(W * H, -1);
    if (pixel_of_vertex) pixel_of_vertex->clear();
    for (int y = 0; y < H; ++y) {
        for (int x = 0; x < W; ++x) {
            const int p = y * W + x;
            if (mask[p]) {
                vid[p] = cx.n0++;
                if (pixel_of_vertex) pixel_of_vertex->push_back(p);
            }
        }
    }

    for (int y = 0; y < H; ++y) {
        for (int x = 0; x < W; ++x) {
            const int p = y * W + x;
            if (!mask[p]) continue;
            if (x + 1 < W && mask[p + 1]) cx.edges.push_back({vid[p], vid[p + 1]});
            if (y + 1 < H && mask[p + W]) cx.edges.push_back({vid[p], vid[p + W]});
            if (x + 1 < W && y + 1 < H && mask[p + 1] && mask[p + W] && mask[p + W + 1]) {
                Cell2 c;
                // cyclic order: top-left, top-right, bottom-right, bottom-left
                c.v = {vid[p], vid[p + 1], vid[p + W + 1], vid[p + W]};
                c.size = 4;
                cx.cells2.push_back(c);
            }
        }
    }
    // vid increases in scan order, so edges are already canonical (low < high)
    return cx;
}

Vec edge_distances(const Complex2& complex, const PointCloud& cloud) {
    Vec d(complex.n1());
    for (int e = 0; e < complex.n1(); ++e)
        d[e] = (cloud.points.row(complex.edges[e][0]) -
                cloud.points.row(complex.edges[e][1]))
                   .norm();
    return d;
}

}  // namespace hodgeloop
