#include "hodgeloop/loops.hpp"

#include "hodgeloop/complex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace hodgeloop {

double quantile(const Vec& values, double level) {
    if (values.size() == 0) throw InputError("quantile: empty sample");
    if (level < 0.0 || level > 1.0) throw InputError("quantile: level outside [0,1]");
    std::vector<double> v(values.data(), values.data() + values.size());
    std::sort(v.begin(), v.end());
    const double pos = level * static_cast<double>(v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
    const double frac = pos - static_cast<double>(lo);
    return v[lo] + frac * (v[hi] - v[lo]);
}

InducedDigraph induce_digraph(const Vec& z_i, const std::vector<std::array<int, 2>>& edges,
                              const Vec& d, int beta, int source_column,
                              double tau_override) {
    if (z_i.size() != static_cast<Eigen::Index>(edges.size()) ||
        d.size() != z_i.size())
        throw DimensionError("induce_digraph: z, edges, d sizes differ");
    if (beta < 1) throw InputError("induce_digraph: beta must be >= 1");
    if ((d.array() <= 0.0).any())
        throw InputError("induce_digraph: edge distances must be positive");
    if (z_i.size() == 0 || z_i.cwiseAbs().maxCoeff() == 0.0)
        throw InputError("induce_digraph: cochain is identically zero");

    InducedDigraph g;
    g.source_column = source_column;
    g.tau = tau_override >= 0.0
                ? tau_override
                : quantile(z_i.cwiseAbs(), 1.0 - 1.0 / static_cast<double>(beta));
    int n = 0;
    for (const auto& e : edges) n = std::max({n, e[0] + 1, e[1] + 1});
    g.n_vertices = n;
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
        const double z = z_i[e];
        if (z == 0.0 || std::abs(z) < g.tau) continue;
        if (z > 0.0)
            g.arcs.push_back({edges[e][0], edges[e][1], d[e], z, e});
        else
            g.arcs.push_back({edges[e][1], edges[e][0], d[e], z, e});
    }
    return g;
}

namespace {

struct AdjacencyView {
    std::vector<int> offsets;  // per-vertex start into arc_order
    std::vector<int> arc_order;

    explicit AdjacencyView(const InducedDigraph& g) {
        std::vector<std::vector<int>> out(g.n_vertices);
        for (int a = 0; a < static_cast<int>(g.arcs.size()); ++a)
            out[g.arcs[a].from].push_back(a);
        for (auto& lst : out)
            std::sort(lst.begin(), lst.end(), [&](int x, int y) {
                return g.arcs[x].to < g.arcs[y].to;
            });
        offsets.assign(g.n_vertices + 1, 0);
        for (int v = 0; v < g.n_vertices; ++v)
            offsets[v + 1] = offsets[v] + static_cast<int>(out[v].size());
        arc_order.reserve(g.arcs.size());
        for (const auto& lst : out) arc_order.insert(arc_order.end(), lst.begin(), lst.end());
    }
};

/// Dijkstra from src, early-terminated once dst settles or the frontier
/// exceeds the bound. Returns the settled distance of dst (inf otherwise)
/// and fills parent arcs for path reconstruction.
double dijkstra_to(const InducedDigraph& g, const AdjacencyView& adj, int src,
                   int dst, double bound, std::vector<double>& dist,
                   std::vector<int>& parent_arc, std::vector<int>& touched) {
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    dist[src] = 0.0;
    parent_arc[src] = -1;
    touched.push_back(src);
    heap.emplace(0.0, src);
    double result = std::numeric_limits<double>::infinity();
    while (!heap.empty()) {
        const auto [du, u] = heap.top();
        heap.pop();
        if (du > dist[u]) continue;
        if (du > bound) break;
        if (u == dst) {
            result = du;
            break;
        }
        for (int k = adj.offsets[u]; k < adj.offsets[u + 1]; ++k) {
            const auto& arc = g.arcs[adj.arc_order[k]];
            const double nd = du + arc.weight;
            if (nd < dist[arc.to]) {
                if (dist[arc.to] == std::numeric_limits<double>::infinity())
                    touched.push_back(arc.to);
                dist[arc.to] = nd;
                parent_arc[arc.to] = adj.arc_order[k];
                heap.emplace(nd, arc.to);
            }
        }
    }
    return result;
}

std::vector<int> reconstruct_cycle(const InducedDigraph& g,
                                   const std::vector<int>& parent_arc, int src,
                                   int dst, int seed_arc) {
    // path src..dst plus the closing arc (dst_of_seed==src): [t, s0,...,t]
    std::vector<int> path;
    int v = dst;
    while (v != src) {
        const auto& arc = g.arcs[parent_arc[v]];
        path.push_back(v);
        v = arc.from;
    }
    path.push_back(src);
    std::reverse(path.begin(), path.end());  // s0 ... t
    std::vector<int> cycle;
    cycle.reserve(path.size() + 1);
    cycle.push_back(g.arcs[seed_arc].from);  // t
    cycle.insert(cycle.end(), path.begin(), path.end());
    return cycle;
}

double integral_along(const InducedDigraph& g, const std::vector<int>& parent_arc,
                      int src, int dst, int seed_arc) {
    double total = std::abs(g.arcs[seed_arc].z);
    int v = dst;
    while (v != src) {
        total += std::abs(g.arcs[parent_arc[v]].z);
        v = g.arcs[parent_arc[v]].from;
    }
    return total;
}

/// Best closed loop over all seed arcs of g; empty cycle when no arc closes.
LoopResult best_loop(const InducedDigraph& g, int class_index) {
    AdjacencyView adj(g);
    std::vector<double> dist(g.n_vertices, std::numeric_limits<double>::infinity());
    std::vector<int> parent_arc(g.n_vertices, -1);
    std::vector<int> touched;

    LoopResult best;
    best.class_index = class_index;
    best.tau = g.tau;
    double best_len = std::numeric_limits<double>::infinity();

    for (int a = 0; a < static_cast<int>(g.arcs.size()); ++a) {
        const auto& seed = g.arcs[a];
        const int t = seed.from, s0 = seed.to;
        // any path s0 -> t longer than this cannot beat the current best
        const double bound = best_len - seed.weight;
        if (bound < 0.0) continue;
        for (int v : touched) {
            dist[v] = std::numeric_limits<double>::infinity();
            parent_arc[v] = -1;
        }
        touched.clear();
        const double d_star = dijkstra_to(g, adj, s0, t, bound, dist, parent_arc, touched);
        if (!std::isfinite(d_star)) continue;
        const double total = d_star + seed.weight;
        if (!std::isfinite(best_len) ||
            total < best_len - 1e-15 * std::max(1.0, best_len)) {
            best_len = total;
            best.cycle = reconstruct_cycle(g, parent_arc, s0, t, a);
            best.length = total;
            best.path_integral = integral_along(g, parent_arc, s0, t, a);
        } else if (std::abs(total - best_len) <=
                   1e-15 * std::max(1.0, best_len)) {
            auto cycle = reconstruct_cycle(g, parent_arc, s0, t, a);
            if (!best.cycle.empty() && cycle < best.cycle) {
                best.cycle = std::move(cycle);
                best.length = total;
                best.path_integral = integral_along(g, parent_arc, s0, t, a);
            }
        }
    }
    return best;
}

}  // namespace

std::vector<LoopResult> shortest_homologous_loops(
    const Mat& Z, int n_vertices, const std::vector<std::array<int, 2>>& edges,
    const Vec& d, const LoopOptions& opts) {
    const int beta = static_cast<int>(Z.cols());
    if (beta < 1) throw InputError("shortest_homologous_loops: beta must be >= 1");

    std::vector<LoopResult> out;
    out.reserve(beta);
    for (int i = 0; i < beta; ++i) {
        double tau_override = -1.0;
        int relaxations = 0;
        LoopResult found;
        for (;;) {
            InducedDigraph g = induce_digraph(Z.col(i), edges, d, beta, i,
                                              opts.threshold ? tau_override : 0.0);
            g.n_vertices = std::max(g.n_vertices, n_vertices);
            found = best_loop(g, i);
            found.relaxations = relaxations;
            if (!found.cycle.empty()) break;
            if (!opts.threshold || relaxations >= opts.max_relaxations ||
                g.tau == 0.0)
                throw NoLoopError(
                    "no closable arc for class " + std::to_string(i) +
                        (opts.threshold ? " (after " + std::to_string(relaxations) +
                                              " threshold relaxations)"
                                        : ""),
                    i);
            tau_override = g.tau / 2.0;
            ++relaxations;
        }
        out.push_back(std::move(found));
    }
    return out;
}

std::vector<LoopResult> shortest_loops_maxedge(
    const Mat& Z, int n_vertices, const std::vector<std::array<int, 2>>& edges,
    const Vec& d) {
    const int beta = static_cast<int>(Z.cols());
    if (beta < 1) throw InputError("shortest_loops_maxedge: beta must be >= 1");

    std::vector<LoopResult> out;
    out.reserve(beta);
    for (int i = 0; i < beta; ++i) {
        InducedDigraph g = induce_digraph(Z.col(i), edges, d, beta, i, 0.0);
        g.n_vertices = std::max(g.n_vertices, n_vertices);

        // seed at the arc with the largest |z| (lowest edge index on ties)
        int seed = -1;
        double best_abs = -1.0;
        for (int a = 0; a < static_cast<int>(g.arcs.size()); ++a) {
            if (std::abs(g.arcs[a].z) > best_abs) {
                best_abs = std::abs(g.arcs[a].z);
                seed = a;
            }
        }
        if (seed < 0) throw NoLoopError("empty induced digraph for class " + std::to_string(i), i);

        AdjacencyView adj(g);
        std::vector<double> dist(g.n_vertices, std::numeric_limits<double>::infinity());
        std::vector<int> parent_arc(g.n_vertices, -1);
        std::vector<int> touched;
        const auto& arc = g.arcs[seed];
        const double d_star =
            dijkstra_to(g, adj, arc.to, arc.from,
                        std::numeric_limits<double>::infinity(), dist, parent_arc,
                        touched);
        if (!std::isfinite(d_star))
            throw NoLoopError("seed arc does not close for class " + std::to_string(i), i);

        LoopResult loop;
        loop.class_index = i;
        loop.tau = 0.0;
        loop.cycle = reconstruct_cycle(g, parent_arc, arc.to, arc.from, seed);
        loop.length = d_star + arc.weight;
        loop.path_integral = integral_along(g, parent_arc, arc.to, arc.from, seed);
        out.push_back(std::move(loop));
    }
    return out;
}

double certify_nontrivial(const LoopResult& loop, const Vec& z_i,
                          const std::vector<std::array<int, 2>>& edges,
                          bool* nontrivial) {
    if (loop.cycle.size() < 2 || loop.cycle.front() != loop.cycle.back())
        throw InputError("certify_nontrivial: cycle must be closed");
    EdgeIndex lookup(edges);
    double total = 0.0;
    const int arcs = static_cast<int>(loop.cycle.size()) - 1;
    for (int i = 0; i < arcs; ++i) {
        const int a = loop.cycle[i], b = loop.cycle[i + 1];
        const int e = lookup.find(a, b);
        if (e < 0) throw InputError("certify_nontrivial: cycle uses a missing edge");
        total += (a < b) ? z_i[e] : -z_i[e];
    }
    if (nontrivial) {
        const double scale = z_i.size() ? z_i.cwiseAbs().maxCoeff() : 0.0;
        *nontrivial = std::abs(total) > 1e-8 * scale * static_cast<double>(arcs);
    }
    return total;
}

}  // namespace hodgeloop
