#pragma once

#include "hodgeloop/types.hpp"

#include <array>
#include <vector>

namespace hodgeloop {

/**
 * Digraph induced by one harmonic cochain: each edge with nonzero value
 * becomes one arc, oriented from the low endpoint to the high endpoint when
 * the value is positive and reversed otherwise. Arcs whose |value| falls
 * below the per-class threshold tau are removed.
 */
struct InducedDigraph {
    int n_vertices = 0;
    struct Arc {
        int from;
        int to;
        double weight;  // edge distance, > 0
        double z;       // signed cochain value on the canonical edge
        int edge;       // index into the complex edge list
    };
    std::vector<Arc> arcs;
    double tau = 0.0;
    int source_column = -1;
};

/// Linear-interpolation quantile of the (unsorted) values at the given level.
double quantile(const Vec& values, double level);

/**
 * Induce the digraph of cochain z_i over the complex edges: tau is the
 * (1 - 1/beta)-quantile of |z_i| over all edges, arcs below tau are dropped,
 * zero entries never generate arcs. tau_override (>= 0) replaces the
 * quantile threshold when supplied.
 */
InducedDigraph induce_digraph(const Vec& z_i, const std::vector<std::array<int, 2>>& edges,
                              const Vec& d, int beta, int source_column = -1,
                              double tau_override = -1.0);

/// One detected homologous loop.
struct LoopResult {
    int class_index = 0;
    std::vector<int> cycle;     // [t, s0, s1, ..., t]
    double length = 0.0;        // sum of traversed edge distances
    double path_integral = 0.0; // signed sum of z over traversed arcs
    double tau = 0.0;           // threshold in effect when the loop was found
    int relaxations = 0;        // times tau was halved to recover a loop
};

struct LoopOptions {
    bool threshold = true;   // apply the percentile threshold (Algorithm-2 style)
    int max_relaxations = 3; // tau halvings before giving up on a class
};

/**
 * Shortest homologous loop per class: every arc (t,s0) of the induced
 * digraph seeds a nonnegative-weight shortest-path search s0 -> t, and the
 * best closed length d* + d_e wins (ties broken lexicographically by cycle
 * vertex sequence). A class without any closable arc retries with tau halved
 * up to max_relaxations times, then raises NoLoopError.
 */
std::vector<LoopResult> shortest_homologous_loops(
    const Mat& Z, int n_vertices, const std::vector<std::array<int, 2>>& edges,
    const Vec& d, const LoopOptions& opts = {});

/**
 * Single-seed variant: no thresholding; the search starts only from the arc
 * with the largest |z| value.
 */
std::vector<LoopResult> shortest_loops_maxedge(
    const Mat& Z, int n_vertices, const std::vector<std::array<int, 2>>& edges,
    const Vec& d);

/**
 * Recompute the signed path integral of z_i along the cycle from the raw
 * edge values (a traversal against the canonical orientation contributes
 * -z). Nontrivial when |integral| > 1e-8 * max|z_i| * (number of arcs).
 */
double certify_nontrivial(const LoopResult& loop, const Vec& z_i,
                          const std::vector<std::array<int, 2>>& edges,
                          bool* nontrivial = nullptr);

}  // namespace hodgeloop
