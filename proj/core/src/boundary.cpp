#include "hodgeloop/boundary.hpp"

#include <algorithm>

namespace hodgeloop {

SpMat BoundaryMatrix::sparse() const {
    SpMat m(rows, cols);
    std::vector<Triplet> trip;
    trip.reserve(entries.size());
    for (const auto& e : entries)
        trip.emplace_back(e.face, e.cell, static_cast<double>(e.sign));
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
}

SpMatInt BoundaryMatrix::sparse_int() const {
    SpMatInt m(rows, cols);
    std::vector<Eigen::Triplet<std::int64_t>> trip;
    trip.reserve(entries.size());
    for (const auto& e : entries)
        trip.emplace_back(e.face, e.cell, static_cast<std::int64_t>(e.sign));
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
}

SpMat BoundaryMatrix::sparse_abs() const {
    SpMat m(rows, cols);
    std::vector<Triplet> trip;
    trip.reserve(entries.size());
    for (const auto& e : entries) trip.emplace_back(e.face, e.cell, 1.0);
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
}

std::pair<BoundaryMatrix, BoundaryMatrix> boundary_maps(
    const Complex2& complex, const std::vector<char>& flip_edges) {
    if (!flip_edges.empty() &&
        static_cast<int>(flip_edges.size()) != complex.n1())
        throw DimensionError("boundary_maps: flip mask size must equal n1");

    const auto edge_sign = [&](int e) {
        return (!flip_edges.empty() && flip_edges[e]) ? -1 : 1;
    };

    BoundaryMatrix b1;
    b1.rows = complex.n0;
    b1.cols = complex.n1();
    b1.entries.reserve(2 * complex.n1());
    for (int e = 0; e < complex.n1(); ++e) {
        const int s = edge_sign(e);
        b1.entries.push_back({complex.edges[e][0], e, s});
        b1.entries.push_back({complex.edges[e][1], e, -s});
    }

    EdgeIndex lookup(complex.edges);
    // signed lookup: +1 if the traversal a->b matches the stored orientation
    const auto face_entry = [&](int a, int b, int cell, int base_sign) {
        const int e = lookup.find(a, b);
        if (e < 0) throw ClosureError("boundary_maps: 2-cell face edge missing");
        int s = base_sign;
        const int lo = std::min(a, b);
        if (a != lo) s = -s;         // traversal opposes canonical orientation
        s *= edge_sign(e);           // caller-requested reorientation
        return BoundaryMatrix::Entry{e, cell, s};
    };

    BoundaryMatrix b2;
    b2.rows = complex.n1();
    b2.cols = complex.n2();
    for (int t = 0; t < complex.n2(); ++t) {
        const auto& c = complex.cells2[t];
        if (c.size == 3) {
            b2.entries.push_back(face_entry(c.v[0], c.v[1], t, +1));
            b2.entries.push_back(face_entry(c.v[1], c.v[2], t, +1));
            b2.entries.push_back(face_entry(c.v[0], c.v[2], t, -1));
        } else {
            b2.entries.push_back(face_entry(c.v[0], c.v[1], t, +1));
            b2.entries.push_back(face_entry(c.v[1], c.v[2], t, +1));
            b2.entries.push_back(face_entry(c.v[2], c.v[3], t, +1));
            b2.entries.push_back(face_entry(c.v[0], c.v[3], t, -1));
        }
    }
    return {std::move(b1), std::move(b2)};
}

BoundaryMatrix boundary_map_generic(
    int n_faces, const std::vector<std::vector<std::pair<int, int>>>& cells) {
    BoundaryMatrix b;
    b.rows = n_faces;
    b.cols = static_cast<int>(cells.size());
    for (int c = 0; c < b.cols; ++c) {
        for (const auto& [face, sign] : cells[c]) {
            if (face < 0 || face >= n_faces)
                throw InputError("boundary_map_generic: face index out of range");
            if (sign != 1 && sign != -1)
                throw InputError("boundary_map_generic: sign must be +-1");
            b.entries.push_back({face, c, sign});
        }
    }
    return b;
}

bool boundary_product_is_zero(const BoundaryMatrix& bk, const BoundaryMatrix& bk1) {
    if (bk.cols != bk1.rows)
        throw DimensionError("boundary_product_is_zero: shapes do not compose");
    SpMatInt prod = bk.sparse_int() * bk1.sparse_int();
    prod.prune([](int, int, std::int64_t v) { return v != 0; });
    return prod.nonZeros() == 0;
}

}  // namespace hodgeloop
