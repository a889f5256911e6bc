#pragma once

#include "hodgeloop/complex.hpp"
#include "hodgeloop/types.hpp"

#include <utility>
#include <vector>

namespace hodgeloop {

/**
 * Sparse signed incidence of cells onto their faces. Entries are +-1; every
 * column of B1 has exactly two nonzeros and every column of B2 has three
 * (simplicial) or four (cubical).
 */
struct BoundaryMatrix {
    int rows = 0;  // number of (l-1)-cells
    int cols = 0;  // number of l-cells

    struct Entry {
        int face;
        int cell;
        int sign;  // +1 or -1
    };
    std::vector<Entry> entries;

    SpMat sparse() const;
    SpMatInt sparse_int() const;
    /// Entrywise absolute value as a real sparse matrix.
    SpMat sparse_abs() const;
};

/**
 * B1 and B2 of a 2-complex. B1 is the graph incidence matrix: +1 at the low
 * vertex, -1 at the high vertex of each edge. B2 columns carry +1 on faces
 * [x,y],[y,z] (plus [z,w] for rectangles) and -1 on the closing face
 * ([x,z] or [x,w]); a face whose induced direction opposes the stored
 * canonical edge direction has its sign flipped.
 *
 * flip_edges, when given, reverses the orientation of the selected edges
 * (negating the corresponding row of B1 and the row's entries in B2).
 */
std::pair<BoundaryMatrix, BoundaryMatrix> boundary_maps(
    const Complex2& complex, const std::vector<char>& flip_edges = {});

/**
 * Generic-dimension boundary map: each l-cell is described by its list of
 * (face index, sign) pairs over n_faces (l-1)-cells. Used to assemble L_k
 * for k >= 2 from caller-supplied cell lists.
 */
BoundaryMatrix boundary_map_generic(
    int n_faces, const std::vector<std::vector<std::pair<int, int>>>& cells);

/// True iff B_k * B_{k+1} is the zero matrix in exact integer arithmetic.
bool boundary_product_is_zero(const BoundaryMatrix& bk, const BoundaryMatrix& bk1);

}  // namespace hodgeloop
