#pragma once

#include "hodgeloop/types.hpp"

#include <cstdint>
#include <vector>

namespace hodgeloop {

struct EigenPairs {
    Vec values;     // ascending
    Mat vectors;    // orthonormal columns, one per value
    Vec residuals;  // ||L v - lambda v|| per pair
    int iterations = 0;
    double op_norm = 0.0;  // power-iteration estimate of ||L||
};

/**
 * The m smallest eigenpairs of a symmetric PSD sparse matrix.
 *
 * Small problems are solved densely; otherwise a block LOBPCG-style
 * Rayleigh-Ritz iteration runs directly on L (no factorization) with block
 * size m+5 and a deterministic seeded starting block. Convergence requires
 * ||L v - lambda v|| <= tol * ||L|| for each of the first m pairs; failure
 * to converge within max_iter raises ConvergenceError carrying the best
 * residuals reached.
 */
EigenPairs smallest_eigenpairs(const SpMat& L, int m, double tol = 1e-8,
                               int max_iter = 5000, std::uint64_t seed = 0);

struct BettiEstimate {
    int beta = 0;
    bool ambiguous = false;
    double gap_ratio = 0.0;       // values[beta] / max(values[beta-1], zero_tol)
    std::vector<int> candidates;  // split points that clear the gap factor
};

/**
 * Betti number read off an ascending eigenvalue list: beta = #values <=
 * zero_tol, accepted when the relative gap values[beta] /
 * max(values[beta-1], zero_tol) reaches gap_factor (for beta >= 1). A murky
 * gap, or a window too small to see past the null values, sets the
 * ambiguity flag. dim, when given, is the full operator dimension (a full
 * window needs no gap beyond it).
 */
BettiEstimate estimate_betti(const Vec& values, double zero_tol = 1e-8,
                             double gap_factor = 100.0, int dim = -1);

struct NullspaceOptions {
    double zero_tol = 1e-8;
    double gap_factor = 100.0;
    double solver_tol = 1e-8;
    int max_iter = 5000;
    std::uint64_t seed = 0;
    int first_pass = 10;  // eigenvalues in the cheap exploratory pass
};

/// Harmonic basis Y (null space of L) with the spectrum window that
/// justified the Betti choice.
struct HomologyBasis {
    Mat Y;            // n x beta, orthonormal
    Vec eigenvalues;  // the beta null values
    Vec residuals;    // per-column ||L y||
    int beta = 0;
    bool ambiguous = false;
    std::vector<int> candidates;
    double gap_ratio = 0.0;
    double op_norm = 0.0;
    Vec spectrum_window;  // all computed small eigenvalues (diagnostics)
};

/// Null-space extraction: a cheap first pass sizes beta, then the basis is
/// computed with beta+5 requested pairs (reusing the first pass when wide
/// enough).
HomologyBasis harmonic_basis(const SpMat& L, const NullspaceOptions& opts = {});

}  // namespace hodgeloop
