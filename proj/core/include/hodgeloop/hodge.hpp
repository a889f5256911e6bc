#pragma once

#include "hodgeloop/boundary.hpp"
#include "hodgeloop/types.hpp"

#include <cstdint>

namespace hodgeloop {

struct PropagatedWeights {
    Vec values;            // w_l, strictly positive after flooring
    Eigen::Index floored;  // number of cells with no coface that were floored
};

struct HodgeOptions {
    double floor_eps = 1e-12;  // lower bound for coface-free cell weights
    bool strict = false;       // throw instead of flooring
};

/**
 * Weight consistency relation w_l = |B_{l+1}| w_{l+1}. Cells without a
 * coface receive the mean positive weight, bounded below by floor_eps (or
 * raise InputError in strict mode), so W^{-1/2} stays finite and such cells
 * contribute ordinary down-Laplacian rows instead of spurious null
 * directions.
 */
PropagatedWeights propagate_weights(const BoundaryMatrix& b_next, const Vec& w_next,
                                    const HodgeOptions& opts = {});

/**
 * The normalized weighted k-Hodge Laplacian
 *   L_k = A_k^T A_k + A_{k+1} A_{k+1}^T,  A_l = W_{l-1}^{-1/2} B_l W_l^{1/2},
 * with weights propagated downward from w_{k+1}. L is symmetrized by
 * averaging with its transpose after assembly.
 */
struct HodgeSystem {
    int k = 1;
    ComplexKind kind = ComplexKind::simplicial;
    SpMat A_k;       // n_{k-1} x n_k
    SpMat A_kp1;     // n_k x n_{k+1}
    SpMat L;         // n_k x n_k, L_down + L_up
    SpMat L_down;    // A_k^T A_k
    SpMat L_up;      // A_{k+1} A_{k+1}^T
    Vec w_km1, w_k, w_kp1;
    Eigen::Index floored_k = 0, floored_km1 = 0;

    int dim() const { return static_cast<int>(L.rows()); }
};

/**
 * Assemble the Hodge system for dimension k from its two boundary maps and
 * the (k+1)-cell weights. For k = 0 pass a B_k with zero rows; the down term
 * vanishes and L_0 is the symmetric normalized graph Laplacian.
 */
HodgeSystem assemble(const BoundaryMatrix& b_k, const BoundaryMatrix& b_kp1,
                     const Vec& w_kp1, ComplexKind kind, int k = 1,
                     const HodgeOptions& opts = {});

/// Convenience: assemble L_k (k=1) directly from a complex.
HodgeSystem assemble(const Complex2& complex, const Vec& w2,
                     const HodgeOptions& opts = {});

/// Spectral-norm cap lambda_k: k+2 for simplicial systems, 2k+2 for cubical.
double spectral_norm_upper(const HodgeSystem& sys);

/// Largest |eigenvalue| of a symmetric sparse matrix by power iteration,
/// converged to rel_tol on the Rayleigh quotient. Deterministic start.
double spectral_norm_estimate(const SpMat& m, double rel_tol = 1e-8,
                              int max_iter = 20000, std::uint64_t seed = 0);

}  // namespace hodgeloop
