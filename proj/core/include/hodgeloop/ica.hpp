#pragma once

#include "hodgeloop/types.hpp"

#include <cstdint>

namespace hodgeloop {

struct IcaOptions {
    double lr = 0.01;        // natural-gradient step, annealed x0.9 on oscillation
    int max_iter = 10000;
    double conv_tol = 1e-7;  // update Frobenius norm, relative to |unmix|
    std::uint64_t seed = 0;  // reserved; the iteration itself is deterministic
};

struct UnmixingResult {
    Mat Z;            // n x beta, unit-norm columns, Z = Y * unmix exactly
    Mat unmix;        // beta x beta, invertible
    int iterations = 0;
    bool converged = false;
    double condition = 1.0;    // condition number of unmix
    double last_update = 0.0;  // Frobenius norm of the final update
    bool degenerate = false;   // condition > 1e8
};

/**
 * Infomax ICA on the rows of Y without centering and without whitening, so
 * every column of Z stays an exact linear combination of Y's columns (and
 * hence harmonic when Y is). Full-batch natural-gradient iteration with a
 * logistic score, written for the column-acting unmixing Z = Y * M:
 *
 *   U = Y * M,  M <- M + lr * M * (I - (2/n) U^T g(U)),  g(u) = sigma(u) - 1/2.
 *
 * The unmixing matrix starts at the identity; after convergence the columns
 * of Z are rescaled to unit norm (and sign-normalized so the largest-|.|
 * entry is positive), with the scaling folded into unmix.
 */
UnmixingResult ica_no_prewhite(const Mat& Y, const IcaOptions& opts = {});

/// Largest principal angle (radians) between the column spans of two
/// equal-width orthonormalizable matrices.
double max_principal_angle(const Mat& A, const Mat& B);

}  // namespace hodgeloop
