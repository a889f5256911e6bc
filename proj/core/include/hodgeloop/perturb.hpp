#pragma once

#include "hodgeloop/hodge.hpp"
#include "hodgeloop/nullspace.hpp"
#include "hodgeloop/synthetic.hpp"
#include "hodgeloop/types.hpp"

#include <array>
#include <vector>

namespace hodgeloop {

/**
 * Ground-truth cell bookkeeping for a connected sum: per dimension
 * l in {k-1, k, k+1}, the shared (non-intersecting) cells aligned across the
 * glued and disjoint complexes, the created cells (glued only) and the
 * destroyed cells (disjoint only).
 */
struct SimplexPartition {
    struct Level {
        std::vector<int> shared_glued;
        std::vector<int> shared_disjoint;  // aligned with shared_glued
        std::vector<int> created;          // glued indices
        std::vector<int> destroyed;        // disjoint indices
    };
    std::array<Level, 3> levels;  // [0] = k-1, [1] = k, [2] = k+1

    const Level& km1() const { return levels[0]; }
    const Level& k() const { return levels[1]; }
    const Level& kp1() const { return levels[2]; }
};

struct EpsilonReport {
    double eps_k = 0.0;
    double eps_km1 = 0.0;
    double epsp_k = 0.0;
    double epsp_km1 = 0.0;
};

/**
 * Perturbation magnitudes of the gluing: with reference weights
 * wt_k = |B_{k+1}[N_k, N_{k+1}]| w_{k+1} and wt_{k-1} = |B_k[:, N_k]| wt_k,
 *   eps_l  = max over shared l-cells of max(w/wt, what/wt) - 1,
 *   eps'_l = max over shared l-cells of max(|w/what - 1|, |what/w - 1|).
 * Glued and disjoint weights must agree on shared (k+1)-cells; a shared cell
 * with wt = 0 raises InputError (partition inconsistency).
 */
EpsilonReport compute_epsilons(const HodgeSystem& glued, const HodgeSystem& disjoint,
                               const BoundaryMatrix& b_k_glued,
                               const BoundaryMatrix& b_kp1_glued,
                               const SimplexPartition& part);

/**
 * Procrustes-aligned subspace misfit over the shared k-cells:
 * lhs = min over unitary O of ||Y_N - Yhat_N O||_F^2, with the minimizer O
 * taken from the singular factors of Yhat_N^T Y_N.
 */
struct SubspaceError {
    double lhs = 0.0;
    Mat O;  // beta x beta orthogonal
};
SubspaceError subspace_error(const Mat& Y, const Mat& Y_hat,
                             const std::vector<int>& rows_glued,
                             const std::vector<int>& rows_disjoint);

/**
 * Spectral norms of the modified up/down Laplacian differences on the union
 * index space N + C + D: created-created and destroyed-destroyed blocks are
 * copied between the two operators so they cancel, the glued operator keeps
 * its N-C coupling and the disjoint one its N-D coupling.
 */
struct DiffNorms {
    double down = 0.0;
    double up = 0.0;
};
DiffNorms diff_laplacians(const HodgeSystem& glued, const HodgeSystem& disjoint,
                          const SimplexPartition& part);

/**
 * Both sides of the subspace perturbation inequality: rhs = 8 beta_k
 * (down^2 + up^2) / min eigengap, plus the epsilon-based hypothesis caps
 *   down <= [2 sqrt(e'_k) + e'_k + (1+sqrt(e'_k))^2 sqrt(e'_{k-1})
 *            + 4 sqrt(e_{k-1})] lambda_{k-1},
 *   up   <= [2 sqrt(e'_k) + e'_k + 2 e_k + 4 sqrt(e_k)] lambda_k,
 * with lambda_j = j+2 (simplicial) or 2j+2 (cubical).
 */
struct BoundReport {
    double rhs = 0.0;
    double down_cap = 0.0;
    double up_cap = 0.0;
    bool down_cap_met = false;
    bool up_cap_met = false;
    bool caps_met = false;
};
BoundReport subspace_bound(double diff_down_norm, double diff_up_norm, int beta_k,
                          const std::vector<double>& eigengaps,
                          const EpsilonReport& eps, int k, ComplexKind kind);

/**
 * Directional-envelope ellipsoid fit of a homology embedding (the flat
 * m-torus embedding traces an m-ellipsoid). Points are binned by direction,
 * the max-radius point per bin forms the envelope, and a quadratic form is
 * fit by least squares. Not applicable for m < 2.
 */
struct EnvelopeFit {
    bool applicable = false;
    double residual = 0.0;  // RMS relative radial misfit over envelope points
    Vec semi_axes;          // descending
    Mat quadratic_form;
    Mat envelope_points;
};
EnvelopeFit ellipsoid_envelope_check(const Mat& embedding, int bins = 16);

/**
 * A synthetic connected-sum instance: the glued CkNN/clique complex over a
 * labeled cloud, the disjoint complex induced by the labels (cells whose
 * vertices share one label), both Hodge systems, and the ground-truth
 * partition. Nothing is destroyed in this construction (the disjoint
 * complex is the induced subcomplex), so D is empty at every level.
 */
struct ConnectedSumInstance {
    Complex2 glued;
    Complex2 disjoint;
    Vec w2_glued, w2_disjoint;
    HodgeSystem sys_glued, sys_disjoint;
    BoundaryMatrix b1_glued, b2_glued;
    SimplexPartition part;
    std::vector<int> labels;
    int n_primes = 0;
    // per prime: the disjoint-complex edge indices of that block
    std::vector<std::vector<int>> prime_edges;
    // per prime: its standalone complex (vertices relabeled) for block solves
    std::vector<Complex2> prime_complexes;
    std::vector<Vec> prime_w2;
};

ConnectedSumInstance build_connected_sum(const PointCloud& cloud,
                                         const std::vector<int>& labels, int knn,
                                         double delta, bool kernel_weights = true,
                                         const HodgeOptions& hodge_opts = {});

/// Everything criterion-grade about one instance.
struct PerturbReport {
    EpsilonReport eps;
    std::vector<double> eigengaps;  // per prime block
    double lambda_k = 0.0;
    double diff_down_norm = 0.0;
    double diff_up_norm = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double down_cap = 0.0, up_cap = 0.0;
    bool caps_met = false;
    bool bound_holds = false;
    int beta_glued = 0;
    std::vector<int> beta_primes;
    bool homology_preserved = false;  // beta(glued) == sum beta(primes)
};

PerturbReport evaluate_perturbation(const ConnectedSumInstance& inst,
                                    const NullspaceOptions& null_opts = {});

}  // namespace hodgeloop
