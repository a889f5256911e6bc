#include "hodgeloop/perturb.hpp"

#include "hodgeloop/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace hodgeloop {

namespace {

void check_level_counts(const SimplexPartition::Level& lvl, int n_glued,
                        int n_disjoint, const char* what) {
    if (lvl.shared_glued.size() != lvl.shared_disjoint.size())
        throw DimensionError(std::string(what) + ": shared index lists misaligned");
    if (static_cast<int>(lvl.shared_glued.size() + lvl.created.size()) != n_glued)
        throw DimensionError(std::string(what) + ": N+C must cover the glued cells");
    if (static_cast<int>(lvl.shared_disjoint.size() + lvl.destroyed.size()) !=
        n_disjoint)
        throw DimensionError(std::string(what) + ": N+D must cover the disjoint cells");
}

}  // namespace

EpsilonReport compute_epsilons(const HodgeSystem& glued, const HodgeSystem& disjoint,
                               const BoundaryMatrix& b_k_glued,
                               const BoundaryMatrix& b_kp1_glued,
                               const SimplexPartition& part) {
    const auto& lk = part.k();
    const auto& lkp1 = part.kp1();
    const auto& lkm1 = part.km1();
    check_level_counts(lk, static_cast<int>(glued.w_k.size()),
                       static_cast<int>(disjoint.w_k.size()), "k-level");
    check_level_counts(lkp1, static_cast<int>(glued.w_kp1.size()),
                       static_cast<int>(disjoint.w_kp1.size()), "(k+1)-level");

    // the derivation requires agreement of the (k+1) weights on shared cells
    for (std::size_t i = 0; i < lkp1.shared_glued.size(); ++i) {
        const double a = glued.w_kp1[lkp1.shared_glued[i]];
        const double b = disjoint.w_kp1[lkp1.shared_disjoint[i]];
        if (std::abs(a - b) > 1e-9 * std::max({std::abs(a), std::abs(b), 1.0}))
            throw InputError("compute_epsilons: glued/disjoint weights differ on a shared (k+1)-cell");
    }

    // wt_k = |B_{k+1}[N_k, N_{k+1}]| w_{k+1}
    std::vector<char> kp1_shared(glued.w_kp1.size(), 0);
    for (int c : lkp1.shared_glued) kp1_shared[c] = 1;
    std::vector<double> wt_k_by_glued(glued.w_k.size(), 0.0);
    for (const auto& e : b_kp1_glued.entries)
        if (kp1_shared[e.cell]) wt_k_by_glued[e.face] += glued.w_kp1[e.cell];

    double eps_k = 0.0, epsp_k = 0.0;
    for (std::size_t i = 0; i < lk.shared_glued.size(); ++i) {
        const int gi = lk.shared_glued[i];
        const int di = lk.shared_disjoint[i];
        const double wt = wt_k_by_glued[gi];
        if (wt <= 0.0)
            throw InputError("compute_epsilons: a shared k-cell has no shared coface (wt = 0)");
        const double w = glued.w_k[gi];
        const double wh = disjoint.w_k[di];
        eps_k = std::max(eps_k, std::max(w / wt, wh / wt) - 1.0);
        epsp_k = std::max(epsp_k,
                          std::max(std::abs(w / wh - 1.0), std::abs(wh / w - 1.0)));
    }

    // wt_{k-1} = |B_k[:, N_k]| wt_k; all (k-1)-cells are shared by assumption
    if (!lkm1.created.empty() || !lkm1.destroyed.empty())
        throw InputError("compute_epsilons: (k-1)-cells must all be shared");
    if (b_k_glued.rows == 0) {
        // k = 0: no (k-1) level; epsilons vanish there
        EpsilonReport out;
        out.eps_k = eps_k;
        out.epsp_k = epsp_k;
        return out;
    }
    std::vector<char> k_shared(glued.w_k.size(), 0);
    for (int c : lk.shared_glued) k_shared[c] = 1;
    std::vector<double> wt_km1(b_k_glued.rows, 0.0);
    for (const auto& e : b_k_glued.entries)
        if (k_shared[e.cell]) wt_km1[e.face] += wt_k_by_glued[e.cell];

    double eps_km1 = 0.0, epsp_km1 = 0.0;
    for (std::size_t i = 0; i < lkm1.shared_glued.size(); ++i) {
        const int gi = lkm1.shared_glued[i];
        const int di = lkm1.shared_disjoint[i];
        const double wt = wt_km1[gi];
        if (wt <= 0.0)
            throw InputError("compute_epsilons: a (k-1)-cell has no shared coface (wt = 0)");
        const double w = glued.w_km1[gi];
        const double wh = disjoint.w_km1[di];
        eps_km1 = std::max(eps_km1, std::max(w / wt, wh / wt) - 1.0);
        epsp_km1 = std::max(
            epsp_km1, std::max(std::abs(w / wh - 1.0), std::abs(wh / w - 1.0)));
    }

    EpsilonReport out;
    out.eps_k = eps_k;
    out.eps_km1 = eps_km1;
    out.epsp_k = epsp_k;
    out.epsp_km1 = epsp_km1;
    return out;
}

SubspaceError subspace_error(const Mat& Y, const Mat& Y_hat,
                             const std::vector<int>& rows_glued,
                             const std::vector<int>& rows_disjoint) {
    if (Y.cols() != Y_hat.cols())
        throw DimensionError("subspace_error: column counts differ");
    if (rows_glued.size() != rows_disjoint.size())
        throw DimensionError("subspace_error: row lists misaligned");
    const Eigen::Index nn = static_cast<Eigen::Index>(rows_glued.size());
    const Eigen::Index beta = Y.cols();

    Mat yn(nn, beta), yhn(nn, beta);
    for (Eigen::Index i = 0; i < nn; ++i) {
        yn.row(i) = Y.row(rows_glued[i]);
        yhn.row(i) = Y_hat.row(rows_disjoint[i]);
    }

    Eigen::JacobiSVD<Mat> svd(yhn.transpose() * yn,
                              Eigen::ComputeFullU | Eigen::ComputeFullV);
    SubspaceError out;
    out.O = svd.matrixU() * svd.matrixV().transpose();
    out.lhs = (yn - yhn * out.O).squaredNorm();
    return out;
}

namespace {

/// Accumulate mapped entries of a symmetric operator into diff triplets.
void scatter_diff(const SpMat& m, const std::vector<int>& to_union, double sign,
                  const std::vector<char>& drop_row, std::vector<Triplet>& out) {
    for (int c = 0; c < m.outerSize(); ++c) {
        for (SpMat::InnerIterator it(m, c); it; ++it) {
            const int r = static_cast<int>(it.row());
            if (drop_row[r] && drop_row[c]) continue;  // copied block cancels
            out.emplace_back(to_union[r], to_union[c], sign * it.value());
        }
    }
}

double diff_norm(const SpMat& glued_m, const SpMat& disjoint_m,
                 const std::vector<int>& glued_to_union,
                 const std::vector<int>& disjoint_to_union,
                 const std::vector<char>& glued_in_c,
                 const std::vector<char>& disjoint_in_d, int union_dim) {
    std::vector<Triplet> trip;
    trip.reserve(glued_m.nonZeros() + disjoint_m.nonZeros());
    scatter_diff(glued_m, glued_to_union, +1.0, glued_in_c, trip);
    scatter_diff(disjoint_m, disjoint_to_union, -1.0, disjoint_in_d, trip);
    SpMat diff(union_dim, union_dim);
    diff.setFromTriplets(trip.begin(), trip.end());
    diff.prune([](int, int, double v) { return v != 0.0; });
    if (diff.nonZeros() == 0) return 0.0;
    return spectral_norm_estimate(diff, 1e-8);
}

}  // namespace

DiffNorms diff_laplacians(const HodgeSystem& glued, const HodgeSystem& disjoint,
                          const SimplexPartition& part) {
    const auto& lk = part.k();
    const int n_glued = glued.dim();
    const int n_disjoint = disjoint.dim();
    check_level_counts(lk, n_glued, n_disjoint, "k-level");

    const int n_n = static_cast<int>(lk.shared_glued.size());
    const int n_c = static_cast<int>(lk.created.size());
    const int n_d = static_cast<int>(lk.destroyed.size());
    const int union_dim = n_n + n_c + n_d;

    std::vector<int> glued_to_union(n_glued, -1), disjoint_to_union(n_disjoint, -1);
    std::vector<char> glued_in_c(n_glued, 0), disjoint_in_d(n_disjoint, 0);
    for (int i = 0; i < n_n; ++i) {
        glued_to_union[lk.shared_glued[i]] = i;
        disjoint_to_union[lk.shared_disjoint[i]] = i;
    }
    for (int i = 0; i < n_c; ++i) {
        glued_to_union[lk.created[i]] = n_n + i;
        glued_in_c[lk.created[i]] = 1;
    }
    for (int i = 0; i < n_d; ++i) {
        disjoint_to_union[lk.destroyed[i]] = n_n + n_c + i;
        disjoint_in_d[lk.destroyed[i]] = 1;
    }
    for (int i = 0; i < n_glued; ++i)
        if (glued_to_union[i] < 0)
            throw InputError("diff_laplacians: glued cell missing from the partition");
    for (int i = 0; i < n_disjoint; ++i)
        if (disjoint_to_union[i] < 0)
            throw InputError("diff_laplacians: disjoint cell missing from the partition");

    DiffNorms out;
    out.down = diff_norm(glued.L_down, disjoint.L_down, glued_to_union,
                         disjoint_to_union, glued_in_c, disjoint_in_d, union_dim);
    out.up = diff_norm(glued.L_up, disjoint.L_up, glued_to_union,
                       disjoint_to_union, glued_in_c, disjoint_in_d, union_dim);
    return out;
}

BoundReport subspace_bound(double diff_down_norm, double diff_up_norm, int beta_k,
                          const std::vector<double>& eigengaps,
                          const EpsilonReport& eps, int k, ComplexKind kind) {
    if (eigengaps.empty()) throw InputError("subspace_bound: no eigengaps given");
    double min_gap = eigengaps[0];
    for (double g : eigengaps) min_gap = std::min(min_gap, g);
    if (min_gap <= 0.0) throw InputError("subspace_bound: eigengap must be positive");

    const auto lambda = [kind](int j) {
        return kind == ComplexKind::simplicial ? j + 2.0 : 2.0 * j + 2.0;
    };

    BoundReport out;
    out.rhs = 8.0 * beta_k *
              (diff_down_norm * diff_down_norm + diff_up_norm * diff_up_norm) /
              min_gap;

    const double sk = std::sqrt(eps.epsp_k);
    const double skm1 = std::sqrt(eps.epsp_km1);
    const double down_factor =
        2.0 * sk + eps.epsp_k + (1.0 + sk) * (1.0 + sk) * skm1 +
        4.0 * std::sqrt(eps.eps_km1);
    const double up_factor =
        2.0 * sk + eps.epsp_k + 2.0 * eps.eps_k + 4.0 * std::sqrt(eps.eps_k);
    out.down_cap = down_factor * down_factor * lambda(k - 1) * lambda(k - 1);
    out.up_cap = up_factor * up_factor * lambda(k) * lambda(k);
    out.down_cap_met = diff_down_norm * diff_down_norm <= out.down_cap;
    out.up_cap_met = diff_up_norm * diff_up_norm <= out.up_cap;
    out.caps_met = out.down_cap_met && out.up_cap_met;
    return out;
}

EnvelopeFit ellipsoid_envelope_check(const Mat& embedding, int bins) {
    EnvelopeFit out;
    const int m = static_cast<int>(embedding.cols());
    if (m < 2) return out;  // a 1-D envelope degenerates to a segment
    if (bins < 8) throw InputError("ellipsoid_envelope_check: need at least 8 bins");

    // envelope = max-radius point per direction bin
    std::vector<int> best;
    if (m == 2) {
        best.assign(bins, -1);
        Vec best_r = Vec::Zero(bins);
        for (Eigen::Index i = 0; i < embedding.rows(); ++i) {
            const double r = embedding.row(i).norm();
            if (r == 0.0) continue;
            const double ang = std::atan2(embedding(i, 1), embedding(i, 0));
            int b = static_cast<int>((ang + std::numbers::pi) /
                                     (2.0 * std::numbers::pi) * bins);
            b = std::clamp(b, 0, bins - 1);
            if (r > best_r[b]) {
                best_r[b] = r;
                best[b] = static_cast<int>(i);
            }
        }
    } else {
        // probe seeded random directions, keep the support point of each
        std::mt19937_64 rng(12345);
        std::normal_distribution<double> gauss(0.0, 1.0);
        best.assign(bins * m, -1);
        for (int b = 0; b < bins * m; ++b) {
            Vec u(m);
            for (int c = 0; c < m; ++c) u[c] = gauss(rng);
            u.normalize();
            double top = -1.0;
            for (Eigen::Index i = 0; i < embedding.rows(); ++i) {
                const double s = embedding.row(i) * u;
                if (s > top) {
                    top = s;
                    best[b] = static_cast<int>(i);
                }
            }
        }
    }

    std::vector<int> used;
    for (int i : best)
        if (i >= 0) used.push_back(i);
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    const int np = static_cast<int>(used.size());
    const int unknowns = m * (m + 1) / 2;
    if (np < unknowns) throw InputError("ellipsoid_envelope_check: too few envelope points");

    out.envelope_points = Mat(np, m);
    for (int i = 0; i < np; ++i) out.envelope_points.row(i) = embedding.row(used[i]);

    // least-squares fit of the quadratic form p^T Q p = 1
    Mat a(np, unknowns);
    for (int i = 0; i < np; ++i) {
        int c = 0;
        for (int r = 0; r < m; ++r) {
            for (int s = r; s < m; ++s) {
                const double v = out.envelope_points(i, r) * out.envelope_points(i, s);
                a(i, c++) = (r == s) ? v : 2.0 * v;
            }
        }
    }
    Vec rhs = Vec::Ones(np);
    Vec q = a.colPivHouseholderQr().solve(rhs);

    out.quadratic_form = Mat(m, m);
    {
        int c = 0;
        for (int r = 0; r < m; ++r)
            for (int s = r; s < m; ++s) {
                out.quadratic_form(r, s) = q[c];
                out.quadratic_form(s, r) = q[c];
                ++c;
            }
    }

    Eigen::SelfAdjointEigenSolver<Mat> eig(out.quadratic_form);
    if (eig.eigenvalues().minCoeff() <= 0.0) {
        out.applicable = true;
        out.residual = std::numeric_limits<double>::infinity();  // not an ellipsoid
        return out;
    }
    out.semi_axes = eig.eigenvalues().cwiseInverse().cwiseSqrt();
    std::sort(out.semi_axes.data(), out.semi_axes.data() + out.semi_axes.size(),
              std::greater<double>());

    double acc = 0.0;
    for (int i = 0; i < np; ++i) {
        const Vec p = out.envelope_points.row(i).transpose();
        const double r = p.norm();
        const Vec u = p / r;
        const double r_fit = 1.0 / std::sqrt(u.dot(out.quadratic_form * u));
        acc += (r - r_fit) * (r - r_fit) / (r_fit * r_fit);
    }
    out.residual = std::sqrt(acc / np);
    out.applicable = true;
    return out;
}

ConnectedSumInstance build_connected_sum(const PointCloud& cloud,
                                         const std::vector<int>& labels, int knn,
                                         double delta, bool kernel_weights,
                                         const HodgeOptions& hodge_opts) {
    if (static_cast<Eigen::Index>(labels.size()) != cloud.size())
        throw DimensionError("build_connected_sum: one label per point required");

    ConnectedSumInstance inst;
    inst.labels = labels;
    inst.n_primes = *std::max_element(labels.begin(), labels.end()) + 1;
    {
        std::vector<int> counts(inst.n_primes, 0);
        for (int l : labels) {
            if (l < 0) throw InputError("build_connected_sum: labels must be >= 0");
            ++counts[l];
        }
        for (int p = 0; p < inst.n_primes; ++p)
            if (counts[p] == 0)
                throw InputError("build_connected_sum: prime label " +
                                 std::to_string(p) + " has no points");
    }

    NeighborhoodGraph graph = cknn_graph(cloud, knn, delta);
    inst.glued = clique_complex(graph);
    inst.w2_glued = kernel_weights
                        ? triangle_weights(cloud, inst.glued, knn, delta)
                        : Vec::Ones(inst.glued.n2());

    // disjoint complex: cells whose vertices all share one label
    const auto label_of_edge = [&](const std::array<int, 2>& e) {
        return labels[e[0]] == labels[e[1]] ? labels[e[0]] : -1;
    };
    inst.disjoint.kind = ComplexKind::simplicial;
    inst.disjoint.n0 = inst.glued.n0;

    auto& lv0 = inst.part.levels[0];
    auto& lv1 = inst.part.levels[1];
    auto& lv2 = inst.part.levels[2];
    for (int v = 0; v < inst.glued.n0; ++v) {
        lv0.shared_glued.push_back(v);
        lv0.shared_disjoint.push_back(v);
    }
    for (int e = 0; e < inst.glued.n1(); ++e) {
        if (label_of_edge(inst.glued.edges[e]) >= 0) {
            lv1.shared_glued.push_back(e);
            lv1.shared_disjoint.push_back(inst.disjoint.n1());
            inst.disjoint.edges.push_back(inst.glued.edges[e]);
        } else {
            lv1.created.push_back(e);
        }
    }
    std::vector<double> w2d;
    for (int t = 0; t < inst.glued.n2(); ++t) {
        const auto& c = inst.glued.cells2[t];
        const int l0 = labels[c.v[0]];
        if (labels[c.v[1]] == l0 && labels[c.v[2]] == l0) {
            lv2.shared_glued.push_back(t);
            lv2.shared_disjoint.push_back(inst.disjoint.n2());
            inst.disjoint.cells2.push_back(c);
            w2d.push_back(inst.w2_glued[t]);
        } else {
            lv2.created.push_back(t);
        }
    }
    inst.w2_disjoint =
        Eigen::Map<Vec>(w2d.data(), static_cast<Eigen::Index>(w2d.size()));

    auto [b1, b2] = boundary_maps(inst.glued);
    inst.b1_glued = b1;
    inst.b2_glued = b2;
    inst.sys_glued = assemble(b1, b2, inst.w2_glued, ComplexKind::simplicial, 1,
                              hodge_opts);
    inst.sys_disjoint = assemble(inst.disjoint, inst.w2_disjoint, hodge_opts);

    // per-prime standalone complexes for the block eigensolves
    inst.prime_edges.resize(inst.n_primes);
    inst.prime_complexes.resize(inst.n_primes);
    inst.prime_w2.resize(inst.n_primes);
    std::vector<std::vector<int>> vmap(inst.n_primes,
                                       std::vector<int>(inst.glued.n0, -1));
    for (int p = 0; p < inst.n_primes; ++p) {
        Complex2& cx = inst.prime_complexes[p];
        cx.kind = ComplexKind::simplicial;
        for (int v = 0; v < inst.glued.n0; ++v)
            if (labels[v] == p) vmap[p][v] = cx.n0++;
    }
    for (int e = 0; e < inst.disjoint.n1(); ++e) {
        const auto& ed = inst.disjoint.edges[e];
        const int p = labels[ed[0]];
        inst.prime_edges[p].push_back(e);
        inst.prime_complexes[p].edges.push_back({vmap[p][ed[0]], vmap[p][ed[1]]});
    }
    std::vector<std::vector<double>> pw2(inst.n_primes);
    for (int t = 0; t < inst.disjoint.n2(); ++t) {
        const auto& c = inst.disjoint.cells2[t];
        const int p = labels[c.v[0]];
        Cell2 cc;
        cc.size = 3;
        cc.v = {vmap[p][c.v[0]], vmap[p][c.v[1]], vmap[p][c.v[2]], -1};
        inst.prime_complexes[p].cells2.push_back(cc);
        pw2[p].push_back(inst.w2_disjoint[t]);
    }
    for (int p = 0; p < inst.n_primes; ++p)
        inst.prime_w2[p] = Eigen::Map<Vec>(pw2[p].data(),
                                           static_cast<Eigen::Index>(pw2[p].size()));
    return inst;
}

PerturbReport evaluate_perturbation(const ConnectedSumInstance& inst,
                                    const NullspaceOptions& null_opts) {
    PerturbReport rep;
    rep.eps = compute_epsilons(inst.sys_glued, inst.sys_disjoint, inst.b1_glued,
                               inst.b2_glued, inst.part);
    rep.lambda_k = spectral_norm_upper(inst.sys_glued);

    HomologyBasis glued_basis = harmonic_basis(inst.sys_glued.L, null_opts);
    rep.beta_glued = glued_basis.beta;

    // disjoint basis assembled block-diagonally from the prime solves
    int beta_hat = 0;
    std::vector<Mat> block_y(inst.n_primes);
    for (int p = 0; p < inst.n_primes; ++p) {
        HodgeSystem sys = assemble(inst.prime_complexes[p], inst.prime_w2[p]);
        NullspaceOptions opts = null_opts;
        opts.seed = null_opts.seed ^ (0x9e3779b9ULL * (p + 1));
        HomologyBasis basis = harmonic_basis(sys.L, opts);
        rep.beta_primes.push_back(basis.beta);
        beta_hat += basis.beta;
        block_y[p] = basis.Y;
        // eigengap of the prime block: first nonzero eigenvalue
        if (basis.beta < basis.spectrum_window.size())
            rep.eigengaps.push_back(basis.spectrum_window[basis.beta]);
        else
            throw AmbiguityError("evaluate_perturbation: prime spectrum window too small",
                                 {basis.beta});
    }
    rep.homology_preserved = (beta_hat == rep.beta_glued);

    DiffNorms norms = diff_laplacians(inst.sys_glued, inst.sys_disjoint, inst.part);
    rep.diff_down_norm = norms.down;
    rep.diff_up_norm = norms.up;

    BoundReport bound =
        subspace_bound(norms.down, norms.up, rep.beta_glued, rep.eigengaps, rep.eps,
                      inst.sys_glued.k, inst.sys_glued.kind);
    rep.rhs = bound.rhs;
    rep.down_cap = bound.down_cap;
    rep.up_cap = bound.up_cap;
    rep.caps_met = bound.caps_met;

    if (rep.homology_preserved && rep.beta_glued > 0) {
        Mat y_hat = Mat::Zero(inst.sys_disjoint.dim(), beta_hat);
        int col = 0;
        for (int p = 0; p < inst.n_primes; ++p) {
            for (int j = 0; j < block_y[p].cols(); ++j, ++col)
                for (int r = 0; r < block_y[p].rows(); ++r)
                    y_hat(inst.prime_edges[p][r], col) = block_y[p](r, j);
        }
        SubspaceError err = subspace_error(glued_basis.Y, y_hat,
                                           inst.part.k().shared_glued,
                                           inst.part.k().shared_disjoint);
        rep.lhs = err.lhs;
        rep.bound_holds = rep.lhs <= rep.rhs;
    }
    return rep;
}

}  // namespace hodgeloop
