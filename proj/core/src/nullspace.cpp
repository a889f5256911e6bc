#include "hodgeloop/nullspace.hpp"

#include "hodgeloop/hodge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace hodgeloop {

namespace {

Mat random_block(Eigen::Index n, int cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat x(n, cols);
    for (int j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < n; ++i) x(i, j) = gauss(rng);
    return x;
}

/// Two-pass Gram-Schmidt over the columns of s, applying the same
/// elimination coefficients to the companion block as (so as == L*s keeps
/// holding). Numerically dependent columns are dropped from both.
void orthonormalize_with_companion(Mat& s, Mat& as, double drop_tol = 1e-8) {
    const Eigen::Index n = s.rows();
    int kept = 0;
    for (int j = 0; j < s.cols(); ++j) {
        Vec v = s.col(j);
        Vec av = as.col(j);
        const double orig = v.norm();
        if (!(orig > 0.0)) continue;
        for (int pass = 0; pass < 2; ++pass) {
            for (int i = 0; i < kept; ++i) {
                const double proj = s.col(i).dot(v);
                v.noalias() -= proj * s.col(i);
                av.noalias() -= proj * as.col(i);
            }
        }
        const double nrm = v.norm();
        if (nrm > drop_tol * orig) {
            s.col(kept) = v / nrm;
            as.col(kept) = av / nrm;
            ++kept;
        }
    }
    s.conservativeResize(n, kept);
    as.conservativeResize(n, kept);
}

EigenPairs dense_path(const SpMat& L, int m) {
    Mat dense = Mat(L);
    dense = 0.5 * (dense + dense.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Mat> eig(dense);
    EigenPairs out;
    out.values = eig.eigenvalues().head(m);
    out.vectors = eig.eigenvectors().leftCols(m);
    out.residuals = Vec(m);
    for (int i = 0; i < m; ++i)
        out.residuals[i] =
            (L * out.vectors.col(i) - out.values[i] * out.vectors.col(i)).norm();
    out.iterations = 0;
    const auto& ev = eig.eigenvalues();
    out.op_norm = ev.size() > 0
                      ? std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)))
                      : 0.0;
    return out;
}

}  // namespace

EigenPairs smallest_eigenpairs(const SpMat& L, int m, double tol, int max_iter,
                               std::uint64_t seed) {
    if (L.rows() != L.cols())
        throw DimensionError("smallest_eigenpairs: matrix not square");
    const Eigen::Index n = L.rows();
    if (m < 0 || m > n) throw InputError("smallest_eigenpairs: need 0 <= m <= dim(L)");
    if (m == 0 || n == 0) return {};
    {
        SpMat skew = L - SpMat(L.transpose());
        double asym = 0.0, scale = 0.0;
        for (int c = 0; c < skew.outerSize(); ++c)
            for (SpMat::InnerIterator it(skew, c); it; ++it)
                asym = std::max(asym, std::abs(it.value()));
        for (int c = 0; c < L.outerSize(); ++c)
            for (SpMat::InnerIterator it(L, c); it; ++it)
                scale = std::max(scale, std::abs(it.value()));
        if (asym > 1e-10 * std::max(scale, 1e-300))
            throw InputError("smallest_eigenpairs: matrix is not symmetric");
    }

    const int block = static_cast<int>(std::min<Eigen::Index>(m + 5, n));
    if (5 * static_cast<Eigen::Index>(block) >= n || n <= 64) return dense_path(L, m);

    const double op_norm = std::max(
        spectral_norm_estimate(L, 1e-6, 2000, seed ^ 0x9e3779b97f4a7c15ULL), 1e-30);
    const double conv = tol * op_norm;

    Mat x = random_block(n, block, seed);
    {
        Mat dummy = Mat::Zero(n, block);
        orthonormalize_with_companion(x, dummy);
    }
    Mat ax = L * x;
    Mat p(n, 0), ap(n, 0);

    Vec theta = Vec::Zero(block);
    Vec res = Vec::Constant(block, std::numeric_limits<double>::infinity());
    int it = 0;
    bool converged = false;
    for (; it < max_iter; ++it) {
        // Ritz rotation inside span(x)
        Mat h = x.transpose() * ax;
        h = 0.5 * (h + h.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Mat> ritz(h);
        x = (x * ritz.eigenvectors()).eval();
        ax = (ax * ritz.eigenvectors()).eval();
        theta = ritz.eigenvalues();

        Mat r = ax - x * theta.asDiagonal();
        res.resize(x.cols());
        for (int j = 0; j < x.cols(); ++j) res[j] = r.col(j).norm();
        if (res.size() >= m && (res.head(m).array() <= conv).all()) {
            converged = true;
            break;
        }

        Mat aw = L * r;
        const int bx = static_cast<int>(x.cols());
        const int br = static_cast<int>(r.cols());
        const int bp = static_cast<int>(p.cols());
        Mat s(n, bx + br + bp);
        Mat as(n, s.cols());
        s.leftCols(bx) = x;
        s.middleCols(bx, br) = r;
        as.leftCols(bx) = ax;
        as.middleCols(bx, br) = aw;
        if (bp > 0) {
            s.rightCols(bp) = p;
            as.rightCols(bp) = ap;
        }
        orthonormalize_with_companion(s, as);
        if (s.cols() <= bx) break;  // no new directions: invariant subspace

        Mat t = s.transpose() * as;
        t = 0.5 * (t + t.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Mat> small(t);
        const int take = std::min<int>(block, static_cast<int>(s.cols()));
        Mat c = small.eigenvectors().leftCols(take);

        Mat xn = s * c;
        Mat axn = as * c;
        // next conjugate directions: the step component outside the old x
        const int rest = static_cast<int>(s.cols()) - bx;
        Mat cb = c.bottomRows(rest);
        p = s.rightCols(rest) * cb;
        ap = as.rightCols(rest) * cb;
        x = xn;
        ax = axn;
    }

    if (x.cols() < m)
        throw ConvergenceError(
            "smallest_eigenpairs: iteration basis collapsed below m columns",
            std::vector<double>(res.data(), res.data() + res.size()));
    if (!converged) {
        // the subspace may have gone exactly invariant before max_iter
        if (res.size() >= m && (res.head(m).array() <= conv).all()) {
            converged = true;
        } else {
            std::vector<double> best(res.data(),
                                     res.data() + std::min<int>(m, res.size()));
            throw ConvergenceError(
                "smallest_eigenpairs: not converged within max_iter (worst residual " +
                    std::to_string(res.size() ? res.head(std::min<int>(m, res.size())).maxCoeff()
                                              : std::numeric_limits<double>::infinity()) +
                    ", needed " + std::to_string(conv) + ")",
                best);
        }
    }

    EigenPairs out;
    out.values = theta.head(m);
    out.vectors = x.leftCols(m);
    out.residuals = res.head(m);
    out.iterations = it;
    out.op_norm = op_norm;
    return out;
}

BettiEstimate estimate_betti(const Vec& values_in, double zero_tol,
                             double gap_factor, int dim) {
    Vec values = values_in;
    const int len = static_cast<int>(values.size());
    for (int i = 0; i + 1 < len; ++i)
        if (values[i] > values[i + 1] + 1e-12 * std::max(1.0, std::abs(values[i])))
            throw InputError("estimate_betti: eigenvalues must be ascending");
    values = values.cwiseMax(0.0);  // clip tiny negatives

    BettiEstimate est;
    int beta = 0;
    while (beta < len && values[beta] <= zero_tol) ++beta;
    est.beta = beta;

    for (int j = 1; j < len; ++j) {
        const double r = values[j] / std::max(values[j - 1], zero_tol);
        if (r >= gap_factor) est.candidates.push_back(j);
    }

    if (beta == len) {
        // every computed value is null; without the full spectrum the
        // window cannot justify the count
        est.gap_ratio = 0.0;
        est.ambiguous = (dim < 0 || len < dim);
        if (est.ambiguous) est.candidates.push_back(beta);
        return est;
    }
    if (beta == 0) {
        est.gap_ratio = values[0] / zero_tol;
        return est;
    }
    est.gap_ratio = values[beta] / std::max(values[beta - 1], zero_tol);
    est.ambiguous = est.gap_ratio < gap_factor;
    if (est.ambiguous &&
        std::find(est.candidates.begin(), est.candidates.end(), beta) ==
            est.candidates.end())
        est.candidates.push_back(beta);
    return est;
}

HomologyBasis harmonic_basis(const SpMat& L, const NullspaceOptions& opts) {
    const int n = static_cast<int>(L.rows());
    HomologyBasis out;
    if (n == 0) {
        out.Y = Mat(0, 0);
        return out;
    }

    int window = std::min(opts.first_pass, n);
    EigenPairs pairs =
        smallest_eigenpairs(L, window, opts.solver_tol, opts.max_iter, opts.seed);
    BettiEstimate est =
        estimate_betti(pairs.values, opts.zero_tol, opts.gap_factor, n);
    // widen the window until the first nonzero eigenvalue is visible
    while (est.beta == window && window < n) {
        window = std::min(n, std::max(est.beta + 5, 2 * window));
        pairs = smallest_eigenpairs(L, window, opts.solver_tol, opts.max_iter,
                                    opts.seed);
        est = estimate_betti(pairs.values, opts.zero_tol, opts.gap_factor, n);
    }

    const int want = std::min(est.beta + 5, n);
    if (want > window) {
        pairs = smallest_eigenpairs(L, want, opts.solver_tol, opts.max_iter,
                                    opts.seed);
        est = estimate_betti(pairs.values, opts.zero_tol, opts.gap_factor, n);
    }

    out.beta = est.beta;
    out.ambiguous = est.ambiguous;
    out.candidates = est.candidates;
    out.gap_ratio = est.gap_ratio;
    out.op_norm = pairs.op_norm;
    out.spectrum_window = pairs.values;
    out.Y = pairs.vectors.leftCols(est.beta);
    out.eigenvalues = pairs.values.head(est.beta);
    out.residuals = pairs.residuals.head(est.beta);
    return out;
}

}  // namespace hodgeloop
