#include "hodgeloop/hodge.hpp"

#include <cmath>
#include <random>

namespace hodgeloop {

PropagatedWeights propagate_weights(const BoundaryMatrix& b_next, const Vec& w_next,
                                    const HodgeOptions& opts) {
    if (b_next.cols != w_next.size())
        throw DimensionError("propagate_weights: weight length must equal cell count");
    if ((w_next.array() <= 0.0).any())
        throw InputError("propagate_weights: weights must be strictly positive");

    PropagatedWeights out;
    out.values = Vec::Zero(b_next.rows);
    out.floored = 0;
    for (const auto& e : b_next.entries) out.values[e.face] += w_next[e.cell];

    // Coface-free cells take the mean positive weight (or 1 when nothing has
    // a coface). A vanishing floor would hand every such cell a spurious
    // near-null eigenvalue of L_k; at the weight scale the cell instead acts
    // like an ordinary unweighted cell with no up-term.
    double scale = 0.0;
    Eigen::Index positive = 0;
    for (Eigen::Index i = 0; i < out.values.size(); ++i) {
        if (out.values[i] > 0.0) {
            scale += out.values[i];
            ++positive;
        }
    }
    const double floor_value =
        std::max(opts.floor_eps, positive > 0 ? scale / positive : 1.0);
    for (Eigen::Index i = 0; i < out.values.size(); ++i) {
        if (out.values[i] <= 0.0) {
            if (opts.strict)
                throw InputError("propagate_weights: cell without coface in strict mode");
            out.values[i] = floor_value;
            ++out.floored;
        }
    }
    return out;
}

namespace {

SpMat scaled_boundary(const BoundaryMatrix& b, const Vec& w_faces, const Vec& w_cells) {
    // A_l = W_{l-1}^{-1/2} B_l W_l^{1/2}
    SpMat a(b.rows, b.cols);
    std::vector<Triplet> trip;
    trip.reserve(b.entries.size());
    for (const auto& e : b.entries)
        trip.emplace_back(e.face, e.cell,
                          e.sign * std::sqrt(w_cells[e.cell]) / std::sqrt(w_faces[e.face]));
    a.setFromTriplets(trip.begin(), trip.end());
    return a;
}

SpMat symmetrized(const SpMat& m) {
    SpMat t = m.transpose();
    return 0.5 * (m + t);
}

}  // namespace

HodgeSystem assemble(const BoundaryMatrix& b_k, const BoundaryMatrix& b_kp1,
                     const Vec& w_kp1, ComplexKind kind, int k,
                     const HodgeOptions& opts) {
    if (b_k.cols != b_kp1.rows)
        throw DimensionError("assemble: B_k and B_{k+1} do not compose");
    if (b_k.rows > 0 && !boundary_product_is_zero(b_k, b_kp1))
        throw InputError("assemble: B_k * B_{k+1} != 0");

    HodgeSystem sys;
    sys.k = k;
    sys.kind = kind;
    sys.w_kp1 = w_kp1;

    auto wk = propagate_weights(b_kp1, w_kp1, opts);
    sys.w_k = wk.values;
    sys.floored_k = wk.floored;

    if (b_k.rows > 0) {
        auto wkm1 = propagate_weights(b_k, sys.w_k, opts);
        sys.w_km1 = wkm1.values;
        sys.floored_km1 = wkm1.floored;
        sys.A_k = scaled_boundary(b_k, sys.w_km1, sys.w_k);
    } else {
        sys.w_km1 = Vec();
        sys.A_k = SpMat(0, b_k.cols);
    }
    sys.A_kp1 = scaled_boundary(b_kp1, sys.w_k, sys.w_kp1);

    sys.L_down = symmetrized(SpMat(sys.A_k.transpose() * sys.A_k));
    sys.L_up = symmetrized(SpMat(sys.A_kp1 * SpMat(sys.A_kp1.transpose())));
    sys.L = symmetrized(SpMat(sys.L_down + sys.L_up));
    return sys;
}

HodgeSystem assemble(const Complex2& complex, const Vec& w2, const HodgeOptions& opts) {
    Vec w = w2;
    if (w.size() == 0) w = Vec::Ones(complex.n2());
    if (w.size() != complex.n2())
        throw DimensionError("assemble: w2 length must equal n2");
    auto [b1, b2] = boundary_maps(complex);
    return assemble(b1, b2, w, complex.kind, 1, opts);
}

double spectral_norm_upper(const HodgeSystem& sys) {
    return sys.kind == ComplexKind::simplicial ? sys.k + 2.0 : 2.0 * sys.k + 2.0;
}

double spectral_norm_estimate(const SpMat& m, double rel_tol, int max_iter,
                              std::uint64_t seed) {
    const Eigen::Index n = m.rows();
    if (n == 0 || m.nonZeros() == 0) return 0.0;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = gauss(rng);
    v.normalize();

    // ||M v|| with unit v converges to max|lambda| even when the extreme
    // eigenvalues come in +- pairs
    double lambda = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        Vec mv = m * v;
        const double est = mv.norm();
        if (est == 0.0) {
            // restart away from an exact null direction
            for (Eigen::Index i = 0; i < n; ++i) v[i] = gauss(rng);
            v.normalize();
            continue;
        }
        if (it > 0 && std::abs(est - lambda) <= rel_tol * std::max(est, 1e-300))
            return est;
        lambda = est;
        v = mv / est;
    }
    return lambda;
}

}  // namespace hodgeloop
