#include "hodgeloop/ica.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hodgeloop {

UnmixingResult ica_no_prewhite(const Mat& Y, const IcaOptions& opts) {
    const Eigen::Index n = Y.rows();
    const Eigen::Index beta = Y.cols();
    if (beta < 1) throw InputError("ica_no_prewhite: need beta >= 1");
    if (n < 2) throw InputError("ica_no_prewhite: need at least two rows");

    UnmixingResult out;
    out.unmix = Mat::Identity(beta, beta);

    double lr = opts.lr;
    Mat eye = Mat::Identity(beta, beta);
    Mat prev_delta;

    int it = 0;
    for (; it < opts.max_iter; ++it) {
        Mat u = Y * out.unmix;
        // logistic score g(u) = sigma(u) - 1/2 = tanh(u/2) / 2
        Mat g = (u.array() / 2.0).tanh() / 2.0;
        // natural gradient for the column-acting unmixing Z = Y * unmix
        Mat delta = lr * out.unmix *
                    (eye - (2.0 / static_cast<double>(n)) * (u.transpose() * g));
        out.unmix += delta;
        const double update = delta.norm();
        out.last_update = update;
        // the unmixing matrix is scale-free, so the stopping rule is
        // relative to its current norm
        if (update < opts.conv_tol * std::max(out.unmix.norm(), 1.0)) {
            out.converged = true;
            ++it;
            break;
        }
        // oscillation = successive updates pointing against each other
        if (prev_delta.size() > 0 &&
            (delta.array() * prev_delta.array()).sum() < 0.0)
            lr *= 0.9;
        prev_delta = std::move(delta);
    }
    out.iterations = it;

    // fold unit-norm and sign normalization of Z's columns into unmix
    Mat z = Y * out.unmix;
    for (Eigen::Index j = 0; j < beta; ++j) {
        double nrm = z.col(j).norm();
        if (nrm == 0.0) nrm = 1.0;
        Eigen::Index argmax = 0;
        z.col(j).cwiseAbs().maxCoeff(&argmax);
        const double sign = z(argmax, j) < 0.0 ? -1.0 : 1.0;
        out.unmix.col(j) *= sign / nrm;
    }
    out.Z = Y * out.unmix;

    Eigen::JacobiSVD<Mat> svd(out.unmix);
    const double smin = svd.singularValues()(beta - 1);
    out.condition = smin > 0.0 ? svd.singularValues()(0) / smin
                               : std::numeric_limits<double>::infinity();
    out.degenerate = out.condition > 1e8;
    return out;
}

double max_principal_angle(const Mat& A, const Mat& B) {
    if (A.cols() != B.cols() || A.rows() != B.rows())
        throw DimensionError("max_principal_angle: shapes differ");
    if (A.cols() == 0) return 0.0;
    Eigen::HouseholderQR<Mat> qa(A), qb(B);
    Mat qaQ = qa.householderQ() * Mat::Identity(A.rows(), A.cols());
    Mat qbQ = qb.householderQ() * Mat::Identity(B.rows(), B.cols());
    // sine formulation: accurate for the tiny angles we assert on
    Mat residual = qbQ - qaQ * (qaQ.transpose() * qbQ);
    Eigen::JacobiSVD<Mat> svd(residual);
    const double s = std::clamp(svd.singularValues()(0), 0.0, 1.0);
    return std::asin(s);
}

}  // namespace hodgeloop
