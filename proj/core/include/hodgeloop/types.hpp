#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <stdexcept>
#include <string>
#include <vector>

namespace hodgeloop {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using SpMat = Eigen::SparseMatrix<double>;
using SpMatInt = Eigen::SparseMatrix<std::int64_t>;
using Triplet = Eigen::Triplet<double>;

/// Bad or inconsistent caller input (sizes, ranges, missing files).
struct InputError : std::runtime_error {
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Shapes of two objects do not compose.
struct DimensionError : std::runtime_error {
    explicit DimensionError(const std::string& what) : std::runtime_error(what) {}
};

/// A complex violates the closure property (missing face).
struct ClosureError : std::runtime_error {
    explicit ClosureError(const std::string& what) : std::runtime_error(what) {}
};

/// Iterative solver failed to reach the requested tolerance.
/// Carries the best per-vector residuals reached so far.
struct ConvergenceError : std::runtime_error {
    ConvergenceError(const std::string& what, std::vector<double> best)
        : std::runtime_error(what), best_residuals(std::move(best)) {}
    std::vector<double> best_residuals;
};

/// The spectrum does not admit an unambiguous Betti number.
/// Carries the candidate counts that were considered.
struct AmbiguityError : std::runtime_error {
    AmbiguityError(const std::string& what, std::vector<int> cand)
        : std::runtime_error(what), candidates(std::move(cand)) {}
    std::vector<int> candidates;
};

/// Loop search exhausted all seeds (and threshold relaxations) for a class.
struct NoLoopError : std::runtime_error {
    NoLoopError(const std::string& what, int cls)
        : std::runtime_error(what), class_index(cls) {}
    int class_index;
};

}  // namespace hodgeloop
