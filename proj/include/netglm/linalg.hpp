#pragma once

#include <Eigen/Dense>

namespace netglm::linalg {

struct EigenPairs {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // one column per value
};

/// Eigenpairs with 0-based ascending indices [first, first + count) of a dense
/// symmetric matrix. Only the lower triangle of `sym` is read.
EigenPairs symmetric_eigen_range(const Eigen::MatrixXd& sym, Eigen::Index first,
                                 Eigen::Index count);

/// Largest singular value of a dense matrix.
double spectral_norm(const Eigen::MatrixXd& m);

/// max_ij |a_ij - a_ji| relative to max(1, max |a_ij|).
double asymmetry(const Eigen::MatrixXd& m);

}  // namespace netglm::linalg
