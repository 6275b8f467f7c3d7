#pragma once

// Random test instances built without the library under test.

#include <algorithm>
#include <random>

#include <Eigen/Dense>

#include "oracles.hpp"

namespace fixture {

inline Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& gen) {
    std::normal_distribution<double> nd;
    Eigen::MatrixXd M(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) M(i, j) = nd(gen);
    return M;
}

inline Eigen::MatrixXd random_orthogonal(Eigen::Index d, std::mt19937_64& gen) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian_matrix(d, d, gen));
    return qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
}

/// Covariates X (n x p) and an orthonormal network basis (n x K) sharing one
/// direction, so the intersection has dimension 1.
struct Instance {
    Eigen::MatrixXd X;
    Eigen::MatrixXd Wbreve;
};

inline Instance shared_instance(Eigen::Index n, Eigen::Index p, Eigen::Index K, std::mt19937_64& gen) {
    const Eigen::MatrixXd base = oracle::orth(gaussian_matrix(n, p + K, gen));
    Instance inst;
    inst.X = gaussian_matrix(n, p, gen);
    inst.X.col(0) = base.col(0) * std::sqrt(static_cast<double>(n));
    Eigen::MatrixXd W(n, K);
    W.col(0) = base.col(0);
    for (Eigen::Index j = 1; j < K; ++j) {
        W.col(j) = base.col(p + j) + 0.3 * inst.X.col(std::min<Eigen::Index>(j, p - 1)) /
                                         std::sqrt(static_cast<double>(n));
    }
    inst.Wbreve = oracle::orth(W);
    return inst;
}

}  // namespace fixture
