#include "netglm/linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <string>
#include <vector>

#include "netglm/errors.hpp"

namespace netglm::linalg {

EigenPairs symmetric_eigen_range(const Eigen::MatrixXd& sym, Eigen::Index first,
                                 Eigen::Index count) {
    const Eigen::Index n = sym.rows();
    if (sym.cols() != n || first < 0 || count < 1 || first + count > n) {
        throw ConfigError("symmetric_eigen_range: bad matrix shape or index range");
    }
    Eigen::MatrixXd work = sym;  // dsyevr overwrites its input
    EigenPairs out;
    out.values.resize(n);
    out.vectors.resize(n, count);
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(count));
    lapack_int found = 0;
    const lapack_int info = LAPACKE_dsyevr(
        LAPACK_COL_MAJOR, 'V', 'I', 'L', static_cast<lapack_int>(n), work.data(),
        static_cast<lapack_int>(n), 0.0, 0.0, static_cast<lapack_int>(first + 1),
        static_cast<lapack_int>(first + count), 0.0, &found, out.values.data(),
        out.vectors.data(), static_cast<lapack_int>(n), support.data());
    if (info != 0 || found != count) {
        throw NumericalError("dsyevr failed (info=" + std::to_string(info) + ")");
    }
    out.values.conservativeResize(count);
    return out;
}

double spectral_norm(const Eigen::MatrixXd& m) {
    if (m.size() == 0) {
        return 0.0;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues()(0);
}

double asymmetry(const Eigen::MatrixXd& m) {
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    return (m - m.transpose()).cwiseAbs().maxCoeff() / scale;
}

}  // namespace netglm::linalg
