#include "netglm/inference.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

#include "netglm/errors.hpp"

namespace netglm {

double chisq_upper_tail(double statistic, int df) {
    if (df < 1) {
        throw ConfigError("chi-square needs df >= 1");
    }
    if (!(statistic > 0.0)) {
        return 1.0;
    }
    return boost::math::gamma_q(0.5 * df, 0.5 * statistic);
}

double normal_two_sided(double z) {
    return std::erfc(std::abs(z) / std::sqrt(2.0));
}

Eigen::MatrixXd o_tilde(const Eigen::VectorXd& kappa, const Eigen::MatrixXd& Z) {
    const Eigen::Index n = kappa.size();
    if (Z.rows() != n) {
        throw ConfigError("o_tilde: kappa and Z disagree on n");
    }
    if ((kappa.array() <= 0.0).any()) {
        throw ConfigError("o_tilde: weights must be positive");
    }
    Eigen::MatrixXd O = Eigen::MatrixXd(kappa.asDiagonal());
    if (Z.cols() > 0) {
        const Eigen::MatrixXd kZ = kappa.asDiagonal() * Z;
        const Eigen::MatrixXd inner = Z.transpose() * kZ;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(inner);
        if (!lu.isInvertible()) {
            throw CollinearityError("Z^T kappa Z is singular");
        }
        O -= kZ * lu.solve(kZ.transpose());
    }
    O /= static_cast<double>(n);
    return 0.5 * (O + O.transpose());
}

namespace {

ChiSqResult finish(double statistic, int K, int r) {
    ChiSqResult out;
    out.statistic = std::max(0.0, statistic);
    out.df = K - r;
    out.p_value = chisq_upper_tail(out.statistic, out.df);
    return out;
}

void require_network_block(int K, int r) {
    if (K <= r) {
        throw ConfigError("network-effect test needs K > r (no network component)");
    }
}

}  // namespace

ChiSqResult network_effect_test(const Eigen::VectorXd& alpha, const Eigen::MatrixXd& O, int K,
                                int r) {
    require_network_block(K, r);
    const double n = static_cast<double>(alpha.size());
    return finish(n * alpha.dot(O * alpha), K, r);
}

ChiSqResult network_effect_test(const Eigen::VectorXd& alpha, const Eigen::VectorXd& kappa,
                                const Eigen::MatrixXd& Z, int K, int r) {
    require_network_block(K, r);
    const Eigen::VectorXd ka = kappa.cwiseProduct(alpha);
    double stat = alpha.dot(ka);
    if (Z.cols() > 0) {
        const Eigen::MatrixXd inner = Z.transpose() * kappa.asDiagonal() * Z;
        const Eigen::VectorXd cross = Z.transpose() * ka;
        const Eigen::LDLT<Eigen::MatrixXd> ldlt(inner);
        if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().array() > 0.0).all()) {
            throw CollinearityError("Z^T kappa Z is singular");
        }
        stat -= cross.dot(ldlt.solve(cross));
    }
    return finish(stat, K, r);
}

ChiSqResult network_effect_test(const FittedModel& fit, const EffectiveDesign& design) {
    return network_effect_test(fit.alpha, fit.kappa, design.matrix.leftCols(fit.p),
                               static_cast<int>(fit.K), fit.r);
}

Eigen::MatrixXd inverse_information_block(const FittedModel& fit, Eigen::Index begin,
                                          Eigen::Index end) {
    const Eigen::Index d = fit.information.rows();
    if (begin < 0 || end > d || begin > end) {
        throw ConfigError("inverse_information_block: bad range");
    }
    const Eigen::MatrixXd inv =
        fit.information.ldlt().solve(Eigen::MatrixXd::Identity(d, d));
    return inv.block(begin, begin, end - begin, end - begin);
}

WaldResult coef_test(const FittedModel& fit, const Eigen::VectorXd& u, CoefBlock which,
                     double null_value) {
    const Eigen::Index p = fit.p;
    const Eigen::Index r = fit.r;
    if (u.size() != p || std::abs(u.norm() - 1.0) > 1e-8) {
        throw ConfigError("coef_test: u must be a unit vector of length p");
    }
    Eigen::Index begin = 0;
    Eigen::Index end = 0;
    if (which == CoefBlock::Beta) {
        if (r >= p) {
            throw ConfigError("coef_test: beta block is empty (r = p)");
        }
        begin = r;
        end = p;
    } else {
        if (r < 1) {
            throw ConfigError("coef_test: theta block is empty (r = 0)");
        }
        begin = 0;
        end = r;
    }
    const double n = static_cast<double>(fit.n);
    // Z_block^T X G u
    const Eigen::VectorXd proj = fit.ZtX.middleRows(begin, end - begin) * (fit.G * u);
    WaldResult out;
    out.condition_value = proj.norm() / n;
    if (out.condition_value < 1e-8) {
        throw DegenerateFunctionalError(
            "projected design for this functional vanishes; the Wald test is degenerate",
            out.condition_value);
    }
    const Eigen::MatrixXd block = inverse_information_block(fit, begin, end);
    const double quad = proj.dot(block * proj);
    out.estimate = which == CoefBlock::Beta ? u.dot(fit.beta) : u.dot(fit.theta);
    out.se = std::sqrt(std::max(0.0, quad)) / std::pow(n, 1.5);
    out.z = (out.estimate - null_value) / out.se;
    out.p_value = normal_two_sided(out.z);
    out.ci95 = {out.estimate - 1.96 * out.se, out.estimate + 1.96 * out.se};
    return out;
}

}  // namespace netglm
