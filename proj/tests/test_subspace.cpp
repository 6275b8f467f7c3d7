#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "netglm/errors.hpp"
#include "netglm/netgen.hpp"
#include "netglm/subspace.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace netglm;

using fixture::gaussian_matrix;
using fixture::random_orthogonal;
using fixture::shared_instance;

TEST_CASE("orthonormal_basis examples") {
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(2, 2);
    CHECK((orthonormal_basis(I) - I).norm() < 1e-14);

    Eigen::MatrixXd X(2, 2);
    X << 1, 1, 1, -1;
    Eigen::MatrixXd expected = X / std::sqrt(2.0);
    CHECK((orthonormal_basis(X) - expected).norm() < 1e-14);

    std::mt19937_64 gen(1);
    Eigen::MatrixXd Y = gaussian_matrix(10, 3, gen);
    Eigen::MatrixXd Q1 = orthonormal_basis(Y), Q5 = orthonormal_basis(5.0 * Y);
    CHECK((Q1 * Q1.transpose() - Q5 * Q5.transpose()).norm() < 1e-12);
}

TEST_CASE("orthonormal_basis rejects a rank-deficient design") {
    Eigen::MatrixXd X(4, 2);
    X << 1, 2, 2, 4, 3, 6, 4, 8;
    CHECK_THROWS_AS(orthonormal_basis(X), DegenerateDesignError);
}

TEST_CASE("spectral_basis examples") {
    Eigen::MatrixXd D = Eigen::Vector3d(3, 2, 1).asDiagonal();
    auto b = spectral_basis(D, 2);
    CHECK(b.eigenvalues[0] == doctest::Approx(3));
    CHECK(b.eigenvalues[1] == doctest::Approx(2));
    CHECK(std::abs(b.vectors(2, 0)) < 1e-14);
    CHECK(std::abs(b.vectors(2, 1)) < 1e-14);

    Eigen::MatrixXd J = Eigen::MatrixXd::Ones(3, 3);
    auto bj = spectral_basis(J, 1);
    CHECK((bj.vectors.col(0) - Eigen::Vector3d::Constant(1.0 / std::sqrt(3.0))).norm() < 1e-12);

    Eigen::MatrixXd path = Eigen::MatrixXd::Zero(4, 4);
    for (int i = 0; i < 3; ++i) path(i, i + 1) = path(i + 1, i) = 1.0;
    auto bl = spectral_basis(path, 1, SpectralMode::LaplacianSmallest);
    CHECK((bl.vectors.col(0) - Eigen::Vector4d::Constant(0.5)).norm() < 1e-12);
    CHECK(std::abs(bl.eigenvalues[0]) < 1e-12);
}

TEST_CASE("spectral_basis flags a degenerate gap") {
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(5, 5);
    auto b = spectral_basis(I, 2);
    CHECK(b.degenerate_gap);
    CHECK_FALSE(b.warnings.empty());
    Eigen::MatrixXd D = Eigen::VectorXd::LinSpaced(5, 5, 1).asDiagonal();
    CHECK_FALSE(spectral_basis(D, 2).degenerate_gap);
}

TEST_CASE("spectral_basis orders by algebraic value and is deterministic") {
    Eigen::MatrixXd D = Eigen::Vector4d(-10, 1, 2, 3).asDiagonal();
    auto b = spectral_basis(D, 2);
    CHECK(b.eigenvalues[0] == doctest::Approx(3));
    CHECK(b.eigenvalues[1] == doctest::Approx(2));

    std::mt19937_64 gen(3);
    Eigen::MatrixXd A = gaussian_matrix(40, 40, gen);
    A = (A + A.transpose()).eval();
    auto b1 = spectral_basis(A, 4);
    auto b2 = spectral_basis(A, 4);
    CHECK(b1.vectors == b2.vectors);
    CHECK(b1.eigenvalues == b2.eigenvalues);
}

TEST_CASE("align_subspaces on identical and orthogonal subspaces") {
    std::mt19937_64 gen(4);
    Eigen::MatrixXd Q = oracle::orth(gaussian_matrix(12, 5, gen));
    auto same = align_subspaces(Q.leftCols(3), Q.leftCols(3));
    CHECK((same.sigma - Eigen::Vector3d::Ones()).cwiseAbs().maxCoeff() < 1e-12);
    auto orth = align_subspaces(Q.leftCols(2), Q.rightCols(3));
    CHECK(orth.sigma.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("align_subspaces basis invariants on random instances") {
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::Index n = 25, p = 3, K = 4;
        auto inst = shared_instance(n, p, K, gen);
        auto bases = align_subspaces(orthonormal_basis(inst.X), inst.Wbreve);
        const double dn = static_cast<double>(n);
        CHECK((bases.Z.transpose() * bases.Z - dn * Eigen::MatrixXd::Identity(p, p)).norm() < 1e-8);
        CHECK((bases.W.transpose() * bases.W - dn * Eigen::MatrixXd::Identity(K, K)).norm() < 1e-8);
        for (Eigen::Index i = 1; i < K; ++i) CHECK(bases.sigma[i] <= bases.sigma[i - 1]);
        CHECK(bases.sigma.maxCoeff() <= 1.0);
        CHECK(bases.sigma.minCoeff() >= 0.0);
        const Eigen::MatrixXd proj = bases.Z * bases.Z.transpose() / dn;
        const Eigen::MatrixXd hat =
            inst.X * (inst.X.transpose() * inst.X).ldlt().solve(inst.X.transpose());
        CHECK((proj - hat).norm() < 1e-10);
        CHECK((proj * proj - proj).norm() < 1e-10);
    }
}

TEST_CASE("singular values equal principal-angle cosines") {
    std::mt19937_64 gen(6);
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::MatrixXd A = gaussian_matrix(9, 3, gen);
        const Eigen::MatrixXd B = gaussian_matrix(9, 3, gen);
        auto bases = align_subspaces(orthonormal_basis(A), orthonormal_basis(B));
        const Eigen::VectorXd cosines = oracle::principal_cosines(A, B);
        CHECK((bases.sigma - cosines).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("design of the simulation study aligns with sigma = (1, 1/5, 0)") {
    auto prob = sbm_matrix(300, 3, 0.3, 30);
    auto rng = make_stream(1, 0, "design");
    auto truth = paper_design(prob, GlmFamily::bernoulli(), rng);
    const Eigen::Vector3d expected(1.0, 0.2, 0.0);
    CHECK((truth.oracle.sigma - expected).cwiseAbs().maxCoeff() < 1e-8);

    auto spec = spectral_basis(prob.P, 3);
    auto bases = align_subspaces(orthonormal_basis(truth.X), spec.vectors);
    CHECK((bases.sigma - expected).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(select_r(bases.sigma, average_degree(prob.P), 2, 3, 300) == 1);
}

TEST_CASE("select_r rule") {
    // Dense networks push the threshold towards 1.
    Eigen::Vector3d low(0.3, 0.2, 0.1);
    CHECK(select_r(low, 1e6, 2, 3, 1000) == 0);

    Eigen::Vector3d s(0.999, 0.21, 0.01);
    const double threshold = 1.0 - 4.0 * std::sqrt(6.0 * std::log(1000.0)) / 100.0;
    CHECK(select_r_threshold(100.0, 2, 3, 1000) == doctest::Approx(threshold).epsilon(1e-14));
    CHECK(threshold == doctest::Approx(0.74246).epsilon(1e-4));
    CHECK(select_r(s, 100.0, 2, 3, 1000) == 1);

    // Exactly at the threshold counts.
    Eigen::Vector3d at(1.0, threshold, 0.0);
    CHECK(select_r(at, 100.0, 2, 3, 1000) == 2);

    // Sparse networks give thresholds below zero; r is capped at min(p, K).
    CHECK(select_r(s, 10.0, 2, 3, 1000) == 2);

    CHECK_THROWS_AS(select_r(s, 0.0, 2, 3, 1000), EmptyNetworkError);
}

TEST_CASE("projection matrices") {
    std::mt19937_64 gen(7);
    auto inst = shared_instance(20, 2, 3, gen);
    auto bases = align_subspaces(orthonormal_basis(inst.X), inst.Wbreve);

    auto p0 = projection_matrices(with_r(bases, 0));
    CHECK(p0.R.norm() == 0.0);

    for (int r = 0; r <= 2; ++r) {
        auto pr = projection_matrices(with_r(bases, r));
        for (const Eigen::MatrixXd* M : {&pr.R, &pr.C, &pr.N}) {
            CHECK((*M * *M - *M).norm() < 1e-8);
            CHECK((*M - M->transpose()).norm() < 1e-12);
        }
    }

    Eigen::MatrixXd Q = oracle::orth(gaussian_matrix(10, 3, gen));
    auto same = with_r(align_subspaces(Q, Q), 3);
    auto ps = projection_matrices(same);
    CHECK(ps.C.norm() < 1e-12);
    CHECK(ps.N.norm() < 1e-12);

    CHECK_THROWS_AS(with_r(bases, 3), ConfigError);
    CHECK_THROWS_AS(projection_matrices(bases), ConfigError);
}

TEST_CASE("projections are invariant to orthogonal re-basis") {
    std::mt19937_64 gen(8);
    for (int trial = 0; trial < 10; ++trial) {
        auto inst = shared_instance(20, 3, 3, gen);
        const Eigen::MatrixXd Zbar = orthonormal_basis(inst.X);
        const Eigen::MatrixXd Q = random_orthogonal(3, gen);
        const Eigen::MatrixXd Qw = random_orthogonal(3, gen);
        auto a = projection_matrices(with_r(align_subspaces(Zbar, inst.Wbreve), 1));
        auto b = projection_matrices(with_r(align_subspaces(Zbar * Q, inst.Wbreve * Qw), 1));
        CHECK((a.R - b.R).norm() < 1e-8);
        CHECK((a.C - b.C).norm() < 1e-8);
        CHECK((a.N - b.N).norm() < 1e-8);
    }
}

TEST_CASE("tau diagnostic") {
    auto prob = sbm_matrix(200, 3, 0.3, std::sqrt(200.0));
    auto rng = make_stream(2, 0, "design");
    auto truth = paper_design(prob, GlmFamily::bernoulli(), rng);
    const auto& ob = truth.oracle;

    std::mt19937_64 gen(9);
    const Eigen::MatrixXd rotated = ob.W * random_orthogonal(3, gen);
    auto zero = tau_diagnostic(rotated, ob.W, ob.Z, ob.sigma, 1, 1);
    CHECK(zero.tau < 1e-10);

    auto arng = make_stream(2, 1, "adjacency");
    const Eigen::MatrixXd A = sample_adjacency(prob, arng);
    auto aligned = align_subspaces(orthonormal_basis(truth.X), spectral_basis(A, 3).vectors);
    auto tau = tau_diagnostic(aligned.W, ob.W, ob.Z, ob.sigma, 1, 1);

    const double n = 200.0;
    const Eigen::MatrixXd diff =
        aligned.W * aligned.W.transpose() - ob.W * ob.W.transpose();
    const double num = oracle::spectral_norm(diff * ob.Z) / std::pow(n, 1.5);
    const double den = std::min(std::pow(1.0 - ob.sigma[1], 3), std::pow(ob.sigma[1], 3));
    CHECK(tau.numerator == doctest::Approx(num).epsilon(1e-10));
    CHECK(tau.denominator == doctest::Approx(den).epsilon(1e-12));
    CHECK(tau.tau == doctest::Approx(num / den).epsilon(1e-10));
    CHECK_FALSE(tau.s_term_dropped);

    auto s0 = tau_diagnostic(aligned.W, ob.W, ob.Z, ob.sigma, 1, 0);
    CHECK(s0.s_term_dropped);
    CHECK(s0.denominator == doctest::Approx(std::pow(1.0 - ob.sigma[1], 3)));
}

TEST_CASE("denser networks give smaller tau") {
    const Eigen::Index n = 300;
    auto one_rule = [&](DegreeRule rule) {
        auto prob = sbm_matrix(n, 3, 0.3, target_degree(rule, n));
        auto rng = make_stream(3, 0, "design");
        auto truth = paper_design(prob, GlmFamily::bernoulli(), rng);
        const Eigen::MatrixXd Zbar = orthonormal_basis(truth.X);
        std::vector<double> taus;
        for (int seed = 0; seed < 20; ++seed) {
            auto arng = make_stream(3, seed, "adjacency");
            const Eigen::MatrixXd A = sample_adjacency(prob, arng);
            auto aligned = align_subspaces(Zbar, spectral_basis(A, 3).vectors);
            taus.push_back(
                tau_diagnostic(aligned.W, truth.oracle.W, truth.oracle.Z, truth.oracle.sigma, 1, 1)
                    .tau);
        }
        std::nth_element(taus.begin(), taus.begin() + 10, taus.end());
        return taus[10];
    };
    CHECK(one_rule(DegreeRule::NTwoThirds) < one_rule(DegreeRule::TwoLogN));
}
