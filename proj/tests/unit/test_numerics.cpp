#include "kronred/error.hpp"
#include "kronred/experiment.hpp"
#include "kronred/numerics.hpp"
#include "kronred/reduction.hpp"
#include "random_networks.hpp"

#include <doctest.h>

#include <complex>
#include <numbers>
#include <random>

using namespace kronred;
using cd = std::complex<double>;

TEST_SUITE("numerics") {

TEST_CASE("null space of a single all-ones row") {
    const Matrix P = nullspace_basis(Matrix{{1, 1, 1}});
    REQUIRE(P.rows() == 3);
    REQUIRE(P.cols() == 2);
    CHECK((P.transpose() * P - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(P.colwise().sum().cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("null space of an empty constraint is everything") {
    const Matrix P = nullspace_basis(Matrix(0, 4));
    CHECK(P == Matrix::Identity(4, 4));
}

TEST_CASE("null space of the series-path constraint") {
    const Matrix P = nullspace_basis(Matrix{{-1, 1}});
    REQUIRE(P.cols() == 1);
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(std::abs(P(0, 0)) - s) < 1e-14);
    CHECK(std::abs(P(0, 0) - P(1, 0)) < 1e-14);
}

TEST_CASE("rank-deficient input is rejected") {
    CHECK_THROWS_AS((void)nullspace_basis(Matrix{{1, 1, 0}, {2, 2, 0}}), Error);
    const Matrix K = kernel_basis(Matrix{{1, 1, 0}, {2, 2, 0}});
    CHECK(K.cols() == 2);
    CHECK(numerical_rank(Matrix{{1, 1, 0}, {2, 2, 0}}) == 1);
}

TEST_CASE("schur complement examples") {
    Matrix blockdiag = Matrix::Zero(4, 4);
    blockdiag.topLeftCorner(2, 2) << 3, 1, 1, 2;
    blockdiag.bottomRightCorner(2, 2) << 5, 1, 2, 4;
    CHECK(schur_complement(blockdiag, {2, 3}) == blockdiag.topLeftCorner(2, 2));

    const Matrix s = schur_complement(Matrix{{2, -1}, {-1, 2}}, {1});
    CHECK(s(0, 0) == doctest::Approx(1.5).epsilon(1e-15));

    const cd z(0.7, 1.3);
    CMatrix wye(4, 4);
    wye << 1, 0, 0, -1, 0, 1, 0, -1, 0, 0, 1, -1, -1, -1, -1, 3;
    wye /= z;
    const CMatrix delta = schur_complement(wye, {3});
    const CMatrix expected = (CMatrix::Identity(3, 3) - CMatrix::Constant(3, 3, 1.0 / 3.0)) / z;
    CHECK((delta - expected).cwiseAbs().maxCoeff() < 1e-14);
    // Delta branch impedance is three times the wye branch
    CHECK(std::abs(-1.0 / delta(0, 1) - 3.0 * z) < 1e-13);
}

TEST_CASE("schur complement keeps the nonsymmetric form") {
    const Matrix M{{4, 1, 2}, {3, 5, 1}, {1, 2, 6}};
    const Matrix s = schur_complement(M, {0});
    const Matrix expected = M.bottomRightCorner(2, 2) - M.block(1, 0, 2, 1) * M.block(0, 1, 1, 2) / 4.0;
    CHECK((s - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("singular eliminated block") {
    const Matrix M{{1, 1, 1}, {1, 1, 1}, {1, 1, 2}};
    try {
        (void)schur_complement(M, {0, 1});
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SingularBlock);
    }
    CHECK_THROWS_AS((void)schur_complement(M, {0, 0}), Error);
    CHECK_THROWS_AS((void)schur_complement(Matrix(2, 3), {0}), Error);
}

TEST_CASE("minimum-norm solutions") {
    const Vector b{{3, -1, 2}};
    CHECK(min_norm_solution(Matrix::Identity(3, 3), b) == b);

    const Matrix Br{{1, 0, -1}, {-1, 1, 0}, {0, -1, 1}};
    const Vector x = min_norm_solution(Br, Vector{{-5, -5, 10}});
    CHECK((x - Vector{{0, -5, 5}}).cwiseAbs().maxCoeff() < 1e-12);
    // pseudoinverse oracle
    const Matrix pinv = Br.completeOrthogonalDecomposition().pseudoInverse();
    CHECK((x - pinv * Vector{{-5, -5, 10}}).cwiseAbs().maxCoeff() < 1e-12);

    try {
        (void)min_norm_solution(Br, Vector{{1, 1, 1}});
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Inconsistent);
    }
}

TEST_CASE("minimum-norm solution is orthogonal to the null space") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 50; ++trial) {
        const Index rows = 2 + trial % 4, cols = rows + 1 + trial % 3, rank = rows - trial % 2;
        Matrix A = Matrix::NullaryExpr(rows, rank, [&] { return g(rng); }) *
                   Matrix::NullaryExpr(rank, cols, [&] { return g(rng); });
        const Vector b = A * Vector::NullaryExpr(cols, [&] { return g(rng); });
        const Vector x = min_norm_solution(A, b);
        CHECK((A * x - b).norm() <= 1e-9 * b.norm());
        const Matrix K = kernel_basis(A);
        CHECK((K.transpose() * x).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, x.norm()));
    }
}

TEST_CASE("pencil diagonalization examples") {
    auto d = simultaneous_diagonalization(Matrix::Identity(2, 2), Matrix{{3, 0}, {0, 7}});
    CHECK((d.V.transpose() * d.V - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(d.values(0) == doctest::Approx(3));
    CHECK(d.values(1) == doctest::Approx(7));

    d = simultaneous_diagonalization(Matrix{{4, 0}, {0, 1}}, Matrix{{4, 0}, {0, 4}});
    CHECK(d.values(0) == doctest::Approx(1));
    CHECK(d.values(1) == doctest::Approx(4));
    CHECK((d.V.cwiseAbs() - Matrix{{0.5, 0}, {0, 1}}).cwiseAbs().maxCoeff() < 1e-14);

    const Matrix Lp{{2, 0.5}, {0.5, 1}};
    d = simultaneous_diagonalization(Lp, Matrix::Zero(2, 2));
    CHECK((d.V.transpose() * Lp * d.V - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(d.values.cwiseAbs().maxCoeff() < 1e-15);

    CHECK_THROWS_AS((void)simultaneous_diagonalization(Matrix{{1, 2}, {2, 1}}, Matrix::Identity(2, 2)), Error);
}

TEST_CASE("projection identity on the wye and trivial weights") {
    const auto parts = partitioned(validate(experiment::wye_network()));
    const Matrix P = nullspace_basis(parts.B0);
    CHECK(projection_identity_residual(CVector::Ones(3), P, parts.B0) < 1e-10);
    const double w = experiment::kOmega0;
    const CVector weights = parts.r.cast<cd>() + cd(0, w) * parts.l.cast<cd>();
    CHECK(projection_identity_residual(weights, P, parts.B0) < 1e-10);

    const Matrix Pt = tree_elimination_basis(build_incidence(validate(experiment::wye_network())));
    CHECK((projected_inverse(weights, P) - projected_inverse(weights, Pt)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("projection identity does not hold for a wrong subspace") {
    const auto parts = partitioned(validate(experiment::wye_network()));
    const Matrix wrong{{1, 0}, {0, 1}, {0, 0}};
    CHECK(projection_identity_residual(CVector::Ones(3), wrong, parts.B0) > 1e-3);
}

}  // TEST_SUITE
