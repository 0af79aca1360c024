#include "kronred/error.hpp"
#include "kronred/experiment.hpp"
#include "kronred/phasor.hpp"
#include "random_networks.hpp"

#include <doctest.h>

#include <complex>
#include <numbers>
#include <random>

using namespace kronred;
using cd = std::complex<double>;

namespace {

Network balanced_wye(double r, double l) {
    return {{"1", "2", "3", "4"},
            {{"a", "1", "4", r, l}, {"b", "2", "4", r, l}, {"c", "3", "4", r, l}},
            {"1", "2", "3"}};
}

Network net_b(double r1, double l1, double r2, double l2) {
    return {{"1", "2", "3"}, {{"e1", "1", "3", r1, l1}, {"e2", "3", "2", r2, l2}}, {"1", "2"}};
}

}  // namespace

TEST_SUITE("phasor") {

TEST_CASE("phasor conventions") {
    const Phasor p = Phasor::from_complex(cd(0.0, -2.0));
    CHECK(p.magnitude == doctest::Approx(2));
    CHECK(p.phase == doctest::Approx(-std::numbers::pi / 2));
    CHECK(normalize_phase(-std::numbers::pi) == doctest::Approx(std::numbers::pi));
    CHECK(normalize_phase(3 * std::numbers::pi) == doctest::Approx(std::numbers::pi));
    CHECK(Phasor::from_complex(cd(0, 0)).phase == 0.0);
}

TEST_CASE("admittance of a single edge") {
    const auto Y = admittance(validate({{"1", "2"}, {{"e", "1", "2", 1, 1}}, {"1", "2"}}), 1.0);
    const cd y(0.5, -0.5);
    CHECK(std::abs(Y.Y(0, 0) - y) < 1e-15);
    CHECK(std::abs(Y.Y(0, 1) + y) < 1e-15);
    CHECK(std::abs(Y.Y(1, 1) - y) < 1e-15);
    CHECK_THROWS_AS((void)admittance(validate({{"1", "2"}, {{"e", "1", "2", 1, 1}}, {"1", "2"}}), 0.0), Error);
}

TEST_CASE("admittance of a path is the weighted Laplacian") {
    const double w = 2.0;
    const cd z1(1.0, w * 0.5), z2(2.0, w * 0.25);
    const auto Y = admittance(validate(net_b(1, 0.5, 2, 0.25)), w);
    // rows: 1, 2, 3 (node 3 interior)
    CMatrix expected(3, 3);
    expected << 1.0 / z1, 0, -1.0 / z1, 0, 1.0 / z2, -1.0 / z2, -1.0 / z1, -1.0 / z2, 1.0 / z1 + 1.0 / z2;
    CHECK((Y.Y - expected).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("purely inductive admittance is the inductive Laplacian over jw") {
    const Network n = net_b(0, 0.5, 0, 0.25);
    const double w = 3.0;
    const auto Y = admittance(validate(n), w);
    const auto parts = partitioned(validate(n));
    Matrix B(3, 2);
    B << parts.B1, parts.B0;
    const Matrix inductive = B * parts.l.cwiseInverse().asDiagonal() * B.transpose();
    CHECK((Y.Y - inductive.cast<cd>() / cd(0, w)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("invertibility conditions") {
    const auto c = check_interior_invertibility(validate(experiment::wye_network()));
    CHECK(c.c1);
    CHECK(c.c2);
    const auto a = check_interior_invertibility(validate({{"1", "2"}, {{"e", "1", "2", 0, 1}}, {"1", "2"}}));
    CHECK_FALSE(a.c1);
    CHECK(a.c2);
    CHECK(a.guaranteed());
}

TEST_CASE("balanced wye reduces to a delta of 3z branches") {
    const double w = 5.0;
    const cd z(0.4, w * 0.3);
    const auto kr = kron_reduce(admittance(validate(balanced_wye(0.4, 0.3)), w));
    for (int m = 0; m < 3; ++m) {
        for (int n = 0; n < 3; ++n) {
            if (m != n) CHECK(std::abs(kr.Yr(m, n) + 1.0 / (3.0 * z)) < 1e-14);
        }
    }
    const auto i1 = phasor_solve(kr.Yr, {Phasor::polar(1, 0), Phasor::polar(0, 0), Phasor::polar(0, 0)});
    CHECK(std::abs(i1[0].to_complex() - 2.0 / (3.0 * z)) < 1e-14);
    CHECK(std::abs(i1[1].to_complex() + 1.0 / (3.0 * z)) < 1e-14);
    CHECK(std::abs(i1[2].to_complex() + 1.0 / (3.0 * z)) < 1e-14);
    // interior sits at the mean of the boundary voltages
    const auto v0 = recover_interior(kr.recovery, {Phasor::polar(3, 0), Phasor::polar(0, 0), Phasor::polar(0, 0)});
    CHECK(std::abs(v0[0].to_complex() - 1.0) < 1e-14);
}

TEST_CASE("series rule on a path") {
    const double w = 2.0;
    const cd z1(1.0, w * 0.5), z2(2.0, w * 0.25);
    const auto kr = kron_reduce(admittance(validate(net_b(1, 0.5, 2, 0.25)), w));
    const CMatrix expected = CMatrix{{1.0, -1.0}, {-1.0, 1.0}} / (z1 + z2);
    CHECK((kr.Yr - expected).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("no interior nodes leaves Y untouched") {
    const auto Y = admittance(validate({{"1", "2"}, {{"e", "1", "2", 1, 1}}, {"1", "2"}}), 1.0);
    const auto kr = kron_reduce(Y);
    CHECK(kr.Yr == Y.Y);
    CHECK(kr.recovery.rows() == 0);
}

TEST_CASE("equal boundary voltages draw no current") {
    const auto kr = kron_reduce(admittance(validate(experiment::wye_network()), experiment::kOmega0));
    const Phasor v = Phasor::polar(120, 0.3);
    for (const auto& p : phasor_solve(kr.Yr, {v, v, v})) CHECK(p.magnitude < 1e-12);
    CHECK_THROWS_AS((void)phasor_solve(kr.Yr, {v, v}), Error);
}

TEST_CASE("reduced admittance is symmetric with zero row sums") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const auto v = validate(testing::random_network(rng));
        const auto kr = kron_reduce(admittance(v, 1.0 + trial * 0.1));
        CHECK((kr.Yr - kr.Yr.transpose()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(kr.Yr.rowwise().sum().cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, kr.Yr.cwiseAbs().maxCoeff()));
    }
}

}  // TEST_SUITE
