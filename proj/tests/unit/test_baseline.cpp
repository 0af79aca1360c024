#include "kronred/error.hpp"
#include "kronred/baseline.hpp"
#include "kronred/experiment.hpp"
#include "kronred/simulation.hpp"

#include <doctest.h>

#include <numbers>

using namespace kronred;

namespace {

Network wye(double r, double l) {
    return {{"1", "2", "3", "4"},
            {{"a", "1", "4", r, l}, {"b", "2", "4", r, l}, {"c", "3", "4", r, l}},
            {"1", "2", "3"}};
}

Network homogeneous_wye() {
    return {{"1", "2", "3", "4"},
            {{"a", "1", "4", 1.0, 0.5}, {"b", "2", "4", 1.6, 0.8}, {"c", "3", "4", 0.6, 0.3}},
            {"1", "2", "3"}};
}

const Matrix kCycle{{1, 0, -1}, {-1, 1, 0}, {0, -1, 1}};

}  // namespace

TEST_SUITE("baseline") {

TEST_CASE("balanced wye synthesizes a delta of 3r, 3l") {
    for (double w0 : {1.0, 9.42477796, 40.0}) {
        const SynthesizedNetwork s = heuristic_reduce(validate(wye(1.0, 1.0)), w0);
        const Network& d = s.network.network();
        REQUIRE(d.edges.size() == 3);
        CHECK(d.edges[0].from == "1");
        CHECK(d.edges[0].to == "2");
        CHECK(d.edges[2].from == "3");
        CHECK(d.edges[2].to == "1");
        for (const auto& e : d.edges) {
            CHECK(e.r == doctest::Approx(3.0).epsilon(1e-12));
            CHECK(e.l == doctest::Approx(3.0).epsilon(1e-12));
        }
        CHECK(partitioned(s.network).B1 == kCycle);
    }
}

TEST_CASE("wye with the experiment values gives a passive delta") {
    const SynthesizedNetwork s = heuristic_reduce(validate(experiment::wye_network()), experiment::kOmega0);
    for (const auto& e : s.network.network().edges) {
        CHECK(e.r > 0.0);
        CHECK(e.l > 0.0);
    }
}

TEST_CASE("homogeneous wye gives a frequency-independent delta") {
    const auto a = heuristic_reduce(validate(homogeneous_wye()), 2.0).network.network();
    const auto b = heuristic_reduce(validate(homogeneous_wye()), 17.0).network.network();
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(std::abs(a.edges[k].r - b.edges[k].r) < 1e-10);
        CHECK(std::abs(a.edges[k].l - b.edges[k].l) < 1e-10);
    }
}

TEST_CASE("larger reduced graphs use lexicographic edges") {
    Network star{{"1", "2", "3", "4", "5"},
                 {{"a", "1", "5", 1, 1}, {"b", "2", "5", 1, 1}, {"c", "3", "5", 1, 1}, {"d", "4", "5", 1, 1}},
                 {"1", "2", "3", "4"}};
    const auto s = heuristic_reduce(validate(star), 1.0).network.network();
    REQUIRE(s.edges.size() == 6);
    CHECK(s.edges[0].id == "1-2");
    CHECK(s.edges[5].id == "3-4");
    for (const auto& e : s.edges) CHECK(e.r == doctest::Approx(4.0));
}

TEST_CASE("negative synthesized elements are refused unless allowed") {
    // mostly-resistive and mostly-inductive branches meeting at one interior
    // node: the 1-4 branch comes out with negative inductance at omega0 = 1
    Network bridge{{"1", "2", "3", "4"},
                   {{"a", "1", "3", 5.0, 1e-3}, {"b", "3", "2", 1e-3, 5.0}, {"c", "4", "3", 2.0, 0.01},
                    {"d", "1", "2", 0.01, 3.0}},
                   {"1", "2", "4"}};
    try {
        (void)heuristic_reduce(validate(bridge), 1.0);
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NegativeSynthesizedElement);
    }
    const auto s = heuristic_reduce(validate(bridge), 1.0, true).network.network();
    CHECK(s.edges[2].l < 0.0);
}

TEST_CASE("circulation direction of the delta") {
    const Matrix c = circulation_basis(kCycle);
    REQUIRE(c.cols() == 1);
    CHECK(c == Matrix::Ones(3, 1));
}

TEST_CASE("initial condition mapping") {
    const Vector i1{{-5, -5, 10}};
    CHECK((map_initial_condition(kCycle, i1, 0.0) - Vector{{0, -5, 5}}).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((map_initial_condition(kCycle, i1, 2.0) - Vector{{2, -3, 7}}).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(map_initial_condition(kCycle, Vector::Zero(3), 0.0).isZero());
    for (double g : {-4.0, 0.5, 3.0}) {
        CHECK((kCycle * map_initial_condition(kCycle, i1, g) - i1).cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK_THROWS_AS((void)map_initial_condition(kCycle, Vector{{1, 1, 1}}, 0.0), Error);
}

TEST_CASE("gamma draws are seeded") {
    const auto a = draw_gammas(7, 5);
    const auto b = draw_gammas(7, 5);
    const auto c = draw_gammas(8, 5);
    CHECK(a == b);
    CHECK(a != c);
    for (double g : a) {
        CHECK(g >= -5.0);
        CHECK(g <= 5.0);
    }
}

TEST_CASE("baseline is exact on a homogeneous wye at matched frequency") {
    const auto net = validate(homogeneous_wye());
    const double f = 1.5, w0 = 2 * std::numbers::pi * f;
    const Excitation x{{Sinusoid{100, f, 0}, Sinusoid{100, f, 2.0}, Sinusoid{100, f, -2.0}}};
    const Vector f0{{2, 1, -3}};
    const SolverConfig cfg{1e-3, 4.0, 1};
    const BaselineSweep sweep = run_baseline_sweep(net, w0, x, f0, {Vector::Zero(1)}, cfg);
    const Trajectory oracle = simulate_dae_oracle(net, x, f0, cfg);
    CHECK(compare_series(oracle.times, sweep.runs[0].trajectory.i1, oracle.i1, 0.0).max_rel < 1e-6);
}

TEST_CASE("experiment observations hold") {
    for (auto drive : {experiment::Drive::Sinusoid, experiment::Drive::Step}) {
        const experiment::Result res = experiment::run_wye(drive);
        CHECK(res.summaries.size() == 5);
        for (const auto& o : res.observations) {
            INFO(o.name << " = " << o.value);
            CHECK(o.holds);
        }
    }
}

}  // TEST_SUITE
