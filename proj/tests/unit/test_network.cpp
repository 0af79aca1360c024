#include "kronred/error.hpp"
#include "kronred/experiment.hpp"
#include "kronred/network.hpp"
#include "random_networks.hpp"

#include <doctest.h>

#include <random>

using namespace kronred;

namespace {

Network net_a(double r = 1.0, double l = 1.0) { return {{"1", "2"}, {{"e1", "1", "2", r, l}}, {"1", "2"}}; }

Network net_b(double r1 = 1.0, double l1 = 1.0, double r2 = 1.0, double l2 = 1.0) {
    return {{"1", "2", "3"}, {{"e1", "1", "3", r1, l1}, {"e2", "3", "2", r2, l2}}, {"1", "2"}};
}

ErrorCode code_of(const Network& n) {
    try {
        (void)validate(n);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected validate to throw");
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_SUITE("network") {

TEST_CASE("minimal and wye networks validate") {
    const auto a = validate(net_a());
    CHECK(a.node_count() == 2);
    CHECK(a.interior_count() == 0);
    const auto c = validate(experiment::wye_network());
    CHECK(c.edge_count() == 3);
    CHECK(c.interior_count() == 1);
    CHECK(c.interior_nodes() == std::vector<std::string>{"4"});
}

TEST_CASE("structural errors carry the offending entity") {
    CHECK(code_of(net_a(1.0, 0.0)) == ErrorCode::NonpositiveInductance);
    CHECK(code_of(net_a(1.0, -1.0)) == ErrorCode::NonpositiveInductance);
    CHECK(code_of(net_a(-0.1, 1.0)) == ErrorCode::NegativeResistance);

    Network empty = net_a();
    empty.boundary.clear();
    CHECK(code_of(empty) == ErrorCode::EmptyBoundary);

    Network unknown = net_a();
    unknown.edges[0].to = "9";
    try {
        (void)validate(unknown);
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnknownNodeRef);
        CHECK(e.subject() == "e1");
    }

    Network loop = net_a();
    loop.edges[0].to = "1";
    CHECK(code_of(loop) == ErrorCode::SelfLoop);

    Network dup = net_b();
    dup.edges[1].id = "e1";
    CHECK(code_of(dup) == ErrorCode::DuplicateId);

    Network split{{"1", "2", "3", "4"}, {{"a", "1", "2", 1, 1}, {"b", "3", "4", 1, 1}}, {"1", "3"}};
    try {
        (void)validate(split);
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Disconnected);
        CHECK(e.value() == 2.0);
    }
}

TEST_CASE("zero resistance is allowed, negative values only when asked") {
    CHECK_NOTHROW((void)validate(net_a(0.0, 1.0)));
    ValidationOptions loose;
    loose.allow_nonpassive = true;
    CHECK_NOTHROW((void)validate(net_a(-1.0, -1.0), loose));
    CHECK_THROWS_AS((void)validate(net_a(1.0, 0.0), loose), Error);
}

TEST_CASE("parallel edges are accepted") {
    Network n = net_a();
    n.edges.push_back({"e2", "2", "1", 2.0, 0.5});
    CHECK_NOTHROW((void)validate(n));
}

TEST_CASE("incidence matrices of the small examples") {
    const auto a = build_incidence(validate(net_a()));
    CHECK(a.B == Eigen::MatrixXi{{1}, {-1}});

    const auto c = partitioned(validate(experiment::wye_network()));
    CHECK(c.B0 == Matrix{{-1, -1, -1}});
    CHECK(c.B1 == Matrix::Identity(3, 3));

    const auto b_inc = build_incidence(validate(net_b()));
    CHECK(b_inc.B == Eigen::MatrixXi{{1, 0}, {0, -1}, {-1, 1}});
    const auto b = partition(b_inc, validate(net_b()));
    CHECK(b.B1 == Matrix{{1, 0}, {0, -1}});
    CHECK(b.B0 == Matrix{{-1, 1}});

    const auto a_parts = partitioned(validate(net_a()));
    CHECK(a_parts.B0.rows() == 0);
    CHECK(a_parts.B0.cols() == 1);
}

TEST_CASE("boundary rows come first, each group in input order") {
    Network n{{"x", "b2", "y", "b1"},
              {{"p", "x", "b2", 1, 1}, {"q", "y", "x", 1, 1}, {"s", "b1", "y", 1, 1}},
              {"b2", "b1"}};
    const auto v = validate(n);
    CHECK(v.ordered_nodes() == std::vector<std::string>{"b2", "b1", "x", "y"});
    CHECK(v.row_of("y") == 3);
}

TEST_CASE("incidence properties on random connected graphs") {
    std::mt19937_64 rng(11);
    testing::NetworkSpec spec;
    spec.max_nodes = 12;
    spec.max_edges = 24;
    for (int trial = 0; trial < 100; ++trial) {
        const Network n = testing::random_network(rng, spec);
        const auto v = validate(n);
        const auto inc = build_incidence(v);
        const Matrix B = inc.as_real();
        CHECK(B == testing::reference_incidence(n, v.ordered_nodes()));
        for (Index e = 0; e < B.cols(); ++e) {
            CHECK(inc.B.col(e).sum() == 0);
            CHECK((inc.B.col(e).array() == 1).count() == 1);
            CHECK((inc.B.col(e).array() == -1).count() == 1);
        }
        Eigen::FullPivLU<Matrix> lu(B);
        CHECK(lu.rank() == v.node_count() - 1);
        const auto parts = partition(inc, v);
        Eigen::FullPivLU<Matrix> lu0(parts.B0);
        CHECK(lu0.rank() == v.interior_count());
        Matrix stacked(B.rows(), B.cols());
        stacked << parts.B1, parts.B0;
        CHECK(stacked == B);
        CHECK((parts.l.array() > 0).all());
        CHECK((parts.r.array() >= 0).all());
    }
}

}  // TEST_SUITE
